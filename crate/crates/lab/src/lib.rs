//! Batch experiments over `negpell-core`: counting scans of the special
//! family, oracle cross-checks, fuzzing and model tables.
//!
//! Every experiment returns a [`Report`] of named tables and checks. Checks
//! are hard (exact identities) or soft (statistics against [`Thresholds`]);
//! the command-line tool maps them to exit codes 1 and 2.

mod cache;
mod config;
mod error;
pub mod experiments;
mod report;
mod table;
mod thresholds;

pub use cache::{ScanCache, ScanRecord};
pub use config::{Experiment, ExperimentConfig, Ordering};
pub use error::{LabError, Result};
pub use experiments::run;
pub use report::{
    manifest_path, write_outputs, Check, Manifest, Report, Severity, Status, Versions,
};
pub use table::{Record, Table};
pub use thresholds::Thresholds;

/// Environment variable naming the scan cache when `--cache` is absent.
pub const CACHE_ENV: &str = "NEGPELL_CACHE";
