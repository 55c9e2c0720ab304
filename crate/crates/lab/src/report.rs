use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::{ExperimentConfig, LabError, Result, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    /// Exact identities; a failure is a bug.
    Hard,
    /// Statistical comparisons against documented thresholds.
    Soft,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub severity: Severity,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn hard(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            severity: Severity::Hard,
            pass,
            detail: detail.into(),
        }
    }

    pub fn soft(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            severity: Severity::Soft,
            pass,
            detail: detail.into(),
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match (self.pass, self.severity) {
            (true, _) => "ok",
            (false, Severity::Hard) => "FAIL",
            (false, Severity::Soft) => "BREACH",
        };
        write!(
            f,
            "[{verdict}] {} ({:?}): {}",
            self.name, self.severity, self.detail
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    HardFailure,
    SoftBreach,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::HardFailure => 1,
            Status::SoftBreach => 2,
        }
    }
}

/// Tables and checks produced by one experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub tables: Vec<Table>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn status(&self) -> Status {
        let failed = |s: Severity| self.checks.iter().any(|c| c.severity == s && !c.pass);
        if failed(Severity::Hard) {
            Status::HardFailure
        } else if failed(Severity::Soft) {
            Status::SoftBreach
        } else {
            Status::Pass
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// The JSON run manifest written next to the tables.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    pub config: ExperimentConfig,
    pub versions: Versions,
    pub wall_time_secs: f64,
    pub status: Status,
    pub exit_code: i32,
    pub checks: Vec<Check>,
    pub outputs: Vec<PathBuf>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Versions {
    pub negpell_lab: String,
    pub negpell_core: String,
}

impl Versions {
    pub fn current() -> Self {
        // Both crates share the workspace version.
        let v = env!("CARGO_PKG_VERSION").to_string();
        Versions {
            negpell_lab: v.clone(),
            negpell_core: v,
        }
    }
}

/// Writes every table and the manifest into `config.out`.
pub fn write_outputs(
    config: &ExperimentConfig,
    report: &Report,
    wall_time_secs: f64,
) -> Result<Manifest> {
    let dir = &config.out;
    std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let prefix = config.experiment.name();
    let mut outputs = Vec::new();
    for t in &report.tables {
        outputs.push(t.write(dir, prefix)?);
    }
    let status = report.status();
    let manifest = Manifest {
        experiment: prefix.into(),
        config: config.clone(),
        versions: Versions::current(),
        wall_time_secs,
        status,
        exit_code: status.exit_code(),
        checks: report.checks.clone(),
        outputs,
    };
    let path = manifest_path(dir, prefix);
    let text = serde_json::to_string_pretty(&manifest)?;
    std::fs::write(&path, text).map_err(|e| LabError::io(&path, e))?;
    Ok(manifest)
}

pub fn manifest_path(dir: &Path, experiment: &str) -> PathBuf {
    dir.join(format!("{experiment}.manifest.json"))
}
