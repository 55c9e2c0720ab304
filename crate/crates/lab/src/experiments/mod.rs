//! One module per registered experiment. Each `run` returns the tables to
//! write and the hard and soft checks.

pub mod combi;
pub mod density;
pub mod equidist;
pub mod fuzz;
pub mod markov;
pub mod model;
pub mod oracle;
pub mod rank;
pub mod scan;

use crate::{Experiment, ExperimentConfig, LabError, Report, Result, ScanCache};

/// Discriminant of `Q(sqrt d)` for squarefree `d`.
pub fn discriminant(d: u64) -> u64 {
    if d % 4 == 1 {
        d
    } else {
        4 * d
    }
}

pub(crate) fn open_cache(config: &ExperimentConfig) -> Result<ScanCache> {
    match &config.cache {
        Some(p) => ScanCache::open(p),
        None => Ok(ScanCache::disabled()),
    }
}

/// Validates the configuration and runs the experiment on a pool of
/// `config.threads` workers.
pub fn run(config: &ExperimentConfig) -> Result<Report> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.threads)
        .build()
        .map_err(|e| LabError::Config(format!("thread pool: {e}")))?;
    pool.install(|| match config.experiment {
        Experiment::Density => density::run(config),
        Experiment::RankDistribution => rank::run(config),
        Experiment::Markov => markov::run(config),
        Experiment::OracleCrosscheck => oracle::run(config),
        Experiment::RedeiFuzz => fuzz::run(config),
        Experiment::Combi => combi::run(config),
        Experiment::Equidist => equidist::run(config),
        Experiment::ModelTables => model::run(config),
    })
}
