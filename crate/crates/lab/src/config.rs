use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{LabError, Result, Thresholds};

/// The fixed experiment registry.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    Density,
    RankDistribution,
    Markov,
    OracleCrosscheck,
    RedeiFuzz,
    Combi,
    Equidist,
    ModelTables,
}

impl Experiment {
    pub const ALL: [Experiment; 8] = [
        Experiment::Density,
        Experiment::RankDistribution,
        Experiment::Markov,
        Experiment::OracleCrosscheck,
        Experiment::RedeiFuzz,
        Experiment::Combi,
        Experiment::Equidist,
        Experiment::ModelTables,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Density => "density",
            Experiment::RankDistribution => "rank-distribution",
            Experiment::Markov => "markov",
            Experiment::OracleCrosscheck => "oracle-crosscheck",
            Experiment::RedeiFuzz => "redei-fuzz",
            Experiment::Combi => "combi",
            Experiment::Equidist => "equidist",
            Experiment::ModelTables => "model-tables",
        }
    }

    /// What `--limit` means for this experiment.
    pub fn limit_meaning(self) -> &'static str {
        match self {
            Experiment::Density | Experiment::RankDistribution => "radicands d < limit",
            Experiment::Markov => "radicands d < limit (discriminant at most 4 limit)",
            Experiment::OracleCrosscheck => "discriminant bound",
            Experiment::RedeiFuzz => "discriminant bound for the Art2 sweep",
            Experiment::Combi => "number of random additive systems",
            Experiment::Equidist => "primes per prebox coordinate",
            Experiment::ModelTables => "largest m in the Pell recursion",
        }
    }

    pub fn default_limit(self) -> u64 {
        match self {
            Experiment::Density => 10_000_000,
            Experiment::RankDistribution => 1_000_000,
            Experiment::Markov => 100_000,
            Experiment::OracleCrosscheck => 400_000,
            Experiment::RedeiFuzz => 100_000,
            Experiment::Combi => 10_000,
            Experiment::Equidist => 500,
            Experiment::ModelTables => 20,
        }
    }

    pub fn max_limit(self) -> u64 {
        match self {
            Experiment::Density => 1_000_000_000,
            Experiment::RankDistribution => 100_000_000,
            Experiment::Markov => 1_000_001,
            Experiment::OracleCrosscheck | Experiment::RedeiFuzz => {
                negpell_core::qfclass::DEFAULT_DISCRIMINANT_BOUND as u64
            }
            Experiment::Combi => 1_000_000,
            Experiment::Equidist => 3_000,
            Experiment::ModelTables => 64,
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| LabError::UnknownExperiment(s.into()))
    }
}

/// How radicands are ordered in the counting scans.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Ordering {
    /// `d < X`.
    #[default]
    Radicand,
    /// Discriminant of `Q(sqrt d)` below `X`.
    Discriminant,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub limit: u64,
    pub seed: u64,
    pub thresholds: Thresholds,
    pub threshold_file: Option<PathBuf>,
    pub out: PathBuf,
    pub cache: Option<PathBuf>,
    /// Worker threads; 0 leaves the choice to rayon.
    pub threads: usize,
    pub order: Ordering,
}

impl ExperimentConfig {
    pub fn new(experiment: Experiment) -> Self {
        ExperimentConfig {
            experiment,
            limit: experiment.default_limit(),
            seed: 0,
            thresholds: Thresholds::default(),
            threshold_file: None,
            out: PathBuf::from("out"),
            cache: None,
            threads: 0,
            order: Ordering::Radicand,
        }
    }

    pub fn with_limit(mut self, limit: u64) -> Self {
        self.limit = limit;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.limit < 2 {
            return Err(LabError::Config(format!(
                "limit must be at least 2, got {}",
                self.limit
            )));
        }
        let max = self.experiment.max_limit();
        if self.limit > max {
            return Err(LabError::Config(format!(
                "limit {} exceeds {max} for {} ({})",
                self.limit,
                self.experiment,
                self.experiment.limit_meaning()
            )));
        }
        self.thresholds.validate().map_err(LabError::Config)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
            assert!(e.default_limit() <= e.max_limit());
        }
        assert!("pell".parse::<Experiment>().is_err());
    }

    #[test]
    fn limits_are_checked() {
        assert!(ExperimentConfig::new(Experiment::Density)
            .with_limit(1)
            .validate()
            .is_err());
        assert!(ExperimentConfig::new(Experiment::Markov)
            .with_limit(2_000_000)
            .validate()
            .is_err());
        assert!(ExperimentConfig::new(Experiment::Combi).validate().is_ok());
    }
}
