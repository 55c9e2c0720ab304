use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// Bounds for the soft, statistical checks. Every field may be overridden
/// from a TOML file; missing keys keep their defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Thresholds {
    /// Band for the soluble proportion at the last checkpoint.
    pub density_ratio_min: f64,
    pub density_ratio_max: f64,
    /// Total-variation distance between the empirical 4-rank distribution
    /// and the symmetric-matrix limit.
    pub rank_tv_max: f64,
    /// Largest allowed gap between an empirical transition frequency and the
    /// kernel, over rows with at least `markov_min_samples` samples.
    pub markov_max_gap: f64,
    pub markov_min_samples: u64,
    /// Largest relative deviation `|X(a)| 2^m / |X| - 1` in the prebox scan.
    pub equidist_max_deviation: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            density_ratio_min: 0.50,
            density_ratio_max: 0.70,
            rank_tv_max: 0.05,
            markov_max_gap: 0.10,
            markov_min_samples: 200,
            equidist_max_deviation: 0.05,
        }
    }
}

impl Thresholds {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        let t: Thresholds = toml::from_str(&text).map_err(|e| LabError::Thresholds {
            path: path.into(),
            message: e.to_string(),
        })?;
        t.validate().map_err(|message| LabError::Thresholds {
            path: path.into(),
            message,
        })?;
        Ok(t)
    }

    pub fn validate(&self) -> std::result::Result<(), String> {
        let floats = [
            ("density_ratio_min", self.density_ratio_min),
            ("density_ratio_max", self.density_ratio_max),
            ("rank_tv_max", self.rank_tv_max),
            ("markov_max_gap", self.markov_max_gap),
            ("equidist_max_deviation", self.equidist_max_deviation),
        ];
        if let Some((name, v)) = floats.iter().find(|(_, v)| !(v.is_finite() && *v > 0.0)) {
            return Err(format!("{name} = {v} is not positive"));
        }
        if self.markov_min_samples == 0 {
            return Err("markov_min_samples must be positive".into());
        }
        if self.density_ratio_min > self.density_ratio_max {
            return Err("density_ratio_min exceeds density_ratio_max".into());
        }
        Ok(())
    }
}
