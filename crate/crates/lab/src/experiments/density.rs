use negpell_core::model::alpha;
use negpell_core::{Exact, Scalar};
use serde::{Deserialize, Serialize};

use super::scan::{checkpoints, scan};
use super::{discriminant, open_cache};
use crate::{Check, ExperimentConfig, LabError, Ordering, Record, Report, Result, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityRow {
    pub x: u64,
    pub family: u64,
    pub negative: u64,
    /// `negative / family`, correctly rounded.
    pub ratio: f64,
    pub one_minus_alpha: f64,
}

impl Record for DensityRow {
    const HEADER: &'static [&'static str] =
        &["x", "family", "negative", "ratio", "one_minus_alpha"];
}

pub(crate) fn one_minus_alpha() -> f64 {
    (Exact::from_u64(1) - alpha::<Exact>(1e-18).expect("valid tolerance").value).to_f64()
}

/// Exact counts of the family and of its soluble part at each checkpoint.
pub fn run_density_scan(config: &ExperimentConfig) -> Result<Vec<DensityRow>> {
    let xs = checkpoints(config.limit);
    let mut family = vec![0u64; xs.len()];
    let mut negative = vec![0u64; xs.len()];
    let mut cache = open_cache(config)?;
    scan(config.limit, &mut cache, |records| {
        for r in records {
            let key = match config.order {
                Ordering::Radicand => r.d,
                Ordering::Discriminant => discriminant(r.d),
            };
            for (k, &x) in xs.iter().enumerate() {
                if key < x {
                    family[k] += 1;
                    negative[k] += u64::from(r.pellian);
                }
            }
        }
    })?;
    let reference = one_minus_alpha();
    xs.iter()
        .enumerate()
        .map(|(k, &x)| {
            if family[k] == 0 {
                return Err(LabError::Config(format!(
                    "degenerate checkpoint X = {x}: no radicands below it"
                )));
            }
            // Both counts are below 2^53, so the quotient is correctly rounded.
            let ratio = negative[k] as f64 / family[k] as f64;
            Ok(DensityRow {
                x,
                family: family[k],
                negative: negative[k],
                ratio,
                one_minus_alpha: reference,
            })
        })
        .collect()
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let rows = run_density_scan(config)?;
    let t = &config.thresholds;
    let mut checks = Vec::new();
    let monotone = rows
        .windows(2)
        .all(|w| w[0].family <= w[1].family && w[0].negative <= w[1].negative);
    let bounded = rows.iter().all(|r| r.negative <= r.family);
    checks.push(Check::hard(
        "counts-consistent",
        monotone && bounded,
        "counts non-decreasing and soluble count within the family",
    ));
    let last = rows.last().expect("at least one checkpoint");
    let inside = (t.density_ratio_min..=t.density_ratio_max).contains(&last.ratio);
    checks.push(Check::soft(
        "ratio-band",
        inside,
        format!(
            "ratio {:.6} at X = {} against [{}, {}]; limit 1 - alpha = {:.6}",
            last.ratio, last.x, t.density_ratio_min, t.density_ratio_max, last.one_minus_alpha
        ),
    ));
    Ok(Report {
        tables: vec![Table::from_records("checkpoints", &rows)?],
        checks,
    })
}
