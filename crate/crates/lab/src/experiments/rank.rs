use negpell_core::arith::factor;
use negpell_core::model::{p_sym_in, sym_limit_distribution};
use negpell_core::RankDistributionF64;
use serde::{Deserialize, Serialize};

use super::scan::scan;
use super::{discriminant, open_cache};
use crate::{Check, ExperimentConfig, Ordering, Record, Report, Result, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankRow {
    pub n: usize,
    pub count: u64,
    pub frequency: f64,
    pub model: f64,
    pub model_error: f64,
}

impl Record for RankRow {
    const HEADER: &'static [&'static str] = &["n", "count", "frequency", "model", "model_error"];
}

/// Counts split by the number of prime divisors, next to `P_Sym(omega - 1, n)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OmegaRankRow {
    pub omega: usize,
    pub n: usize,
    pub count: u64,
    pub frequency: f64,
    pub model: f64,
}

impl Record for OmegaRankRow {
    const HEADER: &'static [&'static str] = &["omega", "n", "count", "frequency", "model"];
}

pub struct RankScan {
    pub total: u64,
    pub counts: Vec<u64>,
    /// `by_omega[w][n]`.
    pub by_omega: Vec<Vec<u64>>,
}

pub fn rank_counts(config: &ExperimentConfig) -> Result<RankScan> {
    let mut counts = vec![0u64; 1];
    let mut by_omega: Vec<Vec<u64>> = Vec::new();
    let mut total = 0;
    let mut cache = open_cache(config)?;
    scan(config.limit, &mut cache, |records| {
        for r in records {
            if config.order == Ordering::Discriminant && discriminant(r.d) >= config.limit {
                continue;
            }
            let n = r.rk4 as usize;
            let w = factor(r.d as u128).omega();
            if counts.len() <= n {
                counts.resize(n + 1, 0);
            }
            counts[n] += 1;
            if by_omega.len() <= w {
                by_omega.resize(w + 1, Vec::new());
            }
            if by_omega[w].len() <= n {
                by_omega[w].resize(n + 1, 0);
            }
            by_omega[w][n] += 1;
            total += 1;
        }
    })?;
    Ok(RankScan {
        total,
        counts,
        by_omega,
    })
}

pub fn run_rank_distribution(
    config: &ExperimentConfig,
) -> Result<(Vec<RankRow>, Vec<OmegaRankRow>, f64)> {
    let scan = rank_counts(config)?;
    let n_max = scan.counts.len().max(7) - 1;
    let model: RankDistributionF64 = sym_limit_distribution(n_max as u32);
    let total = scan.total.max(1) as f64;
    let freqs: Vec<f64> = (0..=n_max)
        .map(|n| scan.counts.get(n).copied().unwrap_or(0) as f64 / total)
        .collect();
    let tv = model.total_variation(&freqs);
    let rows = (0..=n_max)
        .map(|n| RankRow {
            n,
            count: scan.counts.get(n).copied().unwrap_or(0),
            frequency: freqs[n],
            model: model.probs[n],
            model_error: model.certificate.unwrap_or(0.0),
        })
        .collect();
    let mut by_omega = Vec::new();
    for (w, row) in scan.by_omega.iter().enumerate() {
        let size: u64 = row.iter().sum();
        if size == 0 {
            continue;
        }
        for n in 0..w {
            let count = row.get(n).copied().unwrap_or(0);
            by_omega.push(OmegaRankRow {
                omega: w,
                n,
                count,
                frequency: count as f64 / size as f64,
                model: p_sym_in::<f64>(w as u32 - 1, n as u32),
            });
        }
    }
    Ok((rows, by_omega, tv))
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let (rows, by_omega, tv) = run_rank_distribution(config)?;
    let total: u64 = rows.iter().map(|r| r.count).sum();
    let omega_total: u64 = by_omega.iter().map(|r| r.count).sum();
    let checks = vec![
        Check::hard(
            "counts-sum",
            total == omega_total && total > 0,
            format!("{total} radicands"),
        ),
        Check::soft(
            "limit-total-variation",
            tv <= config.thresholds.rank_tv_max,
            format!(
                "total variation {tv:.6} against {} below X = {}",
                config.thresholds.rank_tv_max, config.limit
            ),
        ),
    ];
    Ok(Report {
        tables: vec![
            Table::from_records("limit", &rows)?,
            Table::from_records("by-omega", &by_omega)?,
        ],
        checks,
    })
}
