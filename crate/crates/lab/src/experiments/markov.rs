use negpell_core::arith::sieve_family_d;
use negpell_core::model::markov_kernel;
use negpell_core::qfclass::{narrow_class_group, NarrowClassData};
use negpell_core::Scalar;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Check, ExperimentConfig, LabError, Record, Report, Result, Table};

/// One step of the chain: from `n_m` to `Some(n_{m+1})`, or `None` when
/// `(sqrt d)` leaves `2^m Cl`.
pub type Step = (usize, Option<usize>);

/// Whether the class of `(sqrt d)` lies in `2^k Cl`.
fn r_in_power(data: &NarrowClassData, k: u32) -> bool {
    data.exponents
        .iter()
        .zip(&data.r_class)
        .all(|(&e, &c)| c % (1u64 << k.min(e)) == 0)
}

/// The steps taken by `d` while it stays Pellian so far: at level `m >= 2`
/// with `(sqrt d)` in `2^{m-1} Cl` the state is `n_m = rk_{2^m}`. The walk
/// stops after the first exit or after a step out of state 0.
pub fn chain_steps(data: &NarrowClassData) -> Vec<Step> {
    let mut out = Vec::new();
    if !r_in_power(data, 1) {
        return out;
    }
    let mut m = 2;
    loop {
        let n = data.rank_2k(m);
        if !r_in_power(data, m) {
            out.push((n, None));
            return out;
        }
        out.push((n, Some(data.rank_2k(m + 1))));
        if n == 0 {
            return out;
        }
        m += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovRow {
    pub from: usize,
    /// Next state, or `exit`.
    pub to: String,
    pub count: u64,
    pub samples: u64,
    pub empirical: f64,
    pub model: f64,
}

impl Record for MarkovRow {
    const HEADER: &'static [&'static str] =
        &["from", "to", "count", "samples", "empirical", "model"];
}

/// `counts[n][j]` for `j <= n`, with the exit count in the last slot.
pub fn transition_counts(limit: u64) -> Result<Vec<Vec<u64>>> {
    let ds = sieve_family_d(limit);
    let steps = ds
        .par_iter()
        .map(|d| {
            narrow_class_group(d)
                .map(|data| chain_steps(&data))
                .map_err(LabError::from)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut counts: Vec<Vec<u64>> = Vec::new();
    for (n, to) in steps.into_iter().flatten() {
        if counts.len() <= n {
            counts.resize_with(n + 1, Vec::new);
        }
        let row = &mut counts[n];
        if row.is_empty() {
            row.resize(n + 2, 0);
        }
        row[to.unwrap_or(n + 1)] += 1;
    }
    for (n, row) in counts.iter_mut().enumerate() {
        row.resize(n + 2, 0);
    }
    Ok(counts)
}

pub fn run_markov_check(config: &ExperimentConfig) -> Result<Vec<MarkovRow>> {
    let counts = transition_counts(config.limit)?;
    let kernel = markov_kernel::<f64>(counts.len().saturating_sub(1) as u32);
    let mut rows = Vec::new();
    for (n, row) in counts.iter().enumerate() {
        let samples: u64 = row.iter().sum();
        for (j, &count) in row.iter().enumerate() {
            let (to, model) = if j <= n {
                (j.to_string(), kernel.raw[n][j])
            } else {
                ("exit".to_string(), 1.0 - f64::inv_pow2(n as u32))
            };
            let empirical = if samples == 0 {
                0.0
            } else {
                count as f64 / samples as f64
            };
            rows.push(MarkovRow {
                from: n,
                to,
                count,
                samples,
                empirical,
                model,
            });
        }
    }
    Ok(rows)
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let rows = run_markov_check(config)?;
    let t = &config.thresholds;
    let zero_ok = rows
        .iter()
        .filter(|r| r.from == 0)
        .all(|r| (r.to == "0") == (r.count == r.samples));
    let sums_ok = {
        let mut ok = true;
        for n in 0..=rows.iter().map(|r| r.from).max().unwrap_or(0) {
            let row: Vec<&MarkovRow> = rows.iter().filter(|r| r.from == n).collect();
            ok &= row.iter().map(|r| r.count).sum::<u64>() == row.first().map_or(0, |r| r.samples);
        }
        ok
    };
    let compared: Vec<&MarkovRow> = rows
        .iter()
        .filter(|r| r.samples >= t.markov_min_samples)
        .collect();
    let gap = compared
        .iter()
        .map(|r| (r.empirical - r.model).abs())
        .fold(0.0, f64::max);
    let states: Vec<usize> = {
        let mut s: Vec<usize> = compared.iter().map(|r| r.from).collect();
        s.dedup();
        s
    };
    let checks = vec![
        Check::hard("zero-state-stays", zero_ok, "state 0 always moves to state 0"),
        Check::hard("rows-sum", sums_ok, "counts in each row add up to its samples"),
        Check::soft(
            "kernel-gap",
            gap <= t.markov_max_gap,
            format!(
                "largest gap {gap:.6} against {} over states {states:?} with at least {} samples, d < {}",
                t.markov_max_gap, t.markov_min_samples, config.limit
            ),
        ),
    ];
    Ok(Report {
        tables: vec![Table::from_records("transitions", &rows)?],
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use negpell_core::arith::family_d_element;

    #[test]
    fn chain_of_small_fields() {
        // A prime: trivial 2-part, one step 0 -> 0.
        let p = narrow_class_group(&family_d_element(13).unwrap()).unwrap();
        assert_eq!(chain_steps(&p), vec![(0, Some(0))]);
        // 34: Z/4 with (sqrt 34) of order 2, so in 2Cl but not in 4Cl.
        let d = narrow_class_group(&family_d_element(34).unwrap()).unwrap();
        assert_eq!(chain_steps(&d), vec![(1, None)]);
    }
}
