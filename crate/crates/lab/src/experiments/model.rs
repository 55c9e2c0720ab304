use negpell_core::model::{
    alpha, check_pell_recursion, markov_kernel, model_table, p_rect, p_sym, stevenhagen_density,
    ModelRow,
};
use negpell_core::{Exact, Scalar};
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::density::one_minus_alpha;
use crate::{Check, ExperimentConfig, Record, Report, Result, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelTableRow {
    pub kind: String,
    pub params: String,
    pub numerator: String,
    pub denominator: String,
    pub value: f64,
}

impl Record for ModelTableRow {
    const HEADER: &'static [&'static str] =
        &["kind", "params", "numerator", "denominator", "value"];
}

impl From<&ModelRow> for ModelTableRow {
    fn from(r: &ModelRow) -> Self {
        ModelTableRow {
            kind: r.kind.into(),
            params: r
                .params
                .iter()
                .map(i64::to_string)
                .collect::<Vec<_>>()
                .join(" "),
            numerator: r.value.numer().to_string(),
            denominator: r.value.denom().to_string(),
            value: r.value.to_f64(),
        }
    }
}

fn gf2_rank(rows: &[u64]) -> usize {
    let mut rows = rows.to_vec();
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank];
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && *row >> bit & 1 == 1 {
                *row ^= pivot;
            }
        }
        rank += 1;
    }
    rank
}

/// Kernel-dimension counts over all `m x n` matrices: `out[j]` matrices have
/// a right kernel of dimension `j`.
pub fn enumerate_rect(m: u32, n: u32) -> Vec<u64> {
    let mut counts = vec![0u64; n as usize + 1];
    for bits in 0u64..1 << (m * n) {
        let rows: Vec<u64> = (0..m).map(|i| bits >> (i * n) & ((1 << n) - 1)).collect();
        counts[n as usize - gf2_rank(&rows)] += 1;
    }
    counts
}

/// Kernel-dimension counts over all symmetric `r x r` matrices.
pub fn enumerate_sym(r: u32) -> Vec<u64> {
    let cells: Vec<(u32, u32)> = (0..r).flat_map(|i| (i..r).map(move |j| (i, j))).collect();
    let mut counts = vec![0u64; r as usize + 1];
    for bits in 0u64..1 << cells.len() {
        let mut rows = vec![0u64; r as usize];
        for (k, &(i, j)) in cells.iter().enumerate() {
            if bits >> k & 1 == 1 {
                rows[i as usize] |= 1 << j;
                rows[j as usize] |= 1 << i;
            }
        }
        counts[r as usize - gf2_rank(&rows)] += 1;
    }
    counts
}

fn frac(count: u64, total: u64) -> Exact {
    Exact::new(count.into(), total.into())
}

/// Mismatches between the closed forms and exhaustive enumeration for
/// `m, n <= 4` and `r <= 5`.
pub fn enumeration_mismatches() -> Vec<String> {
    let mut bad = Vec::new();
    for m in 0..=4u32 {
        for n in 0..=4u32 {
            let c = enumerate_rect(m, n);
            for j in 0..=n {
                if p_rect(m, n, j) != frac(c[j as usize], 1 << (m * n)) {
                    bad.push(format!("P({m}, {n}, {j})"));
                }
            }
        }
    }
    for r in 0..=5u32 {
        let c = enumerate_sym(r);
        for n in 0..=r {
            if p_sym(r, n) != frac(c[n as usize], 1 << (r * (r + 1) / 2)) {
                bad.push(format!("P_Sym({r}, {n})"));
            }
        }
    }
    bad
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let m_max = config.limit as u32;
    let rows: Vec<ModelTableRow> = model_table(4, 6, 6)
        .iter()
        .map(ModelTableRow::from)
        .collect();
    let recursion_bad: Vec<u32> = (0..=m_max)
        .filter(|&m| check_pell_recursion(m).is_err())
        .collect();
    let enum_bad = enumeration_mismatches();
    let a = alpha::<Exact>(1e-15)?;
    let a_f = a.value.to_f64();
    let s = stevenhagen_density();
    let s_gap = (s.value.to_f64() - one_minus_alpha()).abs();
    let kernel = markov_kernel::<Exact>(8);
    let kernel_ok =
        (0..=8).all(|n| kernel.raw_row_sum(n) == Exact::inv_pow2(n as u32) * Exact::one());
    let checks = vec![
        Check::hard(
            "pell-recursion",
            recursion_bad.is_empty(),
            format!("identity for m <= {m_max}; failures at {recursion_bad:?}"),
        ),
        Check::hard(
            "enumeration",
            enum_bad.is_empty(),
            format!("closed forms vs enumeration for m, n <= 4, r <= 5; mismatches {enum_bad:?}"),
        ),
        Check::hard(
            "alpha",
            format!("{a_f:.5}") == "0.41942" && a.error_bound < 1e-12,
            format!("alpha = {a_f:.12} with certificate {:.1e}", a.error_bound),
        ),
        Check::hard(
            "density-identity",
            s_gap < 1e-9,
            format!("|sum - (1 - alpha)| = {s_gap:.2e}"),
        ),
        Check::hard(
            "kernel-rows",
            kernel_ok,
            "row n of the transition kernel sums to 2^-n",
        ),
    ];
    Ok(Report {
        tables: vec![Table::from_records("values", &rows)?],
        checks,
    })
}
