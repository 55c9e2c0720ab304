use negpell_core::arith::{sieve_family_d, FamilyDElement};
use negpell_core::pell::neg_pell_soluble;
use negpell_core::qfclass::{artin_sequence_permuted, narrow_class_group};
use negpell_core::redei::rk4;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::discriminant;
use crate::{Check, ExperimentConfig, Record, Report, Result, Table};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRow {
    pub d: u64,
    pub delta: u64,
    pub h_plus: u64,
    /// Odd continued-fraction period.
    pub pellian_cf: bool,
    /// `(sqrt d)` trivial in the narrow class group.
    pub r_trivial: bool,
    pub artin_pellian: bool,
    pub rk4_fast: usize,
    pub rk4_oracle: usize,
    pub agree: bool,
}

impl Record for OracleRow {
    const HEADER: &'static [&'static str] = &[
        "d",
        "delta",
        "h_plus",
        "pellian_cf",
        "r_trivial",
        "artin_pellian",
        "rk4_fast",
        "rk4_oracle",
        "agree",
    ];
}

fn row(d: &FamilyDElement) -> negpell_core::Result<OracleRow> {
    let data = narrow_class_group(d)?;
    let order: Vec<usize> = (0..d.omega()).collect();
    let art = artin_sequence_permuted(&data, &order)?;
    let pellian_cf = neg_pell_soluble(d.d())?;
    let r_trivial = data.sqrt_d_class_trivial();
    let rk4_fast = rk4(d);
    let rk4_oracle = data.rk4();
    let agree = pellian_cf == r_trivial && r_trivial == art.pellian && rk4_fast == rk4_oracle;
    Ok(OracleRow {
        d: d.d(),
        delta: data.delta as u64,
        h_plus: data.h_plus,
        pellian_cf,
        r_trivial,
        artin_pellian: art.pellian,
        rk4_fast,
        rk4_oracle,
        agree,
    })
}

/// Every family member with discriminant at most `bound`, in order.
pub fn run_oracle_crosscheck(bound: u64) -> Vec<(u64, negpell_core::Result<OracleRow>)> {
    let ds: Vec<FamilyDElement> = sieve_family_d(bound + 1)
        .into_iter()
        .filter(|d| discriminant(d.d()) <= bound)
        .collect();
    ds.par_iter().map(|d| (d.d(), row(d))).collect()
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let results = run_oracle_crosscheck(config.limit);
    let mut rows = Vec::with_capacity(results.len());
    let mut errors = Vec::new();
    for (d, r) in results {
        match r {
            Ok(row) => rows.push(row),
            Err(e) => errors.push(format!("d = {d}: {e}")),
        }
    }
    let bad: Vec<u64> = rows.iter().filter(|r| !r.agree).map(|r| r.d).collect();
    let pell_bad = rows
        .iter()
        .filter(|r| !(r.pellian_cf == r.r_trivial && r.r_trivial == r.artin_pellian))
        .count();
    let rk4_bad = rows.iter().filter(|r| r.rk4_fast != r.rk4_oracle).count();
    let first = |v: &[u64]| {
        v.first()
            .map_or(String::new(), |d| format!("; first offending d = {d}"))
    };
    let has = |pred: &dyn Fn(&OracleRow) -> bool| rows.iter().any(pred);
    let mut checks = vec![
        Check::hard(
            "oracle-errors",
            errors.is_empty(),
            format!(
                "{} oracle errors{}",
                errors.len(),
                errors.first().map_or(String::new(), |e| format!("; {e}"))
            ),
        ),
        Check::hard(
            "pell-equivalence",
            pell_bad == 0,
            format!(
                "{pell_bad} mismatches among {} fields with discriminant <= {}{}",
                rows.len(),
                config.limit,
                first(&bad)
            ),
        ),
        Check::hard(
            "rk4-equivalence",
            rk4_bad == 0,
            format!("{rk4_bad} mismatches among {} fields", rows.len()),
        ),
    ];
    if config.limit >= 136 {
        checks.push(Check::hard(
            "negative-case",
            has(&|r| r.d == 34 && !r.pellian_cf && !r.r_trivial),
            "d = 34 is not Pellian",
        ));
    }
    if config.limit >= 5 {
        let primes_ok = rows
            .iter()
            .filter(|r| r.d % 4 == 1 && negpell_core::arith::is_prime(r.d as u128))
            .all(|r| r.agree && r.pellian_cf);
        checks.push(Check::hard(
            "prime-cases",
            primes_ok,
            "every prime 1 mod 4 is Pellian",
        ));
    }
    Ok(Report {
        tables: vec![Table::from_records("fields", &rows)?],
        checks,
    })
}
