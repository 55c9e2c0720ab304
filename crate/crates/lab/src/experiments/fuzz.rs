use negpell_core::redei::{art2_sweep, fuzz_reciprocity, Art2Sweep, FuzzRecord, FuzzStatus};
use serde::{Deserialize, Serialize};

use crate::{Check, ExperimentConfig, Record, Report, Result, Table};

/// Number of reciprocity triples and the bound on their members.
pub const FUZZ_COUNT: usize = 500;
pub const FUZZ_MAX: u64 = 500;
/// Bound on the third entry in the Art2 sweep.
pub const ART2_MAX_C: u64 = 300;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzRow {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub symbol: Option<u8>,
    pub reversed: Option<u8>,
    pub status: String,
}

impl Record for FuzzRow {
    const HEADER: &'static [&'static str] = &["a", "b", "c", "symbol", "reversed", "status"];
}

impl From<&FuzzRecord> for FuzzRow {
    fn from(r: &FuzzRecord) -> Self {
        FuzzRow {
            a: r.triple.a(),
            b: r.triple.b(),
            c: r.triple.c(),
            symbol: r.symbol.map(|b| b.value()),
            reversed: r.reversed.map(|b| b.value()),
            status: match &r.status {
                FuzzStatus::Agree => "agree".into(),
                FuzzStatus::Violation => "violation".into(),
                FuzzStatus::Error(e) => format!("error: {e}"),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Art2Row {
    pub max_ab: u64,
    pub max_c: u64,
    pub checks: usize,
    pub mismatches_kappa0: usize,
    pub mismatches_kappa1: usize,
    pub calibration: u8,
    pub errors: usize,
}

impl Record for Art2Row {
    const HEADER: &'static [&'static str] = &[
        "max_ab",
        "max_c",
        "checks",
        "mismatches_kappa0",
        "mismatches_kappa1",
        "calibration",
        "errors",
    ];
}

pub fn run_redei_fuzz(config: &ExperimentConfig) -> Result<(Vec<FuzzRecord>, Art2Sweep)> {
    let records = fuzz_reciprocity(config.seed, FUZZ_COUNT, FUZZ_MAX)?;
    let sweep = art2_sweep(config.limit, ART2_MAX_C);
    Ok((records, sweep))
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let (records, sweep) = run_redei_fuzz(config)?;
    let fuzz_rows: Vec<FuzzRow> = records.iter().map(FuzzRow::from).collect();
    let bad = records
        .iter()
        .filter(|r| r.status != FuzzStatus::Agree)
        .count();
    let kappa = sweep.calibration();
    let art2 = Art2Row {
        max_ab: config.limit,
        max_c: ART2_MAX_C,
        checks: sweep.checks,
        mismatches_kappa0: sweep.mismatches[0],
        mismatches_kappa1: sweep.mismatches[1],
        calibration: kappa.value(),
        errors: sweep.errors.len(),
    };
    let checks = vec![
        Check::hard(
            "reciprocity",
            bad == 0 && records.len() >= FUZZ_COUNT,
            format!("{bad} disagreements or errors among {} triples with members below {FUZZ_MAX}, seed {}", records.len(), config.seed),
        ),
        Check::hard(
            "art2-consistency",
            sweep.errors.is_empty() && sweep.mismatches_at(kappa) == 0 && sweep.checks > 0,
            format!(
                "{} triples, calibration {}, {} mismatches, {} errors{}",
                sweep.checks,
                kappa.value(),
                sweep.mismatches_at(kappa),
                sweep.errors.len(),
                sweep.first_mismatch.map_or(String::new(), |m| format!("; first {}", m.triple))
            ),
        ),
    ];
    Ok(Report {
        tables: vec![
            Table::from_records("reciprocity", &fuzz_rows)?,
            Table::from_records("art2", &[art2])?,
        ],
        checks,
    })
}
