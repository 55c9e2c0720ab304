use negpell_core::equidist::{
    build_prebox, interval_with_count, partition_sum, scan_deviation, CountReport, Prebox,
    SymbolConstraint,
};
use serde::{Deserialize, Serialize};

use crate::{Check, ExperimentConfig, Record, Report, Result, Table};

pub const TRIALS: usize = 100;
/// Left end of the first interval of the main prebox.
pub const START: u64 = 100;
pub const AUX: [u64; 2] = [2, 5];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub scan: String,
    pub trial: usize,
    pub r: usize,
    pub sizes: String,
    pub constraints: usize,
    pub count: u64,
    pub expected: f64,
    pub deviation: f64,
}

impl Record for ScanRow {
    const HEADER: &'static [&'static str] = &[
        "scan",
        "trial",
        "r",
        "sizes",
        "constraints",
        "count",
        "expected",
        "deviation",
    ];
}

impl ScanRow {
    fn new(scan: &str, trial: usize, c: &CountReport) -> Self {
        ScanRow {
            scan: scan.into(),
            trial,
            r: c.r,
            sizes: c
                .sizes
                .iter()
                .map(usize::to_string)
                .collect::<Vec<_>>()
                .join("x"),
            constraints: c.constraints,
            count: c.count,
            expected: c.expected(),
            deviation: c.deviation,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionRow {
    pub prebox: String,
    pub keys: usize,
    pub sum: u64,
    pub total: u64,
}

impl Record for PartitionRow {
    const HEADER: &'static [&'static str] = &["prebox", "keys", "sum", "total"];
}

/// Two consecutive intervals from [`START`] holding `n` admissible primes each.
pub fn main_prebox(n: usize, aux: &[u64]) -> Result<Prebox> {
    let t1 = interval_with_count(START, n)?;
    let t2 = interval_with_count(t1, n)?;
    Ok(build_prebox(&[(START, t1), (t1, t2)], aux)?)
}

/// `(10, 17]` (the primes 13 and 17) followed by two `n`-prime intervals.
pub fn three_coordinate_prebox(n: usize) -> Result<Prebox> {
    let t1 = interval_with_count(START, n)?;
    let t2 = interval_with_count(t1, n)?;
    Ok(build_prebox(&[(10, 17), (START, t1), (t1, t2)], &[])?)
}

pub fn run_equidist(config: &ExperimentConfig) -> Result<(Vec<ScanRow>, Vec<PartitionRow>)> {
    let n = config.limit as usize;
    let seed = config.seed;
    let mut rows = Vec::new();
    let main = main_prebox(n, &[])?;
    let s = scan_deviation(&main, &SymbolConstraint::full(2, 0), TRIALS, seed)?;
    rows.extend(
        s.reports
            .iter()
            .enumerate()
            .map(|(i, c)| ScanRow::new("pairs", i, c)),
    );
    let with_aux = main_prebox(n, &AUX)?;
    let s = scan_deviation(
        &with_aux,
        &SymbolConstraint::full(2, AUX.len()),
        TRIALS,
        seed,
    )?;
    rows.extend(
        s.reports
            .iter()
            .enumerate()
            .map(|(i, c)| ScanRow::new("pairs-aux", i, c)),
    );
    let three = three_coordinate_prebox(n)?;
    let s = scan_deviation(&three, &SymbolConstraint::full(3, 0), TRIALS, seed)?;
    rows.extend(
        s.reports
            .iter()
            .enumerate()
            .map(|(i, c)| ScanRow::new("three", i, c)),
    );

    let mut parts = Vec::new();
    for (name, pb, shape) in [
        ("pairs-aux", &with_aux, SymbolConstraint::full(2, AUX.len())),
        ("three", &three, SymbolConstraint::full(3, 0)),
    ] {
        let (sum, total) = partition_sum(pb, &shape)?;
        parts.push(PartitionRow {
            prebox: name.into(),
            keys: shape.weight(),
            sum,
            total,
        });
    }
    Ok((rows, parts))
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let (rows, parts) = run_equidist(config)?;
    let limit = config.thresholds.equidist_max_deviation;
    let stats = |scan: &str| {
        let d: Vec<f64> = rows
            .iter()
            .filter(|r| r.scan == scan)
            .map(|r| r.deviation)
            .collect();
        (
            d.iter().sum::<f64>() / d.len() as f64,
            d.iter().copied().fold(0.0, f64::max),
        )
    };
    let (mean, max) = stats("pairs");
    let (aux_mean, aux_max) = stats("pairs-aux");
    let (three_mean, three_max) = stats("three");
    let part_ok = parts.iter().all(|p| p.sum == p.total);
    let checks = vec![
        Check::hard("partition", part_ok, "counts over all symbol values add up to |X|"),
        Check::soft(
            "pairs-deviation",
            max <= limit,
            format!(
                "max {max:.6} (mean {mean:.6}) against {limit} over {TRIALS} draws, seed {}; diagnostics: with P = {AUX:?} mean {aux_mean:.4} max {aux_max:.4}, three coordinates mean {three_mean:.4} max {three_max:.4}",
                config.seed
            ),
        ),
    ];
    Ok(Report {
        tables: vec![
            Table::from_records("scans", &rows)?,
            Table::from_records("partitions", &parts)?,
        ],
        checks,
    })
}
