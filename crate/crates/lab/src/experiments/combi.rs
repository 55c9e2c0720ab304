use negpell_core::combi::{
    acceptance_density_check, add_dim, find_box, permutation_second_moment,
    validate_additive_system, AdditiveSystem, BoxSearch, MomentParams, ProductSpace, SymbolData,
};
use negpell_core::{Error, Exact, ExactDensityReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::{Check, ExperimentConfig, Record, Report, Result, Table};

const MAX_DIM: u32 = 2;

fn join(sizes: &[usize]) -> String {
    sizes
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("x")
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemRow {
    pub index: usize,
    pub sizes: String,
    pub s: u32,
    pub max_dim: u32,
    pub valid: bool,
    /// Exact values as `p/q`.
    pub delta: String,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
}

impl Record for SystemRow {
    const HEADER: &'static [&'static str] = &[
        "index", "sizes", "s", "max_dim", "valid", "delta", "lhs", "rhs", "pass",
    ];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AddDimRow {
    pub sizes: String,
    pub s: u32,
    pub rank: usize,
    pub formula: usize,
}

impl Record for AddDimRow {
    const HEADER: &'static [&'static str] = &["sizes", "s", "rank", "formula"];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxRow {
    pub trial: usize,
    pub sizes: String,
    pub b: usize,
    pub found: bool,
    pub verified: bool,
}

impl Record for BoxRow {
    const HEADER: &'static [&'static str] = &["trial", "sizes", "b", "found", "verified"];
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub r: usize,
    pub k0: usize,
    pub k1: usize,
    pub k2: usize,
    pub p: usize,
    pub lhs: String,
    pub rhs: String,
    pub pass: bool,
    pub first_moment_ok: bool,
}

impl Record for MomentRow {
    const HEADER: &'static [&'static str] = &[
        "r",
        "k0",
        "k1",
        "k2",
        "p",
        "lhs",
        "rhs",
        "pass",
        "first_moment_ok",
    ];
}

fn exact(q: &Exact) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// `count` seeded random systems with `r <= 3`, `|X_i| <= 4`, `dim A_T <= 2`.
/// Systems are drawn sequentially from the seed and checked in parallel.
pub fn random_systems(seed: u64, count: usize) -> Result<Vec<SystemRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut systems = Vec::with_capacity(count);
    for _ in 0..count {
        let r = rng.gen_range(1..=3);
        let sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(2..=4)).collect();
        let s = rng.gen_range(0..1u32 << r);
        let density = rng.gen_range(0.2..=1.0);
        let sys = AdditiveSystem::random(
            &mut rng,
            ProductSpace::with_sizes(&sizes)?,
            s,
            MAX_DIM,
            density,
        )?;
        systems.push((sizes, s, sys));
    }
    let rows = systems
        .par_iter()
        .enumerate()
        .map(|(index, (sizes, s, sys))| {
            let valid = validate_additive_system(sys).is_valid();
            let rep: Option<ExactDensityReport> = if valid {
                Some(acceptance_density_check(sys)?)
            } else {
                None
            };
            Ok(SystemRow {
                index,
                sizes: join(sizes),
                s: *s,
                max_dim: sys.max_dim(),
                valid,
                delta: rep.as_ref().map_or(String::new(), |r| exact(&r.delta)),
                lhs: rep.as_ref().map_or(String::new(), |r| exact(&r.lhs)),
                rhs: rep.as_ref().map_or(String::new(), |r| exact(&r.rhs)),
                pass: rep.is_some_and(|r| r.pass),
            })
        })
        .collect::<negpell_core::Result<Vec<_>>>()?;
    Ok(rows)
}

/// Rank of `Sigma` and the closed formula for every space with `r <= 3`,
/// `|X_i| <= 4` and every `S`.
pub fn add_dim_table() -> Result<Vec<AddDimRow>> {
    let mut shapes = Vec::new();
    for r in 1..=3u32 {
        let mut sizes = vec![Vec::new()];
        for _ in 0..r {
            sizes = sizes
                .into_iter()
                .flat_map(|p: Vec<usize>| (1..=4).map(move |n| [p.clone(), vec![n]].concat()))
                .collect();
        }
        for sz in sizes {
            for s in 0..1u32 << r {
                shapes.push((sz.clone(), s));
            }
        }
    }
    shapes
        .par_iter()
        .map(|(sizes, s)| {
            let d = add_dim(&ProductSpace::with_sizes(sizes)?, *s)?;
            Ok(AddDimRow {
                sizes: join(sizes),
                s: *s,
                rank: d.rank,
                formula: d.formula,
            })
        })
        .collect::<negpell_core::Result<Vec<_>>>()
        .map_err(Into::into)
}

/// Random sets with a planted `2 x ... x 2` box; the search must find a box
/// and every point of it must lie in the set.
pub fn box_trials(seed: u64, trials: usize) -> Result<Vec<BoxRow>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xb0b0);
    let mut rows = Vec::with_capacity(trials);
    for trial in 0..trials {
        let r = rng.gen_range(2..=3);
        let sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(3..=8)).collect();
        let sp = ProductSpace::with_sizes(&sizes)?;
        let b = 2;
        let planted: Vec<Vec<usize>> = sizes
            .iter()
            .map(|&n| rand::seq::index::sample(&mut rng, n, b).into_vec())
            .collect();
        let mut y: Vec<bool> = (0..sp.len()).map(|_| rng.gen_bool(0.3)).collect();
        for (i, yi) in y.iter_mut().enumerate() {
            if sp
                .position(i)
                .iter()
                .zip(&planted)
                .all(|(p, z)| z.contains(p))
            {
                *yi = true;
            }
        }
        let (found, verified) = match find_box(&sp, &y, b)? {
            BoxSearch::Found(zs) => {
                let pos: Vec<Vec<usize>> = zs
                    .iter()
                    .enumerate()
                    .map(|(i, z)| {
                        z.iter()
                            .map(|l| sp.labels(i).binary_search(l).expect("label from the space"))
                            .collect()
                    })
                    .collect();
                let ok = (0..sp.len())
                    .all(|i| !sp.position(i).iter().zip(&pos).all(|(p, z)| z.contains(p)) || y[i]);
                (true, ok && pos.iter().all(|z| z.len() == b))
            }
            BoxSearch::NotFound => (false, false),
        };
        rows.push(BoxRow {
            trial,
            sizes: join(&sizes),
            b,
            found,
            verified,
        });
    }
    Ok(rows)
}

/// The second-moment inequality on symbols of actual primes for every
/// admissible parameter choice with `r <= 8`.
pub fn moment_grid() -> Result<Vec<MomentRow>> {
    let primes = [5u64, 13, 17, 29, 37, 41, 53, 61];
    let mut rows = Vec::new();
    for r in 1..=8 {
        for k2 in 1..=r {
            for k1 in 0..=k2 {
                for k0 in 0..=k1 {
                    for p in 0..=1 {
                        let params = MomentParams { r, k0, k1, k2, p };
                        if params.check().is_err() {
                            continue;
                        }
                        let x = SymbolData::from_primes(&primes[..r], &[2][..p])?;
                        match permutation_second_moment::<Exact>(params, &x) {
                            Ok(rep) => rows.push(MomentRow {
                                r,
                                k0,
                                k1,
                                k2,
                                p,
                                lhs: exact(&rep.lhs),
                                rhs: exact(&rep.rhs),
                                pass: rep.pass,
                                first_moment_ok: rep.first_moment_ok,
                            }),
                            Err(Error::SizeBound(_)) => continue,
                            Err(e) => return Err(e.into()),
                        }
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn run(config: &ExperimentConfig) -> Result<Report> {
    let count = config.limit as usize;
    let systems = random_systems(config.seed, count)?;
    let invalid = systems.iter().filter(|r| !r.valid).count();
    let failed = systems.iter().filter(|r| r.valid && !r.pass).count();
    let dims = add_dim_table()?;
    let dim_bad = dims.iter().filter(|r| r.rank != r.formula).count();
    let boxes = box_trials(config.seed, 200)?;
    let box_bad = boxes.iter().filter(|r| !(r.found && r.verified)).count();
    let moments = moment_grid()?;
    let moment_bad = moments
        .iter()
        .filter(|r| !(r.pass && r.first_moment_ok))
        .count();
    let checks = vec![
        Check::hard(
            "systems-valid",
            invalid == 0,
            format!("{invalid} of {count} random systems violate the axioms"),
        ),
        Check::hard(
            "acceptance-bound",
            failed == 0 && invalid == 0,
            format!(
                "{failed} of {count} systems below the density bound, seed {}",
                config.seed
            ),
        ),
        Check::hard(
            "add-dim-formula",
            dim_bad == 0,
            format!("{dim_bad} of {} spaces disagree", dims.len()),
        ),
        Check::hard(
            "box-search",
            box_bad == 0,
            format!("{box_bad} of {} planted boxes missed or wrong", boxes.len()),
        ),
        Check::hard(
            "second-moment",
            moment_bad == 0,
            format!("{moment_bad} of {} parameter sets fail", moments.len()),
        ),
    ];
    Ok(Report {
        tables: vec![
            Table::from_records("systems", &systems)?,
            Table::from_records("add-dim", &dims)?,
            Table::from_records("boxes", &boxes)?,
            Table::from_records("moment", &moments)?,
        ],
        checks,
    })
}
