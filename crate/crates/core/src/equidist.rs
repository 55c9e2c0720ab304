//! Preboxes and exact counts of the fibers `X(a)` of prescribed Legendre
//! symbols, with seeded deviation scans.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::arith::{is_prime, kronecker, F2Bit};
use crate::{Error, Result};

/// Largest `|X|` that [`count_x_a`] accepts.
pub const MAX_TUPLES: u128 = 10_000_000;

/// Largest interval length scanned for primes.
pub const MAX_INTERVAL: u64 = 50_000_000;

/// Coordinate sets `X_i` of primes 1 or 2 mod 4 in ordered intervals
/// `(s_i, t_i]`, and auxiliary primes `P` in `(1, s_1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prebox {
    intervals: Vec<(u64, u64)>,
    sets: Vec<Vec<u64>>,
    aux: Vec<u64>,
}

impl Prebox {
    pub fn r(&self) -> usize {
        self.sets.len()
    }

    pub fn intervals(&self) -> &[(u64, u64)] {
        &self.intervals
    }

    pub fn set(&self, i: usize) -> &[u64] {
        &self.sets[i]
    }

    pub fn aux(&self) -> &[u64] {
        &self.aux
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    /// `|X|`.
    pub fn total(&self) -> u128 {
        self.sets.iter().map(|s| s.len() as u128).product()
    }
}

fn one_or_two_mod_four(p: u64) -> bool {
    p % 4 == 1 || p % 4 == 2
}

/// Takes every prime 1 or 2 mod 4 in each interval. Endpoints are integers
/// with `2 <= s_1 < t_1 <= s_2 < ... < t_r`; since intervals are open on the
/// left, any such chain can be nudged to a strict real one with the same
/// prime sets.
pub fn build_prebox(intervals: &[(u64, u64)], aux: &[u64]) -> Result<Prebox> {
    if intervals.is_empty() {
        return Err(Error::Invalid(
            "a prebox needs at least one interval".into(),
        ));
    }
    let mut prev = 2u64;
    for (i, &(s, t)) in intervals.iter().enumerate() {
        let ok = s >= prev;
        if !ok || t <= s {
            return Err(Error::Invalid(format!(
                "interval {i} = ({s}, {t}] is out of order"
            )));
        }
        if t - s > MAX_INTERVAL {
            return Err(Error::SizeBound(format!(
                "interval ({s}, {t}] longer than {MAX_INTERVAL}"
            )));
        }
        prev = t;
    }
    let s1 = intervals[0].0;
    let mut aux = aux.to_vec();
    aux.sort_unstable();
    if aux.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Invalid("auxiliary primes must be distinct".into()));
    }
    if let Some(&q) = aux
        .iter()
        .find(|&&q| q < 2 || q > s1 || !is_prime(q as u128) || !one_or_two_mod_four(q))
    {
        return Err(Error::Invalid(format!(
            "auxiliary {q} is not a prime 1 or 2 mod 4 in (1, {s1}]"
        )));
    }
    let sets: Vec<Vec<u64>> = intervals
        .iter()
        .map(|&(s, t)| {
            (s + 1..=t)
                .filter(|&p| one_or_two_mod_four(p) && is_prime(p as u128))
                .collect()
        })
        .collect();
    if let Some(i) = sets.iter().position(Vec::is_empty) {
        return Err(Error::Invalid(format!("coordinate set {i} is empty")));
    }
    Ok(Prebox {
        intervals: intervals.to_vec(),
        sets,
        aux,
    })
}

/// Smallest `t` such that `(s, t]` holds exactly `n` primes 1 or 2 mod 4.
pub fn interval_with_count(s: u64, n: usize) -> Result<u64> {
    if n == 0 {
        return Err(Error::Invalid("need a positive count".into()));
    }
    let mut found = 0;
    let mut t = s;
    while found < n {
        t += 1;
        if t - s > MAX_INTERVAL {
            return Err(Error::SizeBound(format!(
                "fewer than {n} primes in ({s}, {}]",
                s + MAX_INTERVAL
            )));
        }
        if one_or_two_mod_four(t) && is_prime(t as u128) {
            found += 1;
        }
    }
    Ok(t)
}

/// Prescribed symbols: `(x_i / x_j) = iota(a(i, j))` for listed pairs
/// `i < j` and `(x_i / q) = iota(a(i, q))` for listed `(i, q)`, with `q`
/// an index into `P`.
///
/// Repeated keys are allowed and act as repeated conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolConstraint {
    pub pairs: Vec<((usize, usize), F2Bit)>,
    pub aux: Vec<((usize, usize), F2Bit)>,
}

impl SymbolConstraint {
    pub fn none() -> Self {
        SymbolConstraint {
            pairs: Vec::new(),
            aux: Vec::new(),
        }
    }

    /// Every pair and every auxiliary condition, all with value 0.
    pub fn full(r: usize, p: usize) -> Self {
        let pairs = (0..r)
            .flat_map(|i| (i + 1..r).map(move |j| ((i, j), F2Bit::ZERO)))
            .collect();
        let aux = (0..r)
            .flat_map(|i| (0..p).map(move |q| ((i, q), F2Bit::ZERO)))
            .collect();
        SymbolConstraint { pairs, aux }
    }

    pub fn check(&self, prebox: &Prebox) -> Result<()> {
        let r = prebox.r();
        if let Some(((i, j), _)) = self.pairs.iter().find(|((i, j), _)| !(i < j && *j < r)) {
            return Err(Error::Invalid(format!(
                "pair ({i}, {j}) is not in M_r for r = {r}"
            )));
        }
        let p = prebox.aux.len();
        if let Some(((i, q), _)) = self.aux.iter().find(|((i, q), _)| *i >= r || *q >= p) {
            return Err(Error::Invalid(format!("({i}, {q}) is not in [r] x P")));
        }
        Ok(())
    }

    /// Number of distinct constrained keys.
    pub fn weight(&self) -> usize {
        let mut pk: Vec<_> = self.pairs.iter().map(|c| c.0).collect();
        let mut ak: Vec<_> = self.aux.iter().map(|c| c.0).collect();
        pk.sort_unstable();
        pk.dedup();
        ak.sort_unstable();
        ak.dedup();
        pk.len() + ak.len()
    }

    /// Same keys with fresh uniformly random values.
    pub fn resample<R: Rng + ?Sized>(&self, rng: &mut R) -> Self {
        let mut draw = |v: &[((usize, usize), F2Bit)]| -> Vec<_> {
            v.iter()
                .map(|&(k, _)| {
                    (
                        k,
                        if rng.gen::<bool>() {
                            F2Bit::ONE
                        } else {
                            F2Bit::ZERO
                        },
                    )
                })
                .collect()
        };
        let pairs = draw(&self.pairs);
        let aux = draw(&self.aux);
        SymbolConstraint { pairs, aux }
    }
}

fn symbol_bit(a: u64, b: u64) -> bool {
    kronecker(a as i128, b as u128).expect("positive modulus") == -1
}

struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize, f: impl Fn(usize) -> bool) -> Self {
        let mut w = vec![0u64; len.div_ceil(64)];
        for i in (0..len).filter(|&i| f(i)) {
            w[i / 64] |= 1 << (i % 64);
        }
        Bits(w)
    }
}

/// `|X(a)|`, `|X|` and the relative deviation from `|X| / 2^m`, where `m`
/// counts distinct constrained keys.
#[derive(Clone, Debug, PartialEq)]
pub struct CountReport {
    pub r: usize,
    pub sizes: Vec<usize>,
    pub constraints: usize,
    pub count: u64,
    pub total: u64,
    /// `|count * 2^m - |X|| / |X|`.
    pub deviation: f64,
}

impl CountReport {
    pub fn expected(&self) -> f64 {
        self.total as f64 / (self.constraints as f64).exp2()
    }
}

/// Comma-separated `r,sizes,constraints,count,expected,deviation`, with
/// sizes joined by `x`.
impl fmt::Display for CountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sizes: Vec<String> = self.sizes.iter().map(usize::to_string).collect();
        write!(
            f,
            "{},{},{},{},{:.6},{:.9}",
            self.r,
            sizes.join("x"),
            self.constraints,
            self.count,
            self.expected(),
            self.deviation
        )
    }
}

/// Exact `|X(a)|` by walking the coordinates in order and intersecting
/// bitsets of admissible next coordinates. The outermost coordinate is
/// split across threads.
pub fn count_x_a(prebox: &Prebox, constraint: &SymbolConstraint) -> Result<CountReport> {
    constraint.check(prebox)?;
    let total = prebox.total();
    if total > MAX_TUPLES {
        return Err(Error::SizeBound(format!("|X| = {total} > {MAX_TUPLES}")));
    }
    let r = prebox.r();
    let sets = &prebox.sets;
    let filters: Vec<Bits> = (0..r)
        .map(|i| {
            Bits::new(sets[i].len(), |k| {
                constraint
                    .aux
                    .iter()
                    .filter(|((ci, _), _)| *ci == i)
                    .all(|((_, q), a)| symbol_bit(sets[i][k], prebox.aux[*q]) == (*a == F2Bit::ONE))
            })
        })
        .collect();
    // For every j, the tables (i, per-x_i bitset over X_j) of constrained pairs.
    let mut tables: Vec<Vec<(usize, Vec<Bits>)>> = (0..r).map(|_| Vec::new()).collect();
    for &((i, j), a) in &constraint.pairs {
        let want = a == F2Bit::ONE;
        let rows = sets[i]
            .iter()
            .map(|&xi| Bits::new(sets[j].len(), |k| symbol_bit(xi, sets[j][k]) == want))
            .collect();
        tables[j].push((i, rows));
    }

    fn walk(
        k: usize,
        chosen: &mut Vec<usize>,
        filters: &[Bits],
        tables: &[Vec<(usize, Vec<Bits>)>],
    ) -> u64 {
        let mut words = filters[k].0.clone();
        for (i, rows) in &tables[k] {
            for (w, v) in words.iter_mut().zip(&rows[chosen[*i]].0) {
                *w &= v;
            }
        }
        if k + 1 == filters.len() {
            return words.iter().map(|w| u64::from(w.count_ones())).sum();
        }
        let mut acc = 0;
        for (wi, &w) in words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                chosen.push(wi * 64 + b);
                acc += walk(k + 1, chosen, filters, tables);
                chosen.pop();
            }
        }
        acc
    }

    let count: u64 = if r == 1 {
        walk(0, &mut Vec::new(), &filters, &tables)
    } else {
        (0..sets[0].len())
            .into_par_iter()
            .filter(|&x| filters[0].0[x / 64] >> (x % 64) & 1 == 1)
            .map(|x| {
                let mut chosen = vec![x];
                walk(1, &mut chosen, &filters, &tables)
            })
            .sum()
    };
    let total = total as u64;
    let m = constraint.weight();
    let scaled = (count as u128) << m.min(100);
    let deviation = if total == 0 {
        0.0
    } else {
        (scaled as f64 - total as f64).abs() / total as f64
    };
    Ok(CountReport {
        r,
        sizes: prebox.sizes(),
        constraints: m,
        count,
        total,
        deviation,
    })
}

/// Sum of `|X(a)|` over all values `a` on the keys of `shape`, which must be
/// distinct. Returns `(sum, |X|)`; the two agree exactly.
pub fn partition_sum(prebox: &Prebox, shape: &SymbolConstraint) -> Result<(u64, u64)> {
    let m = shape.pairs.len() + shape.aux.len();
    if shape.weight() != m {
        return Err(Error::Invalid("partition needs distinct keys".into()));
    }
    if m > 16 {
        return Err(Error::SizeBound(format!("2^{m} symbol assignments")));
    }
    let mut sum = 0;
    for bits in 0u32..(1 << m) {
        let bit = |k: usize| {
            if bits >> k & 1 == 1 {
                F2Bit::ONE
            } else {
                F2Bit::ZERO
            }
        };
        let np = shape.pairs.len();
        let c = SymbolConstraint {
            pairs: shape
                .pairs
                .iter()
                .enumerate()
                .map(|(k, &(key, _))| (key, bit(k)))
                .collect(),
            aux: shape
                .aux
                .iter()
                .enumerate()
                .map(|(k, &(key, _))| (key, bit(np + k)))
                .collect(),
        };
        sum += count_x_a(prebox, &c)?.count;
    }
    Ok((sum, prebox.total() as u64))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSummary {
    pub trials: usize,
    pub mean_deviation: f64,
    pub max_deviation: f64,
    pub reports: Vec<CountReport>,
}

/// Counts `X(a)` for `trials` uniformly random `a` on the keys of `shape`,
/// drawn from a ChaCha8 stream seeded by `seed`.
pub fn scan_deviation(
    prebox: &Prebox,
    shape: &SymbolConstraint,
    trials: usize,
    seed: u64,
) -> Result<ScanSummary> {
    if trials == 0 {
        return Err(Error::Invalid("need at least one trial".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reports = Vec::with_capacity(trials);
    for _ in 0..trials {
        reports.push(count_x_a(prebox, &shape.resample(&mut rng))?);
    }
    let mean = reports.iter().map(|r| r.deviation).sum::<f64>() / trials as f64;
    let max = reports.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(ScanSummary {
        trials,
        mean_deviation: mean,
        max_deviation: max,
        reports,
    })
}
