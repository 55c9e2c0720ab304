use std::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::conic::conic_points;
use crate::arith::{factor, family_d_element, jacobi, sqrt_mod_prime, F2Bit};
use crate::qfclass::{ClassGroupOracle, Discriminant, QuadForm};
use crate::{Error, Result};

/// Distinct conic points tried before giving up on a usable solution.
const MAX_SOLUTIONS: usize = 48;

/// Pairwise coprime squarefree `a, b, c > 1` built from primes `1 mod 4`,
/// with every member a square modulo every prime dividing another member.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RedeiTriple {
    a: u64,
    b: u64,
    c: u64,
}

fn primes_of(n: u64) -> Vec<u64> {
    factor(n as u128).primes().map(|p| p as u64).collect()
}

impl RedeiTriple {
    pub fn new(a: u64, b: u64, c: u64) -> Result<Self> {
        let reject = |why: String| Error::InadmissibleTriple { a, b, c, why };
        let members = [a, b, c];
        let mut primes = Vec::new();
        for &m in &members {
            if m <= 1 {
                return Err(reject(format!("member {m} is not greater than 1")));
            }
            let f = factor(m as u128);
            if !f.is_squarefree() {
                return Err(reject(format!("{m} is not squarefree")));
            }
            if let Some(p) = f.primes().find(|p| p % 4 != 1) {
                return Err(reject(format!(
                    "{m} has the prime divisor {p}, not 1 mod 4"
                )));
            }
            primes.push(primes_of(m));
        }
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                for &p in &primes[j] {
                    let s = jacobi(members[i] as i128, p as u128)?;
                    if s == 0 {
                        return Err(reject(format!(
                            "{} and {} are not coprime",
                            members[i], members[j]
                        )));
                    }
                    if s == -1 {
                        return Err(reject(format!("{} is not a square modulo {p}", members[i])));
                    }
                }
            }
        }
        Ok(RedeiTriple { a, b, c })
    }

    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    pub fn c(&self) -> u64 {
        self.c
    }

    /// `[c, b, a]`.
    pub fn reversed(&self) -> RedeiTriple {
        RedeiTriple {
            a: self.c,
            b: self.b,
            c: self.a,
        }
    }
}

impl fmt::Display for RedeiTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}, {}]", self.a, self.b, self.c)
    }
}

/// Square root of `a = 1 mod 8` in the 2-adic integers, modulo 2^128.
fn sqrt_2adic(a: i128) -> u128 {
    let a = a as u128;
    let mut s: u128 = 1;
    for k in 3..128u32 {
        // s^2 = a mod 2^k; fix bit k.
        let mask = if k + 1 == 128 {
            u128::MAX
        } else {
            (1u128 << (k + 1)) - 1
        };
        if (s.wrapping_mul(s).wrapping_sub(a)) & mask != 0 {
            s = s.wrapping_add(1u128 << (k - 1));
        }
    }
    s
}

/// Parity of the valuation at (a prime above) 2 of `x + y sqrt a`.
fn two_adic_parity(a: u64, x: i128, y: i128, z: i128) -> Result<bool> {
    if a % 8 == 5 {
        // 2 is inert: the valuation is v_2(z).
        return Ok(z.trailing_zeros() % 2 == 1);
    }
    let s = sqrt_2adic(a as i128);
    let v = (x as u128).wrapping_add((y as u128).wrapping_mul(s));
    if v == 0 {
        return Err(Error::Overflow("2-adic valuation"));
    }
    Ok(v.trailing_zeros() % 2 == 1)
}

/// `[a, b, c]` from one primitive solution of `x^2 = a y^2 + b z^2`.
///
/// Each prime `p | c` contributes the Legendre symbol of `x + y sqrt a` at a
/// prime above `p`; the element is first twisted by 2 when its valuation
/// above 2 is odd. Errors if some `p | c` divides `z`.
pub fn redei_symbol_with(t: &RedeiTriple, (x, y, z): (i128, i128, i128)) -> Result<F2Bit> {
    let a = t.a;
    let twist = two_adic_parity(a, x, y, z)?;
    let mut acc = F2Bit::ZERO;
    for p in primes_of(t.c) {
        let pp = p as i128;
        if z.rem_euclid(pp) == 0 {
            return Err(Error::SymbolNormalization {
                a,
                b: t.b,
                c: t.c,
                attempts: 1,
            });
        }
        let s = sqrt_mod_prime(a as i128, p as u128).expect("a is a square mod p") as i128;
        let v = (x.rem_euclid(pp) + y.rem_euclid(pp) * s).rem_euclid(pp);
        let mut sign = jacobi(v, p as u128)?;
        if twist {
            sign *= jacobi(2, p as u128)?;
        }
        acc += F2Bit::from_sign(sign)?;
    }
    Ok(acc)
}

/// Symbol values from up to `n` distinct usable conic solutions.
pub fn symbol_candidates(t: &RedeiTriple, n: usize) -> Result<Vec<F2Bit>> {
    let pts = conic_points(t.a as i64, t.b as i64, MAX_SOLUTIONS)?;
    if pts.is_empty() {
        return Err(Error::InadmissibleTriple {
            a: t.a,
            b: t.b,
            c: t.c,
            why: "conic has no rational point".into(),
        });
    }
    let mut out = Vec::new();
    for p in pts {
        match redei_symbol_with(t, p) {
            Ok(v) => out.push(v),
            Err(Error::SymbolNormalization { .. }) => continue,
            Err(e) => return Err(e),
        }
        if out.len() == n {
            break;
        }
    }
    Ok(out)
}

/// The Redei symbol `[a, b, c]`.
pub fn redei_symbol(t: &RedeiTriple) -> Result<F2Bit> {
    symbol_candidates(t, 1)?
        .first()
        .copied()
        .ok_or(Error::SymbolNormalization {
            a: t.a,
            b: t.b,
            c: t.c,
            attempts: MAX_SOLUTIONS,
        })
}

/// The symbol next to the class-group pairing it should reproduce.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Art2Check {
    pub triple: RedeiTriple,
    pub symbol: F2Bit,
    /// `psi(c)` in `Q(sqrt ab)`, where `2 psi` is the genus character of `a`
    /// and `c` is the product of split primes above the divisors of `c`.
    pub oracle: F2Bit,
    pub omega_c: usize,
}

/// Evaluates `psi(c)` through the form-class oracle of `Q(sqrt ab)`.
pub fn art2_pairing(t: &RedeiTriple, oracle: &ClassGroupOracle) -> Result<F2Bit> {
    let data = oracle.data();
    let d = data.d.d();
    if d != t.a * t.b {
        return Err(Error::Invalid(format!(
            "oracle is for {d}, not {}",
            t.a * t.b
        )));
    }
    let disc = Discriminant::of_radicand(d)?;
    let primes = data.d.primes();
    let gamma: Vec<bool> = data
        .generator_characters
        .iter()
        .map(|chars| {
            (0..primes.len())
                .filter(|&j| t.a % primes[j] == 0 && chars.get(j))
                .count()
                % 2
                == 1
        })
        .collect();
    for (i, &e) in data.exponents.iter().enumerate() {
        if e < 2 && gamma[i] {
            return Err(Error::ClassGroupInconsistent {
                delta: data.delta,
                what: format!("character of {} is not a double", t.a),
            });
        }
    }
    let mut quarter = 0u64;
    for p in primes_of(t.c) {
        let r = sqrt_mod_prime(disc.value() as i128, p as u128)
            .ok_or_else(|| Error::Invalid(format!("{p} does not split in Q(sqrt {d})")))?
            as i64;
        let b = if r % 2 == 1 { r } else { r + p as i64 };
        let form = QuadForm::with_discriminant(p as i64, b, &disc)?;
        let coords = oracle.two_part_coords(form)?;
        for (i, &x) in coords.iter().enumerate() {
            if gamma[i] {
                quarter += x;
            }
        }
    }
    match quarter % 4 {
        0 => Ok(F2Bit::ZERO),
        2 => Ok(F2Bit::ONE),
        _ => Err(Error::ClassGroupInconsistent {
            delta: data.delta,
            what: format!("psi takes a quarter value on the primes of {}", t.c),
        }),
    }
}

impl Art2Check {
    pub fn compute(t: &RedeiTriple, oracle: &ClassGroupOracle) -> Result<Self> {
        Ok(Art2Check {
            triple: *t,
            symbol: redei_symbol(t)?,
            oracle: art2_pairing(t, oracle)?,
            omega_c: primes_of(t.c).len(),
        })
    }

    /// Agreement under the calibration constant `kappa`: the symbol is
    /// compared with the oracle shifted by `kappa` per prime of `c`.
    pub fn agrees(&self, kappa: F2Bit) -> bool {
        let shift = if self.omega_c % 2 == 1 {
            kappa
        } else {
            F2Bit::ZERO
        };
        self.symbol == self.oracle + shift
    }
}

/// Convenience: build the oracle for `ab` and run the check.
pub fn art2_check(t: &RedeiTriple) -> Result<Art2Check> {
    let d = family_d_element(t.a * t.b).ok_or(Error::NotInFamily(t.a * t.b))?;
    Art2Check::compute(t, &ClassGroupOracle::new(&d)?)
}

/// Outcome of comparing symbols with the class-group pairing over a range.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Art2Sweep {
    pub checks: usize,
    /// Disagreements with calibration constant 0 and 1.
    pub mismatches: [usize; 2],
    pub errors: Vec<String>,
    pub first_mismatch: Option<Art2Check>,
}

impl Art2Sweep {
    /// The calibration constant with fewer disagreements, ties going to 0.
    pub fn calibration(&self) -> F2Bit {
        if self.mismatches[1] < self.mismatches[0] {
            F2Bit::ONE
        } else {
            F2Bit::ZERO
        }
    }

    pub fn mismatches_at(&self, kappa: F2Bit) -> usize {
        self.mismatches[kappa.value() as usize]
    }
}

/// Every admissible `[a, b, c]` with `a != b`, `ab <= max_ab` and `c < max_c`,
/// checked against the form-class oracle of `Q(sqrt ab)`. One oracle per
/// field; fields are processed in parallel and merged in field order.
pub fn art2_sweep(max_ab: u64, max_c: u64) -> Art2Sweep {
    let members = admissible_members(max_ab.max(max_c));
    let cs: Vec<u64> = members.iter().copied().filter(|&c| c < max_c).collect();
    let mut pairs = Vec::new();
    for &a in &members {
        for &b in &members {
            if a < b && a.saturating_mul(b) <= max_ab {
                pairs.push((a, b));
            }
        }
    }
    let parts: Vec<Art2Sweep> = pairs
        .par_iter()
        .map(|&(a, b)| {
            let mut out = Art2Sweep::default();
            let triples: Vec<RedeiTriple> = cs
                .iter()
                .flat_map(|&c| [RedeiTriple::new(a, b, c), RedeiTriple::new(b, a, c)])
                .filter_map(|t| t.ok())
                .collect();
            if triples.is_empty() {
                return out;
            }
            let oracle = match family_d_element(a * b)
                .ok_or(Error::NotInFamily(a * b))
                .and_then(|d| ClassGroupOracle::new(&d))
            {
                Ok(o) => o,
                Err(e) => {
                    out.errors.push(format!("{a}*{b}: {e}"));
                    return out;
                }
            };
            for t in triples {
                match Art2Check::compute(&t, &oracle) {
                    Ok(ch) => {
                        out.checks += 1;
                        for k in [F2Bit::ZERO, F2Bit::ONE] {
                            if !ch.agrees(k) {
                                out.mismatches[k.value() as usize] += 1;
                                if k == F2Bit::ZERO && out.first_mismatch.is_none() {
                                    out.first_mismatch = Some(ch);
                                }
                            }
                        }
                    }
                    Err(e) => out.errors.push(format!("{t}: {e}")),
                }
            }
            out
        })
        .collect();
    parts.into_iter().fold(Art2Sweep::default(), |mut acc, p| {
        acc.checks += p.checks;
        acc.mismatches[0] += p.mismatches[0];
        acc.mismatches[1] += p.mismatches[1];
        acc.errors.extend(p.errors);
        acc.first_mismatch = acc.first_mismatch.or(p.first_mismatch);
        acc
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FuzzStatus {
    Agree,
    Violation,
    Error(String),
}

/// One reciprocity comparison `[a, b, c]` against `[c, b, a]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuzzRecord {
    pub triple: RedeiTriple,
    pub symbol: Option<F2Bit>,
    pub reversed: Option<F2Bit>,
    pub status: FuzzStatus,
}

impl fmt::Display for FuzzRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bit = |b: Option<F2Bit>| b.map_or("-".to_string(), |b| b.value().to_string());
        let status = match &self.status {
            FuzzStatus::Agree => "ok".to_string(),
            FuzzStatus::Violation => "VIOLATION".to_string(),
            FuzzStatus::Error(e) => format!("error:{}", e.replace(' ', "_")),
        };
        write!(
            f,
            "{} {} {} {} {} {}",
            self.triple.a,
            self.triple.b,
            self.triple.c,
            bit(self.symbol),
            bit(self.reversed),
            status
        )
    }
}

fn check_reciprocity(t: RedeiTriple) -> FuzzRecord {
    let s = redei_symbol(&t);
    let r = redei_symbol(&t.reversed());
    let status = match (&s, &r) {
        (Ok(x), Ok(y)) if x == y => FuzzStatus::Agree,
        (Ok(_), Ok(_)) => FuzzStatus::Violation,
        (Err(e), _) | (_, Err(e)) => FuzzStatus::Error(e.to_string()),
    };
    FuzzRecord {
        triple: t,
        symbol: s.ok(),
        reversed: r.ok(),
        status,
    }
}

/// Squarefree integers in `(1, max)` with all prime divisors `1 mod 4`.
pub fn admissible_members(max: u64) -> Vec<u64> {
    (2..max)
        .filter(|&m| {
            let f = factor(m as u128);
            f.is_squarefree() && f.primes().all(|p| p % 4 == 1)
        })
        .collect()
}

/// Samples `count` distinct admissible triples with members below `max`
/// and checks reciprocity on each. Sampling is sequential from the seed;
/// evaluation is parallel but the output order is the sampling order.
pub fn fuzz_reciprocity(seed: u64, count: usize, max: u64) -> Result<Vec<FuzzRecord>> {
    let members = admissible_members(max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut triples = Vec::with_capacity(count);
    let mut seen = std::collections::HashSet::new();
    let mut attempts = 0usize;
    while triples.len() < count {
        attempts += 1;
        if attempts > 1000 * count + 10_000 {
            return Err(Error::SizeBound(format!(
                "found only {} admissible triples below {max}",
                triples.len()
            )));
        }
        let pick: Vec<u64> = members.choose_multiple(&mut rng, 3).copied().collect();
        if pick.len() < 3 {
            return Err(Error::SizeBound(format!("too few members below {max}")));
        }
        if let Ok(t) = RedeiTriple::new(pick[0], pick[1], pick[2]) {
            if seen.insert(t) {
                triples.push(t);
            }
        }
    }
    Ok(triples.into_par_iter().map(check_reciprocity).collect())
}
