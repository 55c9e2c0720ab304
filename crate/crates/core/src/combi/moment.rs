use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::arith::kronecker;
use crate::{Error, Result, Scalar};

/// Largest `k2` accepted: `k2!` permutations are enumerated.
pub const MAX_K2: usize = 8;

/// Largest number of symbol coordinates that any permutation constrains.
pub const MAX_USED_BITS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MomentParams {
    pub r: usize,
    pub k0: usize,
    pub k1: usize,
    pub k2: usize,
    /// `|P|`.
    pub p: usize,
}

impl MomentParams {
    /// Number of pairs `i, j` in `[k1]` with `min(i, j) <= k0`.
    pub fn c(&self) -> usize {
        let (k0, k1) = (self.k0, self.k1);
        (k0 * k0 - k0) / 2 + k0 * (k1 - k0)
    }

    /// `|M_r| + |M_{r,P}|`.
    pub fn m(&self) -> usize {
        self.r * (self.r.saturating_sub(1)) / 2 + self.r * self.p
    }

    pub fn check(&self) -> Result<()> {
        let MomentParams { r, k0, k1, k2, p } = *self;
        if !(k0 <= k1 && k1 <= k2 && k2 <= r) {
            return Err(Error::Precondition(format!(
                "need k0 <= k1 <= k2 <= r, got {k0}, {k1}, {k2}, {r}"
            )));
        }
        if k2 > MAX_K2 {
            return Err(Error::SizeBound(format!("k2 = {k2} > {MAX_K2}")));
        }
        let lhs = (k1 as u128 * k1 as u128)
            .checked_shl((k0 + p + 1) as u32)
            .filter(|_| k0 + p + 1 < 100);
        match lhs {
            Some(v) if v < k2 as u128 => Ok(()),
            _ => Err(Error::Precondition(format!(
                "2^(k0 + |P| + 1) k1^2 < k2 fails for k0 = {k0}, |P| = {p}, k1 = {k1}, k2 = {k2}"
            ))),
        }
    }
}

/// The symbols `(x_i / x_j)` for ordered pairs and `(x_i / q)` for `q` in
/// `P`, as bits through the sign isomorphism.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolData {
    pairs: Vec<Vec<bool>>,
    aux: Vec<Vec<bool>>,
}

impl SymbolData {
    /// `pairs` is `r x r` (diagonal ignored), `aux` is `r x |P|`.
    pub fn new(pairs: Vec<Vec<bool>>, aux: Vec<Vec<bool>>) -> Result<Self> {
        let r = pairs.len();
        if pairs.iter().any(|row| row.len() != r) || aux.len() != r {
            return Err(Error::Invalid(
                "symbol tables have inconsistent shapes".into(),
            ));
        }
        if aux.windows(2).any(|w| w[0].len() != w[1].len()) {
            return Err(Error::Invalid(
                "auxiliary symbol rows differ in length".into(),
            ));
        }
        Ok(SymbolData { pairs, aux })
    }

    /// Symbols of actual primes, using the Kronecker symbol when the bottom
    /// entry is 2.
    pub fn from_primes(xs: &[u64], ps: &[u64]) -> Result<Self> {
        let bit = |a: u64, b: u64| -> Result<bool> { Ok(kronecker(a as i128, b as u128)? == -1) };
        let pairs = xs
            .iter()
            .map(|&a| {
                xs.iter()
                    .map(|&b| if a == b { Ok(false) } else { bit(a, b) })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let aux = xs
            .iter()
            .map(|&a| ps.iter().map(|&q| bit(a, q)).collect())
            .collect::<Result<_>>()?;
        Self::new(pairs, aux)
    }

    pub fn r(&self) -> usize {
        self.pairs.len()
    }

    pub fn p(&self) -> usize {
        self.aux.first().map_or(0, Vec::len)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SecondMomentReport<T> {
    pub lhs: T,
    pub rhs: T,
    pub pass: bool,
    /// `sum_a |B(x, a)| = k2! 2^|M| / 2^(C + k1 |P|)` held exactly.
    pub first_moment_ok: bool,
    /// Coordinates of `a` constrained by some permutation.
    pub used_bits: usize,
}

fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Both sides of the second-moment inequality for the number of
/// permutations `sigma` fixing every index above `k2` under which `x`
/// satisfies the truncated symbol conditions of `sigma(a)`, summed over all
/// `a`.
///
/// Coordinates of `a` that no permutation constrains contribute the same
/// factor to every term and are summed in closed form; the others are
/// enumerated together with all `k2!` permutations.
pub fn permutation_second_moment<T: Scalar>(
    params: MomentParams,
    x: &SymbolData,
) -> Result<SecondMomentReport<T>> {
    params.check()?;
    let MomentParams { r, k0, k1, k2, p } = params;
    if x.r() != r || (x.p() != p && r > 0) {
        return Err(Error::Invalid(format!(
            "symbol data is {}x{}, parameters say r = {r}, |P| = {p}",
            x.r(),
            x.p()
        )));
    }
    // Keys: (i, j) with i < j for pairs, (i, r + q) for auxiliary primes.
    let mut used: Vec<(usize, usize)> = Vec::new();
    let mut constraints: Vec<Vec<((usize, usize), bool)>> = Vec::new();
    let mut sigma: Vec<usize> = (0..k2).collect();
    loop {
        let mut inv = vec![0; k2];
        for (i, &s) in sigma.iter().enumerate() {
            inv[s] = i;
        }
        let mut cs = Vec::new();
        for i in 0..k1 {
            for j in 0..k1 {
                if i != j && inv[i] < inv[j] && i.min(j) < k0 {
                    cs.push(((inv[i], inv[j]), x.pairs[i][j]));
                }
            }
            for q in 0..p {
                cs.push(((inv[i], r + q), x.aux[i][q]));
            }
        }
        for &(key, _) in &cs {
            if !used.contains(&key) {
                used.push(key);
            }
        }
        constraints.push(cs);
        if !next_permutation(&mut sigma) {
            break;
        }
    }
    if used.len() > MAX_USED_BITS {
        return Err(Error::SizeBound(format!(
            "{} constrained coordinates (max {MAX_USED_BITS})",
            used.len()
        )));
    }
    used.sort_unstable();
    let masks: Vec<(u32, u32)> = constraints
        .iter()
        .map(|cs| {
            cs.iter().fold((0u32, 0u32), |(m, v), &(key, bit)| {
                let k = used.binary_search(&key).expect("collected above");
                (m | 1 << k, v | u32::from(bit) << k)
            })
        })
        .collect();

    let (mut sum_b, mut sum_b2) = (0u128, 0u128);
    for a in 0u32..(1u32 << used.len()) {
        let b = masks.iter().filter(|&&(m, v)| a & m == v).count() as u128;
        sum_b += b;
        sum_b2 += b * b;
    }

    let factorial: u64 = (1..=k2 as u64).product();
    let m_total = params.m();
    let free = m_total - used.len();
    let pow2 = |e: usize| BigRational::from_integer(BigInt::one() << e);
    let int = |v: u128| BigRational::from_integer(BigInt::from(v));
    let shift = params.c() + k1 * p;
    let k = BigRational::new(BigInt::from(factorial), BigInt::one() << shift);
    let terms = pow2(used.len());
    let inner = &terms * &k * &k - int(2) * &k * int(sum_b) + int(sum_b2);
    let lhs = inner * pow2(free);

    let first = int(sum_b) * pow2(free);
    let first_expected = int(u128::from(factorial)) * pow2(m_total) / pow2(shift);

    let coeff = BigRational::new(
        BigInt::from((k1 * k1) as u64) << (k0 + p + 1),
        BigInt::from(k2 as u64),
    );
    let scale = if m_total >= 2 * shift {
        pow2(m_total - 2 * shift)
    } else {
        BigRational::one() / pow2(2 * shift - m_total)
    };
    let f2 = BigRational::from_integer(BigInt::from(factorial) * BigInt::from(factorial));
    let rhs = coeff * scale * f2;

    let pass = lhs <= rhs;
    let conv = |q: &BigRational| T::from_ratio(q.numer(), q.denom());
    Ok(SecondMomentReport {
        lhs: conv(&lhs),
        rhs: conv(&rhs),
        pass,
        first_moment_ok: first == first_expected,
        used_bits: used.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;
    use num_traits::Zero;

    fn data(r: usize, p: usize, seed: u64) -> SymbolData {
        let bit = |k: usize| {
            (seed
                .wrapping_mul(0x9E37_79B9_7F4A_7C15)
                .rotate_left(k as u32 % 64)
                >> 7)
                & 1
                == 1
        };
        let pairs = (0..r)
            .map(|i| (0..r).map(|j| bit(i * 31 + j)).collect())
            .collect();
        let aux = (0..r)
            .map(|i| (0..p).map(|q| bit(1000 + i * 7 + q)).collect())
            .collect();
        SymbolData::new(pairs, aux).unwrap()
    }

    #[test]
    fn small_cases_hold() {
        let rep = permutation_second_moment::<Exact>(
            MomentParams {
                r: 3,
                k0: 0,
                k1: 1,
                k2: 3,
                p: 0,
            },
            &data(3, 0, 1),
        )
        .unwrap();
        assert!(rep.pass && rep.first_moment_ok);
        assert!(rep.lhs.is_zero());
        let rep = permutation_second_moment::<Exact>(
            MomentParams {
                r: 6,
                k0: 1,
                k1: 1,
                k2: 5,
                p: 0,
            },
            &data(6, 0, 2),
        )
        .unwrap();
        assert!(rep.pass && rep.first_moment_ok);
    }

    #[test]
    fn auxiliary_primes_give_a_nontrivial_sum() {
        for seed in 0..8 {
            let params = MomentParams {
                r: 7,
                k0: 0,
                k1: 1,
                k2: 7,
                p: 1,
            };
            let rep = permutation_second_moment::<Exact>(params, &data(7, 1, seed)).unwrap();
            assert!(rep.pass && rep.first_moment_ok, "seed {seed}: {:?}", rep);
            assert!(!rep.lhs.is_zero());
            assert_eq!(rep.used_bits, 7);
        }
    }

    #[test]
    fn precondition_is_enforced() {
        let err = permutation_second_moment::<f64>(
            MomentParams {
                r: 4,
                k0: 1,
                k1: 2,
                k2: 4,
                p: 0,
            },
            &data(4, 0, 3),
        );
        assert!(matches!(err, Err(Error::Precondition(_))));
    }

    #[test]
    fn primes_feed_the_symbols() {
        let xs = [5, 13, 17, 29, 37, 41, 53];
        let x = SymbolData::from_primes(&xs, &[2]).unwrap();
        assert!(x.aux[0][0]);
        assert!(!x.aux[2][0]);
        let rep = permutation_second_moment::<f64>(
            MomentParams {
                r: 7,
                k0: 0,
                k1: 1,
                k2: 7,
                p: 1,
            },
            &x,
        )
        .unwrap();
        assert!(rep.pass);
    }
}
