//! Random-matrix rank distributions over GF(2), the transition kernel of the
//! Artin-pairing chain, the constant `alpha` and the density identities.
//!
//! Formulas are written once over a generic [`Scalar`]; the exact instance
//! is authoritative and the float instances are for presentation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::ratio_to_f64;
use crate::{Error, Exact, Result, Scalar};

/// Extra size at which limits are evaluated: `P_Sym(n + LIMIT_OFFSET, n)`.
pub const LIMIT_OFFSET: u32 = 60;

/// A value with an absolute error bound.
#[derive(Clone, Debug, PartialEq)]
pub struct Certified<T> {
    pub value: T,
    pub error_bound: f64,
}

/// Probabilities indexed by rank, with an optional truncation bound.
#[derive(Clone, Debug, PartialEq)]
pub struct RankDistribution<T> {
    pub probs: Vec<T>,
    /// Bound on the absolute error of every entry, for limit distributions.
    pub certificate: Option<f64>,
}

impl<T: Scalar> RankDistribution<T> {
    pub fn get(&self, n: usize) -> T {
        self.probs.get(n).cloned().unwrap_or_else(T::zero)
    }

    pub fn total(&self) -> T {
        self.probs.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probs.iter().map(Scalar::to_f64).collect()
    }

    /// Total-variation distance to an empirical distribution.
    pub fn total_variation(&self, empirical: &[f64]) -> f64 {
        let n = self.probs.len().max(empirical.len());
        let model_mass: f64 = self.to_f64().iter().sum();
        let mut tv = (1.0 - model_mass).max(0.0);
        for i in 0..n {
            let p = self.probs.get(i).map_or(0.0, Scalar::to_f64);
            let q = empirical.get(i).copied().unwrap_or(0.0);
            tv += (p - q).abs();
        }
        tv / 2.0
    }
}

fn one_minus_inv_pow2<T: Scalar>(k: u32) -> T {
    T::one() - T::inv_pow2(k)
}

/// `P(m, n, j)`: probability that a uniform `m x n` matrix over GF(2) has a
/// right kernel of dimension `j`.
///
/// With rank `k = n - j` this is
/// `2^{-(m-k)(n-k)} prod_{i<k} (1-2^{i-m})(1-2^{i-n}) / (1-2^{i-k})`.
pub fn p_rect_in<T: Scalar>(m: u32, n: u32, j: u32) -> T {
    if j > n {
        return T::zero();
    }
    let k = n - j;
    if k > m {
        return T::zero();
    }
    let mut acc = T::inv_pow2((m - k) * (n - k));
    for i in 0..k {
        acc = acc * one_minus_inv_pow2::<T>(m - i) * one_minus_inv_pow2::<T>(n - i)
            / one_minus_inv_pow2::<T>(k - i);
    }
    acc
}

pub fn p_rect(m: u32, n: u32, j: u32) -> Exact {
    p_rect_in(m, n, j)
}

/// `P_Sym(r, n)`: probability that a uniform symmetric `r x r` matrix over
/// GF(2) has a kernel of dimension `n`.
///
/// From the count of symmetric matrices of rank `k`,
/// `prod_{i=1}^{k/2} 4^i/(4^i-1) prod_{i<k} (2^{r-i}-1)`, normalised:
/// `2^{-n(n+1)/2} prod_{j=n+1}^{r} (1-2^{-j}) / prod_{i=1}^{(r-n)/2} (1-4^{-i})`.
pub fn p_sym_in<T: Scalar>(r: u32, n: u32) -> T {
    if n > r {
        return T::zero();
    }
    let mut acc = T::inv_pow2(n * (n + 1) / 2);
    for j in n + 1..=r {
        acc = acc * one_minus_inv_pow2::<T>(j);
    }
    for i in 1..=(r - n) / 2 {
        acc = acc / one_minus_inv_pow2::<T>(2 * i);
    }
    acc
}

pub fn p_sym(r: u32, n: u32) -> Exact {
    p_sym_in(r, n)
}

/// Distance bound between `P_Sym(r, n)` and its limit in `r`.
pub fn p_sym_limit_certificate(r: u32, n: u32) -> f64 {
    2f64.powi(1 - r as i32) + 4f64.powi(-(((r - n) / 2) as i32))
}

/// `lim_{r -> oo} P_Sym(r, n)`, evaluated at `r = n + 60`.
pub fn p_sym_limit_in<T: Scalar>(n: u32) -> Certified<T> {
    let r = n + LIMIT_OFFSET;
    Certified {
        value: p_sym_in(r, n),
        error_bound: p_sym_limit_certificate(r, n),
    }
}

pub fn p_sym_limit(n: u32) -> Certified<Exact> {
    p_sym_limit_in(n)
}

pub fn rect_distribution<T: Scalar>(m: u32, n: u32) -> RankDistribution<T> {
    RankDistribution {
        probs: (0..=n).map(|j| p_rect_in(m, n, j)).collect(),
        certificate: None,
    }
}

pub fn sym_distribution<T: Scalar>(r: u32) -> RankDistribution<T> {
    RankDistribution {
        probs: (0..=r).map(|n| p_sym_in(r, n)).collect(),
        certificate: None,
    }
}

/// The limit distribution of kernel dimensions on `0..=n_max`.
pub fn sym_limit_distribution<T: Scalar>(n_max: u32) -> RankDistribution<T> {
    let entries: Vec<Certified<T>> = (0..=n_max).map(p_sym_limit_in).collect();
    let cert = entries.iter().map(|c| c.error_bound).fold(0.0, f64::max);
    RankDistribution {
        probs: entries.into_iter().map(|c| c.value).collect(),
        certificate: Some(cert),
    }
}

/// `prod_{j odd, j <= last} (1 - 2^{-j})`.
pub fn alpha_partial<T: Scalar>(last: u32) -> T {
    (1..=last)
        .step_by(2)
        .fold(T::one(), |acc, j| acc * one_minus_inv_pow2::<T>(j))
}

/// `alpha = prod_{j odd} (1 - 2^{-j})` with a certified truncation.
///
/// Stopping after the odd index `J` leaves an error below
/// `sum_{j > J odd} 2^{-j} = 2^{-J}/3`.
pub fn alpha<T: Scalar>(tolerance: f64) -> Result<Certified<T>> {
    if !(tolerance >= 1e-30) {
        return Err(Error::Invalid(format!("tolerance {tolerance} below 1e-30")));
    }
    let mut last = 1u32;
    while 2f64.powi(-(last as i32)) / 3.0 >= tolerance {
        last += 2;
    }
    Ok(Certified {
        value: alpha_partial(last),
        error_bound: 2f64.powi(-(last as i32)) / 3.0,
    })
}

/// `1/(2^{m+1} - 1)`.
pub fn pell_probability(m: u32) -> Exact {
    BigRational::new(BigInt::one(), (BigInt::one() << (m + 1)) - 1)
}

/// Checks `1/(2^{m+1}-1) = sum_{n<=m} 1/(2^{n+1}-1) P(m,m,n)/2^m` exactly.
pub fn check_pell_recursion(m: u32) -> Result<()> {
    let rhs = (0..=m).fold(Exact::zero(), |acc, n| {
        acc + pell_probability(n) * p_rect(m, m, n) * <Exact as Scalar>::inv_pow2(m)
    });
    if rhs == pell_probability(m) {
        Ok(())
    } else {
        Err(Error::IdentityFailed(format!(
            "Pell recursion at m = {m}: got {rhs}"
        )))
    }
}

/// `sum_m P_Sym_lim(m)/(2^{m+1}-1)`, the predicted density of soluble `d`.
///
/// Terms `m <= m_max`; the tail is below `2 * 2^{-(m_max+1)(m_max+2)/2}` and
/// each limit value carries its own certificate.
pub fn stevenhagen_density_in<T: Scalar>(m_max: u32) -> Certified<T> {
    let mut value = T::zero();
    let mut error = 2f64.powi(-(((m_max + 1) * (m_max + 2) / 2) as i32)) * 2.0;
    for m in 0..=m_max {
        let lim = p_sym_limit_in::<T>(m);
        let w = T::one() / (T::from_u64(1u64 << (m + 1)) - T::one());
        value = value + lim.value * w;
        error += lim.error_bound;
    }
    Certified {
        value,
        error_bound: error,
    }
}

pub fn stevenhagen_density() -> Certified<Exact> {
    stevenhagen_density_in(20)
}

/// Transition kernel `T(n -> j) = P(n, n, j) / 2^n` of the Artin chain.
#[derive(Clone, Debug, PartialEq)]
pub struct MarkovKernel<T> {
    /// `raw[n][j] = P(n, n, j) / 2^n`; row `n` sums to `2^{-n}`.
    pub raw: Vec<Vec<T>>,
    /// `normalized[n][j] = P(n, n, j)`; rows sum to 1.
    pub normalized: Vec<Vec<T>>,
}

impl<T: Scalar> MarkovKernel<T> {
    pub fn raw_row_sum(&self, n: usize) -> T {
        self.raw[n].iter().cloned().fold(T::zero(), |a, b| a + b)
    }
}

pub fn markov_kernel<T: Scalar>(n_max: u32) -> MarkovKernel<T> {
    let mut raw = Vec::new();
    let mut normalized = Vec::new();
    for n in 0..=n_max {
        let row: Vec<T> = (0..=n).map(|j| p_rect_in::<T>(n, n, j)).collect();
        raw.push(row.iter().map(|p| p.clone() * T::inv_pow2(n)).collect());
        normalized.push(row);
    }
    MarkovKernel { raw, normalized }
}

/// `eta_oo = prod_{i >= 1} (1 - 2^{-i})`, truncated with error below `2^{-terms}`.
pub fn eta_infinity<T: Scalar>(terms: u32) -> Certified<T> {
    let value = (1..=terms).fold(T::one(), |acc, i| acc * one_minus_inv_pow2::<T>(i));
    Certified {
        value,
        error_bound: 2f64.powi(-(terms as i32)),
    }
}

/// `|Aut(A)|` for `A = prod Z/2^{e_i}` (Hillar and Rhea's formula).
pub fn automorphism_count(exponents: &[u32]) -> BigInt {
    let mut e: Vec<u32> = exponents.iter().copied().filter(|&x| x > 0).collect();
    e.sort_unstable();
    let n = e.len();
    let pow2 = |k: u64| BigInt::one() << k;
    let mut total = BigInt::one();
    for k in 0..n {
        // d_k = max{l : e_l = e_k}, c_k = min{l : e_l = e_k}, 1-based.
        let d = (0..n).filter(|&l| e[l] == e[k]).max().unwrap() + 1;
        let c = (0..n).filter(|&l| e[l] == e[k]).min().unwrap() + 1;
        total *= pow2(d as u64) - pow2(k as u64);
        total *= pow2(e[k] as u64 * (n - d) as u64);
        total *= pow2((e[k] as u64 - 1) * (n - c + 1) as u64);
    }
    total
}

/// Cohen-Lenstra mass `eta_oo / |Aut(A)|` of a finite abelian 2-group.
pub fn cl_mass<T: Scalar>(exponents: &[u32]) -> Certified<T> {
    let eta = eta_infinity::<T>(64);
    let aut = automorphism_count(exponents);
    let aut_t = T::from_ratio(&aut, &BigInt::one());
    let bound = eta.error_bound / ratio_to_f64(&aut, &BigInt::one());
    Certified {
        value: eta.value / aut_t,
        error_bound: bound,
    }
}

/// One line of a model table: `kind, params..., numerator, denominator, float64`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelRow {
    pub kind: &'static str,
    pub params: Vec<i64>,
    pub value: Exact,
}

impl fmt::Display for ModelRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        for p in &self.params {
            write!(f, ",{p}")?;
        }
        let v = ratio_to_f64(self.value.numer(), self.value.denom());
        write!(
            f,
            ",{},{},{:.17e}",
            self.value.numer(),
            self.value.denom(),
            v
        )
    }
}

/// Rows for every model quantity at the given sizes.
pub fn model_table(max_dim: u32, max_sym: u32, markov_max: u32) -> Vec<ModelRow> {
    let mut rows = Vec::new();
    for m in 0..=max_dim {
        for n in 0..=max_dim {
            for j in 0..=n {
                rows.push(ModelRow {
                    kind: "p_rect",
                    params: vec![m as i64, n as i64, j as i64],
                    value: p_rect(m, n, j),
                });
            }
        }
    }
    for r in 0..=max_sym {
        for n in 0..=r {
            rows.push(ModelRow {
                kind: "p_sym",
                params: vec![r as i64, n as i64],
                value: p_sym(r, n),
            });
        }
    }
    for n in 0..=max_sym {
        rows.push(ModelRow {
            kind: "p_sym_limit",
            params: vec![n as i64],
            value: p_sym_limit(n).value,
        });
    }
    let kernel = markov_kernel::<Exact>(markov_max);
    for (n, row) in kernel.raw.iter().enumerate() {
        for (j, v) in row.iter().enumerate() {
            rows.push(ModelRow {
                kind: "markov_raw",
                params: vec![n as i64, j as i64],
                value: v.clone(),
            });
        }
    }
    for m in 0..=markov_max {
        rows.push(ModelRow {
            kind: "pell_probability",
            params: vec![m as i64],
            value: pell_probability(m),
        });
    }
    rows.push(ModelRow {
        kind: "alpha",
        params: vec![],
        value: alpha::<Exact>(1e-15).expect("valid tolerance").value,
    });
    rows.push(ModelRow {
        kind: "stevenhagen_density",
        params: vec![],
        value: stevenhagen_density().value,
    });
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Exact {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn known_values() {
        assert_eq!(p_rect(1, 1, 0), q(1, 2));
        assert_eq!(p_rect(1, 1, 1), q(1, 2));
        assert_eq!(p_rect(2, 2, 2), q(1, 16));
        assert_eq!(p_rect(2, 2, 0), q(3, 8));
        assert_eq!(p_rect(2, 2, 1), q(9, 16));
        assert_eq!(p_sym(1, 0), q(1, 2));
        assert_eq!(p_sym(1, 1), q(1, 2));
        let k = markov_kernel::<Exact>(2);
        assert_eq!(k.raw[0][0], q(1, 1));
        assert_eq!(k.raw[1], vec![q(1, 4), q(1, 4)]);
        assert_eq!(pell_probability(0), q(1, 1));
        assert_eq!(pell_probability(1), q(1, 3));
        assert_eq!(alpha_partial::<Exact>(1), q(1, 2));
    }

    #[test]
    fn distributions_sum_to_one() {
        for r in 0..=12 {
            assert_eq!(sym_distribution::<Exact>(r).total(), Exact::one());
        }
        for m in 0..=8 {
            for n in 0..=8 {
                assert_eq!(rect_distribution::<Exact>(m, n).total(), Exact::one());
            }
        }
        for n in 0..=6 {
            assert_eq!(
                markov_kernel::<Exact>(6).raw_row_sum(n),
                <Exact as Scalar>::inv_pow2(n as u32)
            );
        }
    }

    #[test]
    fn float_instances_track_exact() {
        for r in 0..=10 {
            for n in 0..=r {
                let e = p_sym(r, n).to_f64();
                assert!((p_sym_in::<f64>(r, n) - e).abs() < 1e-15);
                assert!((f64::from(p_sym_in::<f32>(r, n)) - e).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn automorphisms_of_small_groups() {
        assert_eq!(automorphism_count(&[]), BigInt::from(1));
        assert_eq!(automorphism_count(&[1]), BigInt::from(1));
        assert_eq!(automorphism_count(&[1, 1]), BigInt::from(6));
        assert_eq!(automorphism_count(&[2]), BigInt::from(2));
        assert_eq!(automorphism_count(&[1, 1, 1]), BigInt::from(168));
        let m = cl_mass::<f64>(&[]);
        assert!((m.value - 0.2887880951).abs() < 1e-10);
    }
}
