//! Continued fractions of `sqrt d` and the equations `x^2 - d y^2 = +-1`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::arith::{factor, isqrt_u64};
use crate::{Error, Result};

/// Continued fraction `sqrt d = [a0; a_1, ..., a_l]` with minimal period.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub d: u64,
    pub a0: u64,
    pub period: Vec<u64>,
}

impl CfExpansion {
    pub fn period_length(&self) -> usize {
        self.period.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigUint,
    pub y: BigUint,
    pub sign: i8,
}

impl PellSolution {
    /// Exact check of `x^2 - d y^2 = sign`.
    pub fn verify(&self, d: u64) -> bool {
        let lhs = BigInt::from(&self.x * &self.x) - BigInt::from(&self.y * &self.y * d);
        lhs == BigInt::from(self.sign) && !self.y.is_zero()
    }

    /// `(x + y sqrt d)^2`.
    pub fn square(&self, d: u64) -> PellSolution {
        PellSolution {
            x: &self.x * &self.x + &self.y * &self.y * d,
            y: BigUint::from(2u32) * &self.x * &self.y,
            sign: 1,
        }
    }
}

fn check_radicand(d: u64) -> Result<u64> {
    if d < 2 {
        return Err(Error::RadicandTooSmall(d));
    }
    let a0 = isqrt_u64(d);
    if a0 * a0 == d {
        return Err(Error::PerfectSquare(d));
    }
    Ok(a0)
}

/// One step `(P, Q, a) -> (P', Q', a')` of the standard algorithm.
///
/// With `P < sqrt d` and `Q < 2 sqrt d` every intermediate fits in a `u64`
/// for all `u64` radicands; the checks only guard against logic errors.
#[inline]
fn cf_step(d: u64, a0: u64, p: u64, q: u64, a: u64) -> Result<(u64, u64, u64)> {
    let p1 = a
        .checked_mul(q)
        .and_then(|v| v.checked_sub(p))
        .ok_or(Error::Overflow("cf_sqrt"))?;
    let q1 = d
        .checked_sub(p1.checked_mul(p1).ok_or(Error::Overflow("cf_sqrt"))?)
        .ok_or(Error::Overflow("cf_sqrt"))?
        / q;
    let a1 = (a0 + p1) / q1;
    Ok((p1, q1, a1))
}

pub fn cf_sqrt(d: u64) -> Result<CfExpansion> {
    let a0 = check_radicand(d)?;
    let (mut p, mut q, mut a) = (0u64, 1u64, a0);
    let mut period = Vec::new();
    loop {
        (p, q, a) = cf_step(d, a0, p, q, a)?;
        period.push(a);
        if a == 2 * a0 {
            break;
        }
    }
    Ok(CfExpansion { d, a0, period })
}

/// Parity of the period, found at its midpoint.
///
/// The sequences `P_k`, `Q_k` are symmetric about the middle of the period:
/// an even period `2h` shows `P_h = P_{h+1}`, an odd period `2h+1` shows
/// `Q_h = Q_{h+1}`, and neither coincidence occurs earlier.
pub fn period_is_odd(d: u64) -> Result<bool> {
    let a0 = check_radicand(d)?;
    let (mut p, mut q, mut a) = (0u64, 1u64, a0);
    loop {
        let (p1, q1, a1) = cf_step(d, a0, p, q, a)?;
        if q1 == q {
            return Ok(true);
        }
        if p1 == p && q != 1 {
            return Ok(false);
        }
        (p, q, a) = (p1, q1, a1);
    }
}

/// Solution read off the convergent `p_{l-1}/q_{l-1}`.
pub fn fundamental_solution(d: u64) -> Result<PellSolution> {
    let cf = cf_sqrt(d)?;
    let l = cf.period.len();
    let (mut p_prev, mut p) = (BigUint::one(), BigUint::from(cf.a0));
    let (mut q_prev, mut q) = (BigUint::zero(), BigUint::one());
    for &a in &cf.period[..l - 1] {
        let p_next = &p * a + &p_prev;
        let q_next = &q * a + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
    let sol = PellSolution {
        x: p,
        y: q,
        sign: if l % 2 == 1 { -1 } else { 1 },
    };
    debug_assert!(sol.verify(d));
    Ok(sol)
}

/// Minimal solution of `x^2 - d y^2 = 1`.
pub fn plus_one_fundamental(d: u64) -> Result<PellSolution> {
    let sol = fundamental_solution(d)?;
    Ok(if sol.sign == -1 { sol.square(d) } else { sol })
}

/// Whether `x^2 - d y^2 = -1` has an integer solution.
pub fn neg_pell_soluble(d: u64) -> Result<bool> {
    period_is_odd(d)
}

/// Whether `x^2 - d y^2 = -1` is soluble over the rationals, i.e. every
/// prime divisor of the squarefree `d` is 1 or 2 mod 4.
pub fn rationally_soluble(d: u64) -> Result<bool> {
    if d < 2 {
        return Err(Error::RadicandTooSmall(d));
    }
    let f = factor(d as u128);
    if !f.is_squarefree() {
        return Err(Error::NotSquarefree(d));
    }
    let ok = f.primes().all(|p| p % 4 != 3);
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_expansions() {
        let cf = cf_sqrt(2).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (1, vec![2]));
        let cf = cf_sqrt(34).unwrap();
        assert_eq!((cf.a0, cf.period.clone()), (5, vec![1, 4, 1, 10]));
        assert_eq!(cf_sqrt(61).unwrap().period_length(), 11);
        assert_eq!(cf_sqrt(16), Err(Error::PerfectSquare(16)));
        assert_eq!(cf_sqrt(1), Err(Error::RadicandTooSmall(1)));
    }

    #[test]
    fn solutions_for_61() {
        let s = fundamental_solution(61).unwrap();
        assert_eq!((s.x, s.y, s.sign), (29718u32.into(), 3805u32.into(), -1));
        let s = plus_one_fundamental(61).unwrap();
        assert_eq!(
            (s.x, s.y, s.sign),
            (1766319049u64.into(), 226153980u64.into(), 1)
        );
    }

    #[test]
    fn small_solutions() {
        let s = fundamental_solution(2).unwrap();
        assert_eq!((s.x, s.y, s.sign), (1u32.into(), 1u32.into(), -1));
        let s = plus_one_fundamental(3).unwrap();
        assert_eq!((s.x, s.y, s.sign), (2u32.into(), 1u32.into(), 1));
        let s = plus_one_fundamental(5).unwrap();
        assert_eq!((s.x, s.y, s.sign), (9u32.into(), 4u32.into(), 1));
    }

    #[test]
    fn midpoint_parity_matches_full_period() {
        for d in 2..20_000u64 {
            let r = isqrt_u64(d);
            if r * r == d {
                continue;
            }
            let odd = cf_sqrt(d).unwrap().period_length() % 2 == 1;
            assert_eq!(period_is_odd(d).unwrap(), odd, "d = {d}");
        }
    }

    #[test]
    fn rational_solubility() {
        assert!(rationally_soluble(34).unwrap());
        assert!(!rationally_soluble(3).unwrap());
        assert!(rationally_soluble(205).unwrap());
        assert_eq!(rationally_soluble(12), Err(Error::NotSquarefree(12)));
    }
}
