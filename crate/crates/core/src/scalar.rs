use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// Field-like scalar used for probabilities and densities.
///
/// Implemented for `f32`, `f64` and [`BigRational`]. Exact code paths use the
/// rational instance; the float instances exist for presentation and quick
/// estimates.
pub trait Scalar: Clone + Debug + PartialOrd + Num + Send + Sync + 'static {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self;

    fn from_u64(n: u64) -> Self;

    fn to_f64(&self) -> f64;

    /// `2^-k`.
    fn inv_pow2(k: u32) -> Self {
        let den = BigInt::one() << k;
        Self::from_ratio(&BigInt::one(), &den)
    }

    fn powu(&self, exp: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for f64 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        ratio_to_f64(num, den)
    }

    fn from_u64(n: u64) -> Self {
        n as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

impl Scalar for f32 {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        ratio_to_f64(num, den) as f32
    }

    fn from_u64(n: u64) -> Self {
        n as f32
    }

    fn to_f64(&self) -> f64 {
        f64::from(*self)
    }
}

impl Scalar for BigRational {
    fn from_ratio(num: &BigInt, den: &BigInt) -> Self {
        BigRational::new(num.clone(), den.clone())
    }

    fn from_u64(n: u64) -> Self {
        <BigRational as FromPrimitive>::from_u64(n).expect("u64 is representable")
    }

    fn to_f64(&self) -> f64 {
        ratio_to_f64(self.numer(), self.denom())
    }
}

/// Correctly scaled conversion of a big rational to `f64`.
///
/// Both operands are shifted so the quotient keeps 64 significant bits
/// before the final float division; huge denominators (2^7000 and up, as in
/// the symmetric-matrix counts) do not underflow to NaN.
pub(crate) fn ratio_to_f64(num: &BigInt, den: &BigInt) -> f64 {
    if num.is_zero() {
        return 0.0;
    }
    let negative =
        (num.sign() == num_bigint::Sign::Minus) != (den.sign() == num_bigint::Sign::Minus);
    let n = num.magnitude();
    let d = den.magnitude();
    let shift = n.bits() as i64 - d.bits() as i64 - 64;
    let q = if shift >= 0 {
        n / (d << shift as u64)
    } else {
        (n << (-shift) as u64) / d
    };
    let mantissa = q.to_f64().unwrap_or(f64::INFINITY);
    let value = mantissa * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32);
    if negative {
        -value
    } else {
        value
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn huge_denominator_converts() {
        let num = BigInt::one();
        let den = BigInt::one() << 5000u32;
        let v = ratio_to_f64(&(num.clone() << 4999u32), &den);
        assert_eq!(v, 0.5);
        assert_eq!(ratio_to_f64(&BigInt::from(-3), &BigInt::from(4)), -0.75);
    }

    #[test]
    fn powu_matches_repeated_product() {
        let x = BigRational::new(BigInt::from(3), BigInt::from(7));
        let mut acc = BigRational::one();
        for _ in 0..9 {
            acc *= x.clone();
        }
        assert_eq!(x.powu(9), acc);
        assert_eq!(<f64 as Scalar>::inv_pow2(3), 0.125);
    }
}
