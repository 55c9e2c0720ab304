use std::ops::{Add, AddAssign, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{Error, Result};

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi(a: i128, n: u128) -> Result<i8> {
    if n == 0 || n % 2 == 0 {
        return Err(Error::EvenModulus(n.to_string()));
    }
    let mut a = a.rem_euclid(n as i128) as u128;
    let mut n = n;
    let mut t = 1i8;
    while a != 0 {
        let tz = a.trailing_zeros();
        a >>= tz;
        if tz % 2 == 1 && (n % 8 == 3 || n % 8 == 5) {
            t = -t;
        }
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        (a, n) = (n % a, a);
    }
    Ok(if n == 1 { t } else { 0 })
}

/// Jacobi symbol for arbitrary-precision operands.
pub fn jacobi_big(a: &BigInt, n: &BigInt) -> Result<i8> {
    if !n.is_positive() || n.is_even() {
        return Err(Error::EvenModulus(n.to_string()));
    }
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut t = 1i8;
    let eight = BigInt::from(8);
    let four = BigInt::from(4);
    while !a.is_zero() {
        let tz = a.trailing_zeros().unwrap_or(0);
        a >>= tz;
        let n8 = (&n % &eight).to_u8().unwrap_or(0);
        if tz % 2 == 1 && (n8 == 3 || n8 == 5) {
            t = -t;
        }
        if (&a % &four) == BigInt::from(3) && (&n % &four) == BigInt::from(3) {
            t = -t;
        }
        let r = &n % &a;
        n = a;
        a = r;
    }
    Ok(if n.is_one() { t } else { 0 })
}

/// Legendre symbol `(a/p)` for an odd prime `p`. Primality is not checked.
pub fn legendre(a: i128, p: u128) -> Result<i8> {
    jacobi(a, p)
}

/// Kronecker symbol `(a/n)` for positive `n`, extending [`jacobi`] with
/// `(a/2) = 0` for even `a`, `+1` for `a = +-1 mod 8` and `-1` otherwise.
pub fn kronecker(a: i128, n: u128) -> Result<i8> {
    if n == 0 {
        return Err(Error::Invalid("Kronecker symbol with modulus 0".into()));
    }
    let tz = n.trailing_zeros();
    let two = match (a.rem_euclid(8), tz) {
        (_, 0) => 1,
        (r, _) if r % 2 == 0 => return Ok(0),
        (1 | 7, _) => 1,
        _ => {
            if tz % 2 == 1 {
                -1
            } else {
                1
            }
        }
    };
    Ok(two * jacobi(a, n >> tz)?)
}

/// Element of the field with two elements, written additively.
///
/// The sign map `iota` sends 0 to +1 and 1 to -1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Bit(u8);

impl F2Bit {
    pub const ZERO: F2Bit = F2Bit(0);
    pub const ONE: F2Bit = F2Bit(1);

    pub fn new(bit: u8) -> Result<Self> {
        match bit {
            0 | 1 => Ok(F2Bit(bit)),
            _ => Err(Error::Invalid(format!("{bit} is not a bit"))),
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn iota(self) -> i8 {
        1 - 2 * self.0 as i8
    }

    /// Inverse of [`F2Bit::iota`]; rejects anything but `+1` and `-1`.
    pub fn from_sign(sign: i8) -> Result<Self> {
        match sign {
            1 => Ok(F2Bit(0)),
            -1 => Ok(F2Bit(1)),
            _ => Err(Error::Invalid(format!("{sign} is not a sign"))),
        }
    }
}

impl Add for F2Bit {
    type Output = F2Bit;
    fn add(self, rhs: F2Bit) -> F2Bit {
        F2Bit(self.0 ^ rhs.0)
    }
}

impl AddAssign for F2Bit {
    fn add_assign(&mut self, rhs: F2Bit) {
        self.0 ^= rhs.0;
    }
}

impl Mul for F2Bit {
    type Output = F2Bit;
    fn mul(self, rhs: F2Bit) -> F2Bit {
        F2Bit(self.0 & rhs.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(jacobi(1, 7).unwrap(), 1);
        assert_eq!(jacobi(2, 17).unwrap(), 1);
        assert_eq!(jacobi(3, 7).unwrap(), -1);
        assert!(jacobi(3, 8).is_err());
        assert!(jacobi(3, 0).is_err());
        assert_eq!(jacobi(-1, 1).unwrap(), 1);
    }

    #[test]
    fn kronecker_at_two() {
        for (a, k) in [(1, 1), (7, 1), (17, 1), (3, -1), (5, -1), (13, -1), (4, 0)] {
            assert_eq!(kronecker(a, 2).unwrap(), k, "({a}/2)");
        }
        assert_eq!(kronecker(3, 4).unwrap(), 1);
        assert_eq!(kronecker(5, 6).unwrap(), jacobi(5, 3).unwrap() * -1);
        assert_eq!(kronecker(5, 9).unwrap(), jacobi(5, 9).unwrap());
    }

    #[test]
    fn big_agrees_with_machine() {
        for n in (1u128..400).step_by(2) {
            for a in -200i128..200 {
                let j = jacobi(a, n).unwrap();
                let jb = jacobi_big(&BigInt::from(a), &BigInt::from(n)).unwrap();
                assert_eq!(j, jb, "({a}/{n})");
            }
        }
    }

    #[test]
    fn iota_is_a_homomorphism() {
        for x in [F2Bit::ZERO, F2Bit::ONE] {
            assert_eq!(F2Bit::from_sign(x.iota()).unwrap(), x);
            for y in [F2Bit::ZERO, F2Bit::ONE] {
                assert_eq!((x + y).iota(), x.iota() * y.iota());
            }
        }
        assert!(F2Bit::from_sign(0).is_err());
        assert!(F2Bit::new(2).is_err());
    }
}
