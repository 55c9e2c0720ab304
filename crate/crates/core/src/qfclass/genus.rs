use num_integer::Integer;

use super::forms::QuadForm;
use crate::arith::{jacobi, FamilyDElement};
use crate::gf2::F2Vec;
use crate::{Error, Result};

const INITIAL_BOX: i64 = 50;
const MAX_BOX: i64 = 1 << 12;

/// An integer primitively represented by `f` and coprime to `2 delta`.
///
/// The box `|x|, |y| <= 50` is scanned in a fixed order and doubled on failure.
pub fn primely_represented(f: &QuadForm, delta: i64) -> Result<i128> {
    let two_delta = 2 * delta as i128;
    let mut side = INITIAL_BOX;
    while side <= MAX_BOX {
        for y in 0..=side {
            for x in -side..=side {
                if (x == 0 && y == 0) || x.gcd(&y) != 1 {
                    continue;
                }
                let n = f.eval(x, y);
                if n != 0 && n.gcd(&two_delta) == 1 {
                    return Ok(n);
                }
            }
        }
        side *= 2;
    }
    Err(Error::Invalid(format!(
        "{f} represents no integer coprime to {two_delta} in the search box"
    )))
}

/// Values of the genus characters attached to the prime divisors of `d`
/// (Legendre symbols for odd primes, `(2/n)` for the prime 2) on the class
/// of `f`, as bits: 1 where the character is -1.
pub fn genus_character_bits(f: &QuadForm, d: &FamilyDElement, delta: i64) -> Result<F2Vec> {
    let n = primely_represented(f, delta)?.unsigned_abs();
    let mut v = F2Vec::zeros(d.omega());
    for (j, &p) in d.primes().iter().enumerate() {
        let sign = if p == 2 {
            if n % 8 == 1 || n % 8 == 7 {
                1
            } else {
                -1
            }
        } else {
            jacobi(n as i128, p as u128)?
        };
        v.set(j, sign == -1);
    }
    Ok(v)
}
