use num_integer::Integer;

use crate::arith::{factor, isqrt_u128, sqrt_mod_prime};
use crate::{Error, Result};

const SEARCH_BOUND: i64 = 10_000;

/// Outcome of solving `x^2 - a y^2 - b z^2 = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConicSolution {
    Point(i128, i128, i128),
    /// The conic has no rational point.
    Failure,
}

fn overflow() -> Error {
    Error::Overflow("conic descent")
}

fn mul(a: i128, b: i128) -> Result<i128> {
    a.checked_mul(b).ok_or_else(overflow)
}

fn add(a: i128, b: i128) -> Result<i128> {
    a.checked_add(b).ok_or_else(overflow)
}

/// Splits `m != 0` as `k^2 * s` with `s` squarefree (sign kept in `s`).
fn square_part(m: i128) -> (i128, i128) {
    let f = factor(m.unsigned_abs());
    let (mut k, mut s) = (1i128, m.signum());
    for &(p, e) in f.factors() {
        let p = p as i128;
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
    }
    (k, s)
}

/// A root of `t^2 = b (mod |a|)` with `|t| <= |a|/2`, for squarefree `a`.
fn sqrt_mod_squarefree(b: i128, a: i128) -> Option<i128> {
    let n = a.unsigned_abs();
    let mut t: i128 = 0;
    let mut modulus: i128 = 1;
    for &(p, _) in factor(n).factors() {
        let r = sqrt_mod_prime(b, p)? as i128;
        let p = p as i128;
        // CRT: t' = t (mod modulus), t' = r (mod p).
        let inv = modulus.extended_gcd(&p).x.rem_euclid(p);
        let k = ((r - t).rem_euclid(p) * inv).rem_euclid(p);
        t += modulus * k;
        modulus *= p;
    }
    let n = n as i128;
    let t = t.rem_euclid(n);
    Some(if 2 * t > n { t - n } else { t })
}

/// Descent for `x^2 = a y^2 + b z^2` with squarefree nonzero `a`, `b`.
fn descend(a: i128, b: i128, depth: u32) -> Result<Option<(i128, i128, i128)>> {
    if depth > 200 {
        return Err(overflow());
    }
    if a == 1 {
        return Ok(Some((1, 1, 0)));
    }
    if b == 1 {
        return Ok(Some((1, 0, 1)));
    }
    if a < 0 && b < 0 {
        return Ok(None);
    }
    if a.abs() < b.abs() {
        return Ok(descend(b, a, depth + 1)?.map(|(x, y, z)| (x, z, y)));
    }
    // |a| >= |b| and |a| >= 2 from here on.
    let Some(t) = sqrt_mod_squarefree(b, a) else {
        return Ok(None);
    };
    let m = (mul(t, t)? - b) / a;
    if m == 0 {
        // t^2 = b: b is a perfect square, so b = 1, handled above.
        return Err(Error::Invalid(format!("degenerate conic ({a}, {b})")));
    }
    let (k, s) = square_part(m);
    let Some((x1, y1, z1)) = descend(s, b, depth + 1)? else {
        return Ok(None);
    };
    // (t + sqrt b)(x1 + z1 sqrt b) has norm a (k s y1)^2.
    let x = add(mul(t, x1)?, mul(b, z1)?)?;
    let z = add(x1, mul(t, z1)?)?;
    let y = mul(mul(k, s)?, y1)?;
    Ok(Some(primitive(x, y, z)))
}

fn primitive(x: i128, y: i128, z: i128) -> (i128, i128, i128) {
    let g = x.gcd(&y).gcd(&z);
    if g == 0 {
        return (x, y, z);
    }
    let (x, y, z) = (x / g, y / g, z / g);
    if x < 0 || (x == 0 && (y < 0 || (y == 0 && z < 0))) {
        (-x, -y, -z)
    } else {
        (x, y, z)
    }
}

fn exhaustive(a: i64, b: i64) -> Result<ConicSolution> {
    for z in 0..=SEARCH_BOUND as i128 {
        for y in 0..=SEARCH_BOUND as i128 {
            if y == 0 && z == 0 {
                continue;
            }
            let v = a as i128 * y * y + b as i128 * z * z;
            if v < 0 {
                continue;
            }
            let x = isqrt_u128(v as u128) as i128;
            if x * x == v && x <= SEARCH_BOUND as i128 {
                let (x, y, z) = primitive(x, y, z);
                return Ok(ConicSolution::Point(x, y, z));
            }
        }
    }
    Err(Error::ConicSearchExhausted {
        a,
        b,
        bound: SEARCH_BOUND,
    })
}

/// Solves `x^2 - a y^2 - b z^2 = 0` for squarefree nonzero `a`, `b`.
///
/// Descent on the larger coefficient; on `i128` overflow the box
/// `|x|, |y|, |z| <= 10^4` is searched instead. The returned point is
/// primitive with `x >= 0`.
pub fn solve_conic(a: i64, b: i64) -> Result<ConicSolution> {
    for v in [a, b] {
        if v == 0 || !factor(v.unsigned_abs() as u128).is_squarefree() {
            return Err(Error::Invalid(format!(
                "conic coefficient {v} is not squarefree"
            )));
        }
    }
    match descend(a as i128, b as i128, 0) {
        Ok(Some((x, y, z))) => {
            debug_assert_eq!(x * x - a as i128 * y * y - b as i128 * z * z, 0);
            Ok(ConicSolution::Point(x, y, z))
        }
        Ok(None) => Ok(ConicSolution::Failure),
        Err(Error::Overflow(_)) => exhaustive(a, b),
        Err(e) => Err(e),
    }
}

/// Reflection of the conic point `p` through the direction `v`:
/// `Q(v) p - 2 B(p, v) v`, made primitive. `None` when degenerate.
pub fn reflect(
    a: i64,
    b: i64,
    p: (i128, i128, i128),
    v: (i128, i128, i128),
) -> Option<(i128, i128, i128)> {
    let (a, b) = (a as i128, b as i128);
    let q = v.0.checked_mul(v.0)?
        - a.checked_mul(v.1.checked_mul(v.1)?)?
        - b.checked_mul(v.2.checked_mul(v.2)?)?;
    let bil = p.0.checked_mul(v.0)?
        - a.checked_mul(p.1.checked_mul(v.1)?)?
        - b.checked_mul(p.2.checked_mul(v.2)?)?;
    if q == 0 {
        return None;
    }
    let c = bil.checked_mul(2)?;
    let x = q.checked_mul(p.0)?.checked_sub(c.checked_mul(v.0)?)?;
    let y = q.checked_mul(p.1)?.checked_sub(c.checked_mul(v.1)?)?;
    let z = q.checked_mul(p.2)?.checked_sub(c.checked_mul(v.2)?)?;
    if x == 0 && y == 0 && z == 0 {
        return None;
    }
    Some(primitive(x, y, z))
}

/// Up to `count` distinct primitive points, starting with the descent solution.
pub fn conic_points(a: i64, b: i64, count: usize) -> Result<Vec<(i128, i128, i128)>> {
    let ConicSolution::Point(x, y, z) = solve_conic(a, b)? else {
        return Ok(Vec::new());
    };
    let mut out = vec![(x, y, z)];
    'outer: for n in 1i128..=6 {
        for v0 in -n..=n {
            for v1 in -n..=n {
                for v2 in [-n, n] {
                    if out.len() >= count {
                        break 'outer;
                    }
                    if let Some(p) = reflect(a, b, (x, y, z), (v0, v1, v2)) {
                        if !out.contains(&p) {
                            out.push(p);
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}
