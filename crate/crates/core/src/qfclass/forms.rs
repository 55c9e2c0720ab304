use std::fmt;

use crate::arith::isqrt_u64;
use crate::{Error, Result};

/// Positive nonsquare discriminant congruent to 0 or 1 mod 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Discriminant {
    value: i64,
    sqrt_floor: i64,
}

impl Discriminant {
    pub fn new(value: i64) -> Result<Self> {
        if value <= 0 {
            return Err(Error::InvalidDiscriminant(value, "not positive"));
        }
        if value.rem_euclid(4) > 1 {
            return Err(Error::InvalidDiscriminant(value, "not 0 or 1 mod 4"));
        }
        let s = isqrt_u64(value as u64) as i64;
        if s * s == value {
            return Err(Error::InvalidDiscriminant(value, "perfect square"));
        }
        Ok(Discriminant {
            value,
            sqrt_floor: s,
        })
    }

    /// `d` for `d = 1 mod 4`, otherwise `4d`.
    pub fn of_radicand(d: u64) -> Result<Self> {
        let d = i64::try_from(d).map_err(|_| Error::Overflow("discriminant"))?;
        if d % 4 == 1 {
            Self::new(d)
        } else {
            Self::new(d.checked_mul(4).ok_or(Error::Overflow("discriminant"))?)
        }
    }

    pub fn value(&self) -> i64 {
        self.value
    }

    pub fn sqrt_floor(&self) -> i64 {
        self.sqrt_floor
    }
}

/// Indefinite binary quadratic form `a x^2 + b xy + c y^2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl QuadForm {
    pub fn new(a: i64, b: i64, c: i64) -> Self {
        QuadForm { a, b, c }
    }

    /// `b^2 - 4ac`, widened.
    pub fn discriminant(&self) -> i128 {
        let (a, b, c) = (self.a as i128, self.b as i128, self.c as i128);
        b * b - 4 * a * c
    }

    /// Form with leading coefficient `a` and the given discriminant.
    pub fn with_discriminant(a: i64, b: i64, disc: &Discriminant) -> Result<Self> {
        let num = b as i128 * b as i128 - disc.value as i128;
        let den = 4 * a as i128;
        if den == 0 || num % den != 0 {
            return Err(Error::Invalid(format!(
                "no form ({a}, {b}, .) of discriminant {}",
                disc.value
            )));
        }
        let c = i64::try_from(num / den).map_err(|_| Error::Overflow("form coefficient"))?;
        Ok(QuadForm { a, b, c })
    }

    pub fn is_reduced(&self, disc: &Discriminant) -> bool {
        let s = disc.sqrt_floor;
        let a2 = 2 * self.a.unsigned_abs() as i64;
        self.b >= 1 && self.b <= s && s - self.b < a2 && a2 <= s + self.b
    }

    pub fn eval(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x + self.b as i128 * x * y + self.c as i128 * y * y
    }

    /// The principal form of the discriminant, reduced.
    pub fn principal(disc: &Discriminant) -> QuadForm {
        let s = disc.sqrt_floor;
        let b = if (s - disc.value) % 2 == 0 { s } else { s - 1 };
        QuadForm {
            a: 1,
            b,
            c: (b * b - disc.value) / 4,
        }
    }

    /// Form of leading coefficient `-1`, whose class has order at most 2.
    pub fn minus_one(disc: &Discriminant) -> QuadForm {
        let s = disc.sqrt_floor;
        let b = if (s - disc.value) % 2 == 0 { s } else { s - 1 };
        QuadForm {
            a: -1,
            b,
            c: (disc.value - b * b) / 4,
        }
    }
}

/// Coefficients in `i128` during composition and reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct WideForm {
    pub a: i128,
    pub b: i128,
    pub c: i128,
}

impl From<QuadForm> for WideForm {
    fn from(f: QuadForm) -> Self {
        WideForm {
            a: f.a as i128,
            b: f.b as i128,
            c: f.c as i128,
        }
    }
}

/// The reduction operator `rho(a, b, c) = (c, r, (r^2 - D)/(4c))`.
pub(crate) fn rho(f: WideForm, disc: &Discriminant) -> WideForm {
    let s = disc.sqrt_floor as i128;
    let c = f.c;
    let m = 2 * c.abs();
    let lower = if c.abs() <= s {
        s - m + 1
    } else {
        -c.abs() + 1
    };
    let r = lower + (-f.b - lower).rem_euclid(m);
    WideForm {
        a: c,
        b: r,
        c: (r * r - disc.value as i128) / (4 * c),
    }
}

fn wide_is_reduced(f: &WideForm, disc: &Discriminant) -> bool {
    let s = disc.sqrt_floor as i128;
    let a2 = 2 * f.a.abs();
    f.b >= 1 && f.b <= s && s - f.b < a2 && a2 <= s + f.b
}

/// Applies `rho` until the form is reduced.
pub(crate) fn reduce(f: WideForm, disc: &Discriminant) -> Result<QuadForm> {
    let mut g = f;
    for _ in 0..10_000 {
        if wide_is_reduced(&g, disc) {
            let conv = |x: i128| i64::try_from(x).map_err(|_| Error::Overflow("reduce"));
            return Ok(QuadForm {
                a: conv(g.a)?,
                b: conv(g.b)?,
                c: conv(g.c)?,
            });
        }
        g = rho(g, disc);
    }
    Err(Error::ClassGroupInconsistent {
        delta: disc.value,
        what: format!("reduction of ({}, {}, {}) did not terminate", f.a, f.b, f.c),
    })
}

pub fn reduce_form(f: QuadForm, disc: &Discriminant) -> Result<QuadForm> {
    if f.discriminant() != disc.value as i128 {
        return Err(Error::Invalid(format!(
            "{f} does not have discriminant {}",
            disc.value
        )));
    }
    reduce(f.into(), disc)
}

/// One application of the reduction operator to a reduced form.
pub fn rho_step(f: QuadForm, disc: &Discriminant) -> Result<QuadForm> {
    reduce(rho(f.into(), disc), disc)
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Dirichlet composition of primitive forms of the same discriminant,
/// followed by reduction.
pub fn compose(f1: QuadForm, f2: QuadForm, disc: &Discriminant) -> Result<QuadForm> {
    let delta = disc.value as i128;
    let (a1, b1, _c1) = (f1.a as i128, f1.b as i128, f1.c as i128);
    let (a2, b2, c2) = (f2.a as i128, f2.b as i128, f2.c as i128);
    let s = (b1 + b2) / 2;
    let (g1, x1, y1) = ext_gcd(a1, a2);
    let (e, x2, w) = ext_gcd(g1, s);
    let v = x2 * y1;
    let _u = x2 * x1;
    let inconsistent = |what: &str| Error::ClassGroupInconsistent {
        delta: disc.value,
        what: format!("composition of {f1} and {f2}: {what}"),
    };
    if (a1 * a2) % (e * e) != 0 {
        return Err(inconsistent("a1 a2 not divisible by e^2"));
    }
    let a3 = a1 * a2 / (e * e);
    let t = v
        .checked_mul(s - b2)
        .and_then(|x| x.checked_sub(w.checked_mul(c2)?))
        .ok_or(Error::Overflow("compose"))?;
    let b3 = b2 + 2 * (a2 / e) * t;
    let m = 2 * a3.abs();
    let b3 = b3.rem_euclid(m);
    let num = b3 * b3 - delta;
    if num % (4 * a3) != 0 {
        return Err(inconsistent("c3 not integral"));
    }
    let c3 = num / (4 * a3);
    reduce(
        WideForm {
            a: a3,
            b: b3,
            c: c3,
        },
        disc,
    )
}

/// All reduced forms of the discriminant, sorted by `(a, b)`.
pub fn reduced_forms(disc: &Discriminant) -> Vec<QuadForm> {
    let s = disc.sqrt_floor;
    let delta = disc.value;
    let mut out = Vec::new();
    let first_b = if (s - delta) % 2 == 0 { s } else { s - 1 };
    let mut b = first_b;
    while b >= 1 {
        let n = (delta - b * b) / 4;
        // s - b + 1 <= 2A <= s + b
        let lo = (s - b + 2) / 2;
        let hi = (s + b) / 2;
        let mut a = lo.max(1);
        while a <= hi {
            if n % a == 0 {
                out.push(QuadForm { a, b, c: -n / a });
                out.push(QuadForm { a: -a, b, c: n / a });
            }
            a += 1;
        }
        b -= 2;
    }
    out.sort_unstable();
    out
}
