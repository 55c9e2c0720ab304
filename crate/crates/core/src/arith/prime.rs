use std::fmt;

/// Bases for the deterministic strong-pseudoprime test; exhaustive for
/// inputs below 3.3 * 10^24.
const MR_BASES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

const TRIAL_LIMIT: u64 = 1_000_000;

/// Canonical factorisation of a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Factorization {
    n: u128,
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn n(&self) -> u128 {
        self.n
    }

    /// Prime powers in ascending order of the prime.
    pub fn factors(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn omega(&self) -> usize {
        self.factors.len()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (p, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            if *e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    if m <= u64::MAX as u128 {
        return (a % m) * (b % m) % m;
    }
    let (mut a, mut b) = (a % m, b % m);
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    let (s, overflow) = a.overflowing_add(b);
    if overflow || s >= m {
        s.wrapping_sub(m)
    } else {
        s
    }
}

pub fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u128;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

pub fn isqrt_u64(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub fn isqrt_u128(n: u128) -> u128 {
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).map_or(true, |sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

fn gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Brent's variant of Pollard rho. `n` must be odd and composite.
fn rho(n: u128) -> u128 {
    let mut c = 1u128;
    loop {
        let f = |x: u128| add_mod(mul_mod(x, x, n), c, n);
        let (mut x, mut y, mut g) = (2u128, 2u128, 1u128);
        let mut r = 1u64;
        let mut q = 1u128;
        let mut ys = 2u128;
        const BATCH: u64 = 64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0u64;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..BATCH.min(r - k) {
                    y = f(y);
                    q = mul_mod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += BATCH;
            }
            r *= 2;
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

fn split_into(n: u128, out: &mut Vec<u128>) {
    if n == 1 {
        return;
    }
    if is_prime(n) {
        out.push(n);
        return;
    }
    let f = rho(n);
    split_into(f, out);
    split_into(n / f, out);
}

/// Factorisation by trial division to 10^6, then Pollard rho on the cofactor.
///
/// Every reported prime is certified by the deterministic strong-pseudoprime
/// test, which is exhaustive below 3.3 * 10^24.
pub fn factor(n: u128) -> Factorization {
    assert!(n >= 1, "factor: n must be positive");
    let mut factors: Vec<(u128, u32)> = Vec::new();
    let mut m = n;
    let mut push = |p: u128, m: &mut u128| {
        let mut e = 0;
        while *m % p == 0 {
            *m /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    push(2, &mut m);
    let mut p = 3u128;
    while p <= TRIAL_LIMIT as u128 && p * p <= m {
        push(p, &mut m);
        p += 2;
    }
    if m > 1 {
        let mut rest = Vec::new();
        split_into(m, &mut rest);
        rest.sort_unstable();
        let mut i = 0;
        while i < rest.len() {
            let mut j = i;
            while j < rest.len() && rest[j] == rest[i] {
                j += 1;
            }
            factors.push((rest[i], (j - i) as u32));
            i = j;
        }
    }
    factors.sort_unstable();
    Factorization { n, factors }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorisations() {
        assert!(factor(1).factors().is_empty());
        assert_eq!(factor(61).factors(), &[(61, 1)]);
        assert_eq!(factor(340).factors(), &[(2, 2), (5, 1), (17, 1)]);
    }

    #[test]
    fn rho_path_handles_large_semiprimes() {
        let p = 1_000_000_007u128;
        let q = 998_244_353u128;
        let f = factor(p * q);
        assert_eq!(f.factors(), &[(q, 1), (p, 1)]);
        let big = 18_446_744_073_709_551_557u128; // largest prime below 2^64
        let f = factor(big * 1_000_003);
        assert_eq!(f.factors(), &[(1_000_003, 1), (big, 1)]);
        let f = factor(1_000_003u128.pow(2) * 1_000_033);
        assert_eq!(f.factors(), &[(1_000_003, 2), (1_000_033, 1)]);
    }

    #[test]
    fn primality_against_trial_division() {
        for n in 0u128..20_000 {
            let naive = n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0);
            assert_eq!(is_prime(n), naive, "n = {n}");
        }
        // Strong pseudoprime to bases 2..37 but caught by 41.
        assert!(!is_prime(3_825_123_056_546_413_051));
        assert!(is_prime((1u128 << 89) - 1));
    }

    #[test]
    fn isqrt_edges() {
        for n in [0u64, 1, 2, 3, 4, 15, 16, 17, u64::MAX] {
            let r = isqrt_u64(n);
            assert!(r as u128 * r as u128 <= n as u128);
            assert!((r as u128 + 1) * (r as u128 + 1) > n as u128);
        }
    }
}

/// A square root of `a` modulo the prime `p` (Tonelli-Shanks), if one exists.
pub fn sqrt_mod_prime(a: i128, p: u128) -> Option<u128> {
    let a = a.rem_euclid(p as i128) as u128;
    if p == 2 || a == 0 {
        return Some(a % p);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    let s = (p - 1).trailing_zeros();
    let q = (p - 1) >> s;
    if s == 1 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut z = 2u128;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, q.div_ceil(2), p);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mul_mod(tt, tt, p);
            i += 1;
        }
        let b = pow_mod(c, 1u128 << (m - i - 1), p);
        m = i;
        c = mul_mod(b, b, p);
        t = mul_mod(t, c, p);
        r = mul_mod(r, b, p);
    }
    Some(r)
}
