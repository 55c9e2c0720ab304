use super::prime::{factor, isqrt_u64};

const SEGMENT: u64 = 1 << 16;
const MAX_OMEGA: usize = 16;

/// Squarefree `d >= 2` all of whose prime divisors are 1 or 2 mod 4.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyDElement {
    d: u64,
    primes: Vec<u64>,
}

impl FamilyDElement {
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Prime divisors in ascending order.
    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    pub fn is_even(&self) -> bool {
        self.d % 2 == 0
    }

    /// Odd prime divisors, ascending.
    pub fn odd_primes(&self) -> &[u64] {
        if self.is_even() {
            &self.primes[1..]
        } else {
            &self.primes
        }
    }
}

/// Membership test by factorisation. `None` when `d` is not in the family.
pub fn family_d_element(d: u64) -> Option<FamilyDElement> {
    if d < 2 {
        return None;
    }
    let f = factor(d as u128);
    if !f.is_squarefree() {
        return None;
    }
    let primes: Vec<u64> = f.primes().map(|p| p as u64).collect();
    if primes.iter().any(|p| p % 4 == 3) {
        return None;
    }
    Some(FamilyDElement { d, primes })
}

fn small_primes(limit: u64) -> Vec<u64> {
    let n = limit as usize + 1;
    let mut composite = vec![false; n];
    let mut out = Vec::new();
    for i in 2..n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j < n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Streams every family element with `lo <= d < hi` in ascending order.
///
/// The range is processed in fixed segments; the output does not depend on
/// where the caller splits a larger range.
pub fn for_each_family_d_in(lo: u64, hi: u64, mut f: impl FnMut(FamilyDElement)) {
    let lo = lo.max(2);
    if hi <= lo {
        return;
    }
    let primes = small_primes(isqrt_u64(hi - 1));
    let len = SEGMENT.min(hi - lo) as usize;
    let mut rest = vec![0u64; len];
    let mut bad = vec![false; len];
    let mut count = vec![0u8; len];
    let mut found = vec![[0u32; MAX_OMEGA]; len];

    let mut start = lo;
    while start < hi {
        let end = (start + SEGMENT).min(hi);
        let n = (end - start) as usize;
        for i in 0..n {
            rest[i] = start + i as u64;
            bad[i] = false;
            count[i] = 0;
        }
        for &p in &primes {
            if p * p >= end {
                // p may still divide entries, but only as the final cofactor.
                break;
            }
            let first = start.div_ceil(p) * p;
            let mut m = first;
            while m < end {
                let i = (m - start) as usize;
                if !bad[i] {
                    if p % 4 == 3 {
                        bad[i] = true;
                    } else {
                        rest[i] /= p;
                        if rest[i] % p == 0 {
                            bad[i] = true;
                        } else {
                            found[i][count[i] as usize] = p as u32;
                            count[i] += 1;
                        }
                    }
                }
                m += p;
            }
        }
        for i in 0..n {
            if bad[i] {
                continue;
            }
            let r = rest[i];
            let k = count[i] as usize;
            let mut ps: Vec<u64> = found[i][..k].iter().map(|&p| p as u64).collect();
            if r > 1 {
                // r is 1 or a prime exceeding every sieving prime dividing d.
                if r % 4 == 3 || ps.last() == Some(&r) {
                    continue;
                }
                ps.push(r);
            }
            f(FamilyDElement {
                d: start + i as u64,
                primes: ps,
            });
        }
        start = end;
    }
}

/// Streams every family element with `2 <= d < limit`.
pub fn for_each_family_d(limit: u64, f: impl FnMut(FamilyDElement)) {
    for_each_family_d_in(2, limit, f);
}

/// All family elements with `2 <= d < limit`, ascending.
pub fn sieve_family_d(limit: u64) -> Vec<FamilyDElement> {
    let mut out = Vec::new();
    for_each_family_d(limit, |e| out.push(e));
    out
}
