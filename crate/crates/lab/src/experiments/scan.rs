use negpell_core::arith::for_each_family_d_in;
use negpell_core::pell::period_is_odd;
use negpell_core::redei::rk4;
use rayon::prelude::*;

use crate::{Result, ScanCache, ScanRecord};

const FIRST_CHECKPOINT: u64 = 10_000;
const MAX_CHUNK: u64 = 1_000_000;

/// Chunk boundaries for a scan of `2 <= d < limit`: `[2, 10^4)`, then each
/// decade in pieces of at most `10^6`, cut at `limit`. Boundaries do not
/// depend on `limit` except for the final cut, so caches from shorter scans
/// are reused.
pub fn scan_chunks(limit: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut lo = 2;
    let mut decade = FIRST_CHECKPOINT;
    while lo < limit {
        let step = if lo < FIRST_CHECKPOINT {
            FIRST_CHECKPOINT - lo
        } else {
            (decade / 10).min(MAX_CHUNK)
        };
        let hi = (lo + step).min(limit);
        out.push((lo, hi));
        lo = hi;
        if lo >= decade {
            decade = decade.saturating_mul(10);
        }
    }
    out
}

/// Powers of ten from `10^4` below `limit`, then `limit` itself.
pub fn checkpoints(limit: u64) -> Vec<u64> {
    let mut out: Vec<u64> = std::iter::successors(Some(FIRST_CHECKPOINT), |x| x.checked_mul(10))
        .take_while(|&x| x < limit)
        .collect();
    out.push(limit);
    out
}

pub fn compute_record(d: &negpell_core::arith::FamilyDElement) -> Result<ScanRecord> {
    Ok(ScanRecord {
        d: d.d(),
        pellian: period_is_odd(d.d())?,
        rk4: rk4(d) as u8,
    })
}

/// Feeds the records of every chunk below `limit` to `visit`, in order,
/// reading from and extending `cache`. Returns how many chunks came from
/// the cache.
pub fn scan(
    limit: u64,
    cache: &mut ScanCache,
    mut visit: impl FnMut(&[ScanRecord]),
) -> Result<usize> {
    let mut hits = 0;
    for (lo, hi) in scan_chunks(limit) {
        if let Some(records) = cache.get(lo, hi)? {
            hits += 1;
            visit(&records);
            continue;
        }
        let mut elems = Vec::new();
        for_each_family_d_in(lo, hi, |e| elems.push(e));
        let records = elems
            .par_iter()
            .map(compute_record)
            .collect::<Result<Vec<_>>>()?;
        cache.insert(lo, hi, &records)?;
        visit(&records);
    }
    Ok(hits)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chunks_tile_the_range() {
        for limit in [3u64, 100, 10_000, 12_345, 1_000_000, 3_500_000] {
            let c = scan_chunks(limit);
            assert_eq!(c[0].0, 2);
            assert_eq!(c.last().unwrap().1, limit);
            assert!(c.windows(2).all(|w| w[0].1 == w[1].0));
            assert!(c.iter().all(|&(lo, hi)| hi - lo <= MAX_CHUNK));
            for x in checkpoints(limit) {
                assert!(
                    x == limit || c.iter().any(|&(_, hi)| hi == x),
                    "{x} not a boundary for {limit}"
                );
            }
        }
        let short = scan_chunks(2_000_000);
        let long = scan_chunks(5_000_000);
        assert_eq!(&long[..short.len()], &short[..]);
        assert_eq!(checkpoints(100), vec![100]);
        assert_eq!(checkpoints(100_000), vec![10_000, 100_000]);
    }
}
