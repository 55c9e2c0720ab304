use super::ProductSpace;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BoxSearch {
    /// `Z_1, ..., Z_r` as sorted label lists.
    Found(Vec<Vec<u64>>),
    NotFound,
}

impl BoxSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, BoxSearch::Found(_))
    }
}

#[derive(Clone)]
struct Bits {
    words: Vec<u64>,
}

impl Bits {
    fn zeros(len: usize) -> Self {
        Bits {
            words: vec![0; len.div_ceil(64)],
        }
    }

    fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and(&self, other: &Bits) -> Bits {
        Bits {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| k * 64 + b)
        })
    }
}

/// Exhaustive search for `Z_1 x ... x Z_r` inside `Y` with `|Z_i| = b`.
///
/// `y` is indexed like [`ProductSpace::index`]. Subsets are tried in
/// lexicographic order of positions coordinate by coordinate, so the result
/// is the lexicographically first box. Fibers whose size cannot host the
/// remaining `b^(r-k)` points are pruned.
pub fn find_box(space: &ProductSpace, y: &[bool], b: usize) -> Result<BoxSearch> {
    if y.len() != space.len() {
        return Err(Error::Invalid(format!(
            "Y has {} entries, X has {}",
            y.len(),
            space.len()
        )));
    }
    let sizes = space.sizes();
    if sizes.iter().any(|&n| n < b) {
        return Ok(BoxSearch::NotFound);
    }
    let mut fiber = Bits::zeros(y.len());
    for (i, _) in y.iter().enumerate().filter(|(_, &v)| v) {
        fiber.set(i);
    }
    Ok(match level(&sizes, 0, &fiber, b) {
        Some(pos) => BoxSearch::Found(
            pos.iter()
                .enumerate()
                .map(|(i, zs)| zs.iter().map(|&z| space.labels(i)[z]).collect())
                .collect(),
        ),
        None => BoxSearch::NotFound,
    })
}

fn level(sizes: &[usize], k: usize, fiber: &Bits, b: usize) -> Option<Vec<Vec<usize>>> {
    let r = sizes.len();
    if k + 1 == r {
        let zs: Vec<usize> = fiber.ones().take(b).collect();
        return (zs.len() == b).then(|| vec![zs]);
    }
    let m: usize = sizes[k + 1..].iter().product();
    let need = (0..r - k - 1).fold(1usize, |acc, _| acc.saturating_mul(b));
    let slices: Vec<Bits> = (0..sizes[k])
        .map(|z| {
            let mut s = Bits::zeros(m);
            for j in 0..m {
                if fiber.get(z * m + j) {
                    s.set(j);
                }
            }
            s
        })
        .collect();
    let candidates: Vec<usize> = (0..sizes[k])
        .filter(|&z| slices[z].count() >= need)
        .collect();
    let mut chosen = Vec::with_capacity(b);
    let mut full = Bits::zeros(m);
    full.words.iter_mut().for_each(|w| *w = u64::MAX);
    choose(
        sizes,
        k,
        &slices,
        &candidates,
        0,
        &mut chosen,
        &full,
        b,
        need,
    )
}

#[allow(clippy::too_many_arguments)]
fn choose(
    sizes: &[usize],
    k: usize,
    slices: &[Bits],
    candidates: &[usize],
    start: usize,
    chosen: &mut Vec<usize>,
    acc: &Bits,
    b: usize,
    need: usize,
) -> Option<Vec<Vec<usize>>> {
    if chosen.len() == b {
        let mut rest = level(sizes, k + 1, acc, b)?;
        rest.insert(0, chosen.clone());
        return Some(rest);
    }
    for c in start..candidates.len() {
        if candidates.len() - c < b - chosen.len() {
            break;
        }
        let z = candidates[c];
        let next = acc.and(&slices[z]);
        if next.count() < need {
            continue;
        }
        chosen.push(z);
        if let Some(found) = choose(sizes, k, slices, candidates, c + 1, chosen, &next, b, need) {
            return Some(found);
        }
        chosen.pop();
    }
    None
}

/// The largest `b` allowed by the box lemma for `Y` of density `delta` in
/// an `r`-fold product with smallest coordinate of size `min_size`:
/// `floor((log min_size / (5 log(1/delta)))^(1/(r-1)))`.
///
/// `Ok(None)` when that is below 1, in which case the lemma says nothing.
pub fn find_box_bound(min_size: usize, delta: f64, r: usize) -> Result<Option<u64>> {
    if r < 2 {
        return Err(Error::Precondition("the box lemma needs r >= 2".into()));
    }
    let cap = (-(r as f64 + 1.0)).exp2();
    if !(delta > 0.0 && delta < cap) {
        return Err(Error::Precondition(format!(
            "need 0 < delta < 2^-(r+1) = {cap}, got {delta}"
        )));
    }
    let base = (min_size as f64).ln() / (5.0 * (1.0 / delta).ln());
    let b = base.powf(1.0 / (r as f64 - 1.0)).floor();
    Ok((b >= 1.0).then_some(b as u64))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn full_space_gives_first_labels() {
        let sp = ProductSpace::new(vec![vec![7, 3, 5], vec![10, 20], vec![30, 40, 50]]).unwrap();
        let y = vec![true; sp.len()];
        assert_eq!(
            find_box(&sp, &y, 2).unwrap(),
            BoxSearch::Found(vec![vec![3, 5], vec![10, 20], vec![30, 40]])
        );
    }

    #[test]
    fn empty_set_has_no_box() {
        let sp = ProductSpace::with_sizes(&[3, 3]).unwrap();
        assert_eq!(
            find_box(&sp, &vec![false; 9], 1).unwrap(),
            BoxSearch::NotFound
        );
    }

    #[test]
    fn diagonal_has_only_singletons() {
        let sp = ProductSpace::with_sizes(&[5, 5]).unwrap();
        let y: Vec<bool> = (0..25).map(|i| i / 5 == i % 5).collect();
        assert!(find_box(&sp, &y, 1).unwrap().is_found());
        assert_eq!(find_box(&sp, &y, 2).unwrap(), BoxSearch::NotFound);
    }

    #[test]
    fn bound_is_vacuous_at_desk_scale() {
        for r in 2..=3 {
            for delta in [0.01, 0.05, 0.1] {
                if delta < (-(r as f64 + 1.0)).exp2() {
                    assert_eq!(find_box_bound(64, delta, r).unwrap(), None);
                }
            }
        }
        assert_eq!(find_box_bound(1 << 20, 0.1, 2).unwrap(), Some(1));
        assert!(find_box_bound(64, 0.5, 2).is_err());
    }

    proptest! {
        #[test]
        fn planted_box_is_found_and_verified(
            sizes in prop::collection::vec(3usize..9, 2..4),
            noise in any::<u64>(),
            shift in 0usize..3,
        ) {
            let sp = ProductSpace::with_sizes(&sizes).unwrap();
            let b = 2;
            let mut y: Vec<bool> = (0..sp.len()).map(|i| (noise.rotate_left(i as u32 % 64) ^ i as u64) % 5 == 0).collect();
            for i in 0..sp.len() {
                let pos = sp.position(i);
                if pos.iter().zip(&sizes).all(|(&p, &n)| (p + shift) % n < b) {
                    y[i] = true;
                }
            }
            match find_box(&sp, &y, b).unwrap() {
                BoxSearch::Found(zs) => {
                    let pos: Vec<Vec<usize>> = zs
                        .iter()
                        .enumerate()
                        .map(|(i, z)| z.iter().map(|l| sp.labels(i).binary_search(l).unwrap()).collect())
                        .collect();
                    prop_assert!(pos.iter().all(|z| z.len() == b));
                    let mut stack = vec![Vec::new()];
                    for z in &pos {
                        stack = stack.into_iter().flat_map(|p: Vec<usize>| z.iter().map(move |&c| { let mut q = p.clone(); q.push(c); q })).collect();
                    }
                    for p in stack {
                        prop_assert!(y[sp.index(&p)]);
                    }
                }
                BoxSearch::NotFound => prop_assert!(false, "planted box missed"),
            }
        }
    }
}
