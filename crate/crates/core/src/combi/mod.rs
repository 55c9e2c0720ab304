//! Product spaces, cubes and the combinatorics built on them: the alternating
//! sum operator and its image, additive systems, box finding, and the
//! permutation second-moment inequality.
//!
//! Coordinate labels are opaque `u64`s. Points are addressed by per-coordinate
//! positions into the sorted label lists, and whole spaces by a mixed-radix
//! index with coordinate 0 most significant, so index order is lexicographic.

mod additive;
mod boxes;
mod moment;

pub use additive::{
    acceptance_density_check, validate_additive_system, AdditiveSystem, DensityReport, Validation,
    Violation,
};
pub use boxes::{find_box, find_box_bound, BoxSearch};
pub use moment::{permutation_second_moment, MomentParams, SecondMomentReport, SymbolData};

use crate::gf2::{F2Matrix, F2Vec};
use crate::{Error, Result};

/// Largest cube materialised by [`add_dim`] and the additive-system code.
pub const MAX_CUBE_POINTS: usize = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductSpace {
    sets: Vec<Vec<u64>>,
}

impl ProductSpace {
    /// Labels are sorted per coordinate; coordinate sets must be nonempty and
    /// pairwise disjoint.
    pub fn new(mut sets: Vec<Vec<u64>>) -> Result<Self> {
        if sets.is_empty() {
            return Err(Error::Invalid(
                "product space needs at least one coordinate".into(),
            ));
        }
        let mut all = Vec::new();
        for (i, s) in sets.iter_mut().enumerate() {
            if s.is_empty() {
                return Err(Error::Invalid(format!("coordinate set {i} is empty")));
            }
            s.sort_unstable();
            all.extend_from_slice(s);
        }
        all.sort_unstable();
        if let Some(w) = all.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("label {} appears twice", w[0])));
        }
        if sets.len() > 16 {
            return Err(Error::SizeBound(format!(
                "{} coordinates (max 16)",
                sets.len()
            )));
        }
        Ok(ProductSpace { sets })
    }

    /// Coordinate `i` gets the consecutive labels following coordinate `i - 1`.
    pub fn with_sizes(sizes: &[usize]) -> Result<Self> {
        let mut next = 0u64;
        let sets = sizes
            .iter()
            .map(|&n| {
                let s: Vec<u64> = (next..next + n as u64).collect();
                next += n as u64;
                s
            })
            .collect();
        Self::new(sets)
    }

    pub fn r(&self) -> usize {
        self.sets.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, i: usize) -> &[u64] {
        &self.sets[i]
    }

    /// `|X|`, saturating.
    pub fn len(&self) -> usize {
        self.sets
            .iter()
            .fold(1usize, |acc, s| acc.saturating_mul(s.len()))
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn index(&self, pos: &[usize]) -> usize {
        pos.iter()
            .zip(&self.sets)
            .fold(0, |acc, (&p, s)| acc * s.len() + p)
    }

    pub fn position(&self, mut idx: usize) -> Vec<usize> {
        let mut pos = vec![0; self.r()];
        for i in (0..self.r()).rev() {
            let n = self.sets[i].len();
            pos[i] = idx % n;
            idx /= n;
        }
        pos
    }

    pub fn cube(&self, s: u32) -> Result<Cube> {
        Cube::new(self.sizes(), s)
    }
}

pub(crate) fn is_subset(t: u32, s: u32) -> bool {
    t & !s == 0
}

/// A point of `Cube(X, S)`.
///
/// `coords[i]` is a pair of positions for `i` in `S`; for other coordinates
/// both entries hold the single position.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CubePoint {
    pub s: u32,
    pub coords: Vec<(usize, usize)>,
}

impl CubePoint {
    pub fn is_degenerate(&self) -> bool {
        self.coords
            .iter()
            .enumerate()
            .any(|(i, &(u, v))| self.s >> i & 1 == 1 && u == v)
    }

    /// `x(emptyset)` as positions in `X`, with multiplicity: the `2^|S|`
    /// corners obtained by picking one entry of every doubled pair.
    pub fn corners(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::with_capacity(self.coords.len())];
        for (i, &(u, v)) in self.coords.iter().enumerate() {
            if self.s >> i & 1 == 1 {
                let mut next = Vec::with_capacity(out.len() * 2);
                for c in out {
                    let mut a = c.clone();
                    a.push(u);
                    next.push(a);
                    let mut b = c;
                    b.push(v);
                    next.push(b);
                }
                out = next;
            } else {
                for c in &mut out {
                    c.push(u);
                }
            }
        }
        out
    }
}

/// `Cube(X, S) = prod_{i in S} X_i^2 x prod_{i not in S} X_i`, indexed
/// mixed-radix with base `|X_i|^2` on doubled coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cube {
    sizes: Vec<usize>,
    s: u32,
    len: usize,
}

impl Cube {
    pub fn new(sizes: Vec<usize>, s: u32) -> Result<Self> {
        if s >> sizes.len() != 0 {
            return Err(Error::Invalid(format!(
                "S = {s:#b} is not a subset of [{}]",
                sizes.len()
            )));
        }
        let mut len = 1usize;
        for (i, &n) in sizes.iter().enumerate() {
            let radix = if s >> i & 1 == 1 {
                n.checked_mul(n)
            } else {
                Some(n)
            };
            len = radix
                .and_then(|r| len.checked_mul(r))
                .ok_or_else(|| Error::SizeBound("cube size overflows usize".into()))?;
        }
        Ok(Cube { sizes, s, len })
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn point(&self, mut idx: usize) -> CubePoint {
        let r = self.sizes.len();
        let mut coords = vec![(0, 0); r];
        for i in (0..r).rev() {
            let n = self.sizes[i];
            if self.s >> i & 1 == 1 {
                let d = idx % (n * n);
                idx /= n * n;
                coords[i] = (d / n, d % n);
            } else {
                let d = idx % n;
                idx /= n;
                coords[i] = (d, d);
            }
        }
        CubePoint { s: self.s, coords }
    }

    pub fn index(&self, p: &CubePoint) -> usize {
        debug_assert_eq!(p.s, self.s);
        let mut idx = 0;
        for (i, (&(u, v), &n)) in p.coords.iter().zip(&self.sizes).enumerate() {
            if self.s >> i & 1 == 1 {
                idx = idx * n * n + u * n + v;
            } else {
                idx = idx * n + u;
            }
        }
        idx
    }

    pub fn points(&self) -> impl Iterator<Item = CubePoint> + '_ {
        (0..self.len).map(|i| self.point(i))
    }

    fn flat(&self, pos: &[usize]) -> usize {
        pos.iter()
            .zip(&self.sizes)
            .fold(0, |acc, (&p, &n)| acc * n + p)
    }
}

/// `x(T)`: the points of `Cube(X, T)` whose `S - T` coordinates are taken
/// from the pairs of `x` and which agree with `x` elsewhere. Sorted, without
/// repetition.
pub fn subcube(x: &CubePoint, t: u32) -> Result<Vec<CubePoint>> {
    if !is_subset(t, x.s) {
        return Err(Error::Invalid(format!(
            "T = {t:#b} is not a subset of S = {:#b}",
            x.s
        )));
    }
    let mut out = vec![CubePoint {
        s: t,
        coords: Vec::with_capacity(x.coords.len()),
    }];
    for (i, &(u, v)) in x.coords.iter().enumerate() {
        let drop = x.s >> i & 1 == 1 && t >> i & 1 == 0;
        if drop {
            let choices: &[usize] = if u == v { &[u] } else { &[u, v] };
            let mut next = Vec::with_capacity(out.len() * choices.len());
            for p in &out {
                for &c in choices {
                    let mut q = p.clone();
                    q.coords.push((c, c));
                    next.push(q);
                }
            }
            out = next;
        } else {
            for p in &mut out {
                p.coords.push((u, v));
            }
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// `Sigma F` on `Cube(X, S)` for `F` defined on `Y = {x : f[x].is_some()}`,
/// with `f` indexed like [`ProductSpace::index`].
///
/// The value is the sum over `x(emptyset)` for nondegenerate points whose
/// corners all lie in `Y`, and 0 otherwise.
pub fn sigma(cube: &Cube, f: &[Option<bool>]) -> Vec<bool> {
    let x_len: usize = cube.sizes.iter().product();
    assert_eq!(f.len(), x_len, "F must be given on all of X");
    cube.points()
        .map(|p| {
            if p.is_degenerate() {
                return false;
            }
            let mut acc = false;
            for c in p.corners() {
                match f[cube.flat(&c)] {
                    Some(b) => acc ^= b,
                    None => return false,
                }
            }
            acc
        })
        .collect()
}

/// `dim Add(X, S)` by elimination next to the closed formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AddDim {
    pub rank: usize,
    pub formula: usize,
}

impl AddDim {
    pub fn agrees(&self) -> bool {
        self.rank == self.formula
    }
}

pub fn add_dim_formula(sizes: &[usize], s: u32) -> usize {
    sizes
        .iter()
        .enumerate()
        .map(|(i, &n)| if s >> i & 1 == 1 { n - 1 } else { n })
        .product()
}

/// Rank of `Sigma` computed from the images of the point masses `delta_x`.
pub fn add_dim(space: &ProductSpace, s: u32) -> Result<AddDim> {
    let cube = space.cube(s)?;
    let x_len = space.len();
    if cube.len() > MAX_CUBE_POINTS || x_len.saturating_mul(cube.len()) > 1 << 28 {
        return Err(Error::SizeBound(format!(
            "|Cube| = {}, |X| = {x_len}",
            cube.len()
        )));
    }
    let sizes = space.sizes();
    let mut rows = Vec::with_capacity(x_len);
    for xi in 0..x_len {
        let x = space.position(xi);
        let mut row = F2Vec::zeros(cube.len());
        // Nondegenerate points having x as a corner: every doubled coordinate
        // places x_i first or second and pairs it with some other element.
        let mut partial: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        for (i, &n) in sizes.iter().enumerate() {
            let mut next = Vec::new();
            for p in &partial {
                if s >> i & 1 == 1 {
                    for other in (0..n).filter(|&o| o != x[i]) {
                        for pair in [(x[i], other), (other, x[i])] {
                            let mut q = p.clone();
                            q.push(pair);
                            next.push(q);
                        }
                    }
                } else {
                    let mut q = p.clone();
                    q.push((x[i], x[i]));
                    next.push(q);
                }
            }
            partial = next;
        }
        for coords in partial {
            row.set(cube.index(&CubePoint { s, coords }), true);
        }
        rows.push(row);
    }
    let rank = F2Matrix::from_rows(rows, cube.len()).rank();
    Ok(AddDim {
        rank,
        formula: add_dim_formula(&sizes, s),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cube_roundtrip_and_size() {
        let sp = ProductSpace::with_sizes(&[3, 2, 4]).unwrap();
        let c = sp.cube(0b101).unwrap();
        assert_eq!(c.len(), 9 * 2 * 16);
        for i in 0..c.len() {
            assert_eq!(c.index(&c.point(i)), i);
        }
    }

    #[test]
    fn subcube_counts() {
        let c = Cube::new(vec![3, 3], 0b11).unwrap();
        let x = CubePoint {
            s: 0b11,
            coords: vec![(0, 1), (2, 0)],
        };
        assert_eq!(subcube(&x, 0b11).unwrap(), vec![x.clone()]);
        assert_eq!(subcube(&x, 0).unwrap().len(), 4);
        assert_eq!(subcube(&x, 0b01).unwrap().len(), 2);
        let deg = CubePoint {
            s: 0b11,
            coords: vec![(1, 1), (2, 0)],
        };
        assert_eq!(subcube(&deg, 0).unwrap().len(), 2);
        assert!(subcube(
            &CubePoint {
                s: 0b01,
                coords: vec![(0, 1), (1, 1)]
            },
            0b10
        )
        .is_err());
        assert_eq!(c.point(c.index(&x)), x);
    }

    #[test]
    fn sigma_two_point_sum() {
        let c = Cube::new(vec![2], 1).unwrap();
        let f = [Some(true), Some(false)];
        let sf = sigma(&c, &f);
        let p = c.index(&CubePoint {
            s: 1,
            coords: vec![(0, 1)],
        });
        assert!(sf[p]);
        assert!(
            !sf[c.index(&CubePoint {
                s: 1,
                coords: vec![(0, 0)]
            })]
        );
    }

    #[test]
    fn sigma_restricted_to_y() {
        let c = Cube::new(vec![2], 1).unwrap();
        let sf = sigma(&c, &[Some(true), None]);
        assert!(sf.iter().all(|&b| !b));
    }

    #[test]
    fn add_dim_examples() {
        let d = add_dim(&ProductSpace::with_sizes(&[2, 2]).unwrap(), 0b11).unwrap();
        assert_eq!((d.rank, d.formula), (1, 1));
        let d = add_dim(&ProductSpace::with_sizes(&[3, 2]).unwrap(), 0b01).unwrap();
        assert_eq!((d.rank, d.formula), (4, 4));
        let d = add_dim(&ProductSpace::with_sizes(&[3, 2, 2]).unwrap(), 0).unwrap();
        assert_eq!((d.rank, d.formula), (12, 12));
    }

    #[test]
    fn rejects_overlapping_labels() {
        assert!(ProductSpace::new(vec![vec![1, 2], vec![2, 3]]).is_err());
        assert!(ProductSpace::new(vec![vec![1], vec![]]).is_err());
    }

    proptest! {
        #[test]
        fn sigma_is_linear(sizes in prop::collection::vec(1usize..4, 1..4), s in 0u32..8, seed in any::<u64>()) {
            let s = s & ((1 << sizes.len()) - 1);
            let c = Cube::new(sizes.clone(), s).unwrap();
            let n: usize = sizes.iter().product();
            let bit = |k: u64, i: usize| (seed.rotate_left((i as u32 * 7 + k as u32) % 64) ^ (i as u64 * k)) & 1 == 1;
            let f: Vec<Option<bool>> = (0..n).map(|i| Some(bit(1, i))).collect();
            let g: Vec<Option<bool>> = (0..n).map(|i| Some(bit(3, i))).collect();
            let fg: Vec<Option<bool>> = f.iter().zip(&g).map(|(a, b)| Some(a.unwrap() ^ b.unwrap())).collect();
            let (sf, sg, sfg) = (sigma(&c, &f), sigma(&c, &g), sigma(&c, &fg));
            for i in 0..c.len() {
                prop_assert_eq!(sf[i] ^ sg[i], sfg[i]);
            }
        }

        #[test]
        fn subcube_size_for_nondegenerate(sizes in prop::collection::vec(2usize..5, 1..4), s in 0u32..8, t in 0u32..8, k in any::<usize>()) {
            let s = s & ((1 << sizes.len()) - 1);
            let t = t & s;
            let c = Cube::new(sizes.clone(), s).unwrap();
            let p = c.point(k % c.len());
            let sub = subcube(&p, t).unwrap();
            if !p.is_degenerate() {
                prop_assert_eq!(sub.len(), 1 << (s & !t).count_ones());
            }
            prop_assert!(sub.len() <= 1 << (s & !t).count_ones());
        }
    }
}
