use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use super::{is_subset, Cube, CubePoint, ProductSpace, MAX_CUBE_POINTS};
use crate::arith::{is_prime, legendre};
use crate::{Error, Result, Scalar};

/// An additive system `(C_T, C_T^acc, F_T, A_T)` for `T` a subset of `S`,
/// materialised over every cube.
///
/// `A_T` is `GF(2)^dims[T]` with elements packed into a `u64`. All tables
/// are indexed by the bitmask `T`; entries for `T` not contained in `S` are
/// empty.
#[derive(Clone, Debug)]
pub struct AdditiveSystem {
    space: ProductSpace,
    s: u32,
    dims: Vec<u32>,
    cubes: Vec<Option<Cube>>,
    values: Vec<Vec<u64>>,
    c: Vec<Vec<bool>>,
    acc: Vec<Vec<bool>>,
}

fn subsets_by_size(s: u32) -> Vec<u32> {
    let mut ts: Vec<u32> = (0..=s).filter(|&t| is_subset(t, s)).collect();
    ts.sort_by_key(|t| (t.count_ones(), *t));
    ts
}

/// Flat indices in `X` of the corners of `p`, with multiplicity.
fn corner_indices(sizes: &[usize], p: &CubePoint, out: &mut Vec<usize>) {
    out.clear();
    out.push(0);
    for (i, (&(u, v), &n)) in p.coords.iter().zip(sizes).enumerate() {
        if p.s >> i & 1 == 1 {
            let len = out.len();
            for k in 0..len {
                let base = out[k] * n;
                out[k] = base + u;
                out.push(base + v);
            }
        } else {
            for c in out.iter_mut() {
                *c = *c * n + u;
            }
        }
    }
}

impl AdditiveSystem {
    /// Builds the system from `C_emptyset`, the spaces `A_T` and values
    /// `F_T`, deriving `C_T^acc` and `C_T` from the first two axioms.
    pub fn derive(
        space: ProductSpace,
        s: u32,
        dims: Vec<u32>,
        c_empty: Vec<bool>,
        values: Vec<Vec<u64>>,
    ) -> Result<Self> {
        let mut sys = Self::shell(space, s, dims, values)?;
        if c_empty.len() != sys.space.len() {
            return Err(Error::Invalid(
                "C_emptyset must be given on all of X".into(),
            ));
        }
        sys.c[0] = c_empty;
        for t in subsets_by_size(s) {
            if t != 0 {
                sys.c[t as usize] = sys.derived_c(t);
            }
            let (c, f) = (&sys.c[t as usize], &sys.values[t as usize]);
            sys.acc[t as usize] = c.iter().zip(f).map(|(&c, &f)| c && f == 0).collect();
        }
        Ok(sys)
    }

    /// Stores all four families as given, without deriving anything. Used to
    /// probe [`validate_additive_system`].
    pub fn from_raw(
        space: ProductSpace,
        s: u32,
        dims: Vec<u32>,
        values: Vec<Vec<u64>>,
        c: Vec<Vec<bool>>,
        acc: Vec<Vec<bool>>,
    ) -> Result<Self> {
        let mut sys = Self::shell(space, s, dims, values)?;
        for t in subsets_by_size(s) {
            let n = sys.cube(t).len();
            let (ct, at) = (&c[t as usize], &acc[t as usize]);
            if ct.len() != n || at.len() != n {
                return Err(Error::Invalid(format!(
                    "C_T tables for T = {t:#b} have the wrong length"
                )));
            }
        }
        sys.c = c;
        sys.acc = acc;
        Ok(sys)
    }

    fn shell(space: ProductSpace, s: u32, dims: Vec<u32>, values: Vec<Vec<u64>>) -> Result<Self> {
        let r = space.r();
        if s >> r != 0 {
            return Err(Error::Invalid(format!(
                "S = {s:#b} is not a subset of [{r}]"
            )));
        }
        let full = 1usize << r;
        if dims.len() != full || values.len() != full {
            return Err(Error::Invalid(format!(
                "dims and values must be indexed by all {full} subsets"
            )));
        }
        let mut cubes = vec![None; full];
        for t in subsets_by_size(s) {
            let cube = space.cube(t)?;
            if cube.len() > MAX_CUBE_POINTS {
                return Err(Error::SizeBound(format!(
                    "|Cube(X, {t:#b})| = {}",
                    cube.len()
                )));
            }
            if values[t as usize].len() != cube.len() {
                return Err(Error::Invalid(format!(
                    "F_T for T = {t:#b} has the wrong length"
                )));
            }
            if dims[t as usize] > 64 {
                return Err(Error::SizeBound("dim A_T > 64".into()));
            }
            cubes[t as usize] = Some(cube);
        }
        Ok(AdditiveSystem {
            space,
            s,
            dims,
            cubes,
            values,
            c: vec![Vec::new(); full],
            acc: vec![Vec::new(); full],
        })
    }

    /// `F_T = Sigma G_T` for potentials `G_T: X -> A_T`, summed with
    /// multiplicity so that degenerate points get 0. Such `F_T` satisfy the
    /// three-point law on all of `Cube(X, T)`.
    pub fn from_potentials(
        space: ProductSpace,
        s: u32,
        dims: Vec<u32>,
        c_empty: Vec<bool>,
        mut g: impl FnMut(u32, usize) -> u64,
    ) -> Result<Self> {
        let r = space.r();
        let sizes = space.sizes();
        let mut values = vec![Vec::new(); 1 << r];
        let mut buf = Vec::new();
        for t in subsets_by_size(s) {
            let cube = space.cube(t)?;
            if cube.len() > MAX_CUBE_POINTS {
                return Err(Error::SizeBound(format!(
                    "|Cube(X, {t:#b})| = {}",
                    cube.len()
                )));
            }
            let pot: Vec<u64> = (0..space.len()).map(|x| g(t, x)).collect();
            values[t as usize] = cube
                .points()
                .map(|p| {
                    corner_indices(&sizes, &p, &mut buf);
                    buf.iter().fold(0, |acc, &x| acc ^ pot[x])
                })
                .collect();
        }
        Self::derive(space, s, dims, c_empty, values)
    }

    /// `F_T = 0` and `C_emptyset = X`: everything is accepted.
    pub fn trivial(space: ProductSpace, s: u32) -> Result<Self> {
        let n = space.len();
        let full = 1 << space.r();
        Self::from_potentials(space, s, vec![0; full], vec![true; n], |_, _| 0)
    }

    /// Random system with `dim A_T <= max_dim`, `C_emptyset` of expected
    /// density `density` and uniformly random potentials.
    pub fn random<R: Rng + ?Sized>(
        rng: &mut R,
        space: ProductSpace,
        s: u32,
        max_dim: u32,
        density: f64,
    ) -> Result<Self> {
        if max_dim > 63 {
            return Err(Error::SizeBound("max_dim > 63".into()));
        }
        let full = 1 << space.r();
        let dims: Vec<u32> = (0..full).map(|_| rng.gen_range(0..=max_dim)).collect();
        let c_empty: Vec<bool> = (0..space.len())
            .map(|_| rng.gen_bool(density.clamp(0.0, 1.0)))
            .collect();
        let masks: Vec<u64> = dims.iter().map(|&d| (1u64 << d) - 1).collect();
        Self::from_potentials(space, s, dims, c_empty, |t, _| {
            rng.gen::<u64>() & masks[t as usize]
        })
    }

    /// Legendre system on a space of odd primes: `F_T` is the product of the
    /// symbols `(x_i / x_j)` over the corners, where `(i, j)` is `(min T,
    /// max T)` for `|T| >= 2` and `(i, i + 1 mod r)` for `T = {i}`.
    /// `C_emptyset = X` and `F_emptyset = 0`.
    pub fn legendre(space: ProductSpace, s: u32) -> Result<Self> {
        let r = space.r();
        for i in 0..r {
            if let Some(&p) = space
                .labels(i)
                .iter()
                .find(|&&p| p == 2 || !is_prime(p as u128))
            {
                return Err(Error::Invalid(format!("label {p} is not an odd prime")));
            }
        }
        let full = 1usize << r;
        let pair = |t: u32| -> Option<(usize, usize)> {
            match t.count_ones() {
                0 => None,
                1 if r == 1 => None,
                1 => {
                    let i = t.trailing_zeros() as usize;
                    Some((i, (i + 1) % r))
                }
                _ => Some((t.trailing_zeros() as usize, 31 - t.leading_zeros() as usize)),
            }
        };
        let dims = (0..full as u32)
            .map(|t| u32::from(pair(t).is_some()))
            .collect();
        let n = space.len();
        let sp = space.clone();
        Self::from_potentials(space, s, dims, vec![true; n], move |t, x| match pair(t) {
            None => 0,
            Some((i, j)) => {
                let pos = sp.position(x);
                let (a, b) = (sp.labels(i)[pos[i]], sp.labels(j)[pos[j]]);
                let sym = legendre(a as i128, b as u128).expect("odd prime modulus");
                u64::from(sym == -1)
            }
        })
    }

    fn derived_c(&self, t: u32) -> Vec<bool> {
        let cube = self.cube(t);
        cube.points()
            .map(|p| {
                (0..self.space.r()).filter(|&i| t >> i & 1 == 1).all(|i| {
                    let lower = t & !(1 << i);
                    let lc = self.cube(lower);
                    let (u, v) = p.coords[i];
                    [u, v].iter().all(|&w| {
                        let mut q = CubePoint {
                            s: lower,
                            coords: p.coords.clone(),
                        };
                        q.coords[i] = (w, w);
                        self.acc[lower as usize][lc.index(&q)]
                    })
                })
            })
            .collect()
    }

    pub fn space(&self) -> &ProductSpace {
        &self.space
    }

    pub fn s(&self) -> u32 {
        self.s
    }

    pub fn dim(&self, t: u32) -> u32 {
        self.dims[t as usize]
    }

    /// `max_T |A_T|` as a power of two exponent.
    pub fn max_dim(&self) -> u32 {
        subsets_by_size(self.s)
            .into_iter()
            .map(|t| self.dims[t as usize])
            .max()
            .unwrap_or(0)
    }

    pub fn cube(&self, t: u32) -> &Cube {
        self.cubes[t as usize]
            .as_ref()
            .expect("T must be a subset of S")
    }

    pub fn value(&self, t: u32, idx: usize) -> u64 {
        self.values[t as usize][idx]
    }

    /// Overwrites one value of `F_T` without re-deriving anything.
    pub fn set_value(&mut self, t: u32, idx: usize, v: u64) {
        self.values[t as usize][idx] = v;
    }

    pub fn in_c(&self, t: u32, idx: usize) -> bool {
        self.c[t as usize][idx]
    }

    pub fn in_acc(&self, t: u32, idx: usize) -> bool {
        self.acc[t as usize][idx]
    }

    pub fn acc_count(&self, t: u32) -> usize {
        self.acc[t as usize].iter().filter(|&&b| b).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `F_T(x)` does not lie in `A_T`.
    ValueOutOfRange {
        t: u32,
        point: CubePoint,
        value: u64,
    },
    /// Three aligned points in `C_T` with `F_T(x1) + F_T(x2) != F_T(x3)`.
    Additivity {
        t: u32,
        coordinate: usize,
        points: [CubePoint; 3],
        values: [u64; 3],
    },
    /// Membership in `C_T^acc` disagrees with `C_T` and `F_T = 0`.
    Acceptance { t: u32, point: CubePoint },
    /// Membership in `C_T` disagrees with the faces in lower acceptance sets.
    Containment { t: u32, point: CubePoint },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ValueOutOfRange { t, point, value } => write!(
                f,
                "T={t:#b}: F_T({:?}) = {value:#b} outside A_T",
                point.coords
            ),
            Violation::Additivity {
                t,
                coordinate,
                points,
                values,
            } => write!(
                f,
                "T={t:#b}, i={coordinate}: F{:?} + F{:?} != F{:?} ({} + {} vs {})",
                points[0].coords,
                points[1].coords,
                points[2].coords,
                values[0],
                values[1],
                values[2]
            ),
            Violation::Acceptance { t, point } => {
                write!(f, "T={t:#b}: acceptance of {:?} inconsistent", point.coords)
            }
            Violation::Containment { t, point } => write!(
                f,
                "T={t:#b}: membership of {:?} in C_T inconsistent",
                point.coords
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub violation: Option<Violation>,
    pub checked_triples: u64,
}

impl Validation {
    pub fn is_valid(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the three axioms exhaustively, subsets `T` in order of size and
/// the three-point law before the membership axioms within each `T`.
pub fn validate_additive_system(sys: &AdditiveSystem) -> Validation {
    let mut checked = 0u64;
    let fail = |v, checked| Validation {
        violation: Some(v),
        checked_triples: checked,
    };
    for t in subsets_by_size(sys.s) {
        let ti = t as usize;
        let cube = sys.cube(t);
        let (c, f) = (&sys.c[ti], &sys.values[ti]);
        let dim = sys.dims[ti];
        for idx in 0..cube.len() {
            if c[idx] && dim < 64 && f[idx] >> dim != 0 {
                return fail(
                    Violation::ValueOutOfRange {
                        t,
                        point: cube.point(idx),
                        value: f[idx],
                    },
                    checked,
                );
            }
        }
        for i in (0..sys.space.r()).filter(|&i| t >> i & 1 == 1) {
            let n = cube.sizes()[i];
            for idx in (0..cube.len()).filter(|&k| c[k]) {
                let p1 = cube.point(idx);
                let (a, b) = p1.coords[i];
                for w in 0..n {
                    let mut p2 = p1.clone();
                    p2.coords[i] = (b, w);
                    let mut p3 = p1.clone();
                    p3.coords[i] = (a, w);
                    let (i2, i3) = (cube.index(&p2), cube.index(&p3));
                    if !(c[i2] && c[i3]) {
                        continue;
                    }
                    checked += 1;
                    if f[idx] ^ f[i2] != f[i3] {
                        let values = [f[idx], f[i2], f[i3]];
                        return fail(
                            Violation::Additivity {
                                t,
                                coordinate: i,
                                points: [p1, p2, p3],
                                values,
                            },
                            checked,
                        );
                    }
                }
            }
        }
        for idx in 0..cube.len() {
            if sys.acc[ti][idx] != (c[idx] && f[idx] == 0) {
                return fail(
                    Violation::Acceptance {
                        t,
                        point: cube.point(idx),
                    },
                    checked,
                );
            }
        }
        if t != 0 {
            let want = sys.derived_c(t);
            if let Some(idx) = (0..cube.len()).find(|&k| want[k] != c[k]) {
                return fail(
                    Violation::Containment {
                        t,
                        point: cube.point(idx),
                    },
                    checked,
                );
            }
        }
    }
    Validation {
        violation: None,
        checked_triples: checked,
    }
}

/// `|C_S^acc| / |Cube(X, S)|` against `delta^(2^|S|) a^(-3^|S|)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityReport<T> {
    pub lhs: T,
    pub rhs: T,
    /// Density of `C_emptyset^acc` in `X`.
    pub delta: T,
    /// `a = 2^max dim A_T`.
    pub a: u64,
    pub pass: bool,
}

impl<T: Scalar> DensityReport<T> {
    pub fn to_f64(&self) -> DensityReport<f64> {
        DensityReport {
            lhs: self.lhs.to_f64(),
            rhs: self.rhs.to_f64(),
            delta: self.delta.to_f64(),
            a: self.a,
            pass: self.pass,
        }
    }
}

/// The comparison is made exactly; `T` only fixes how the report is returned.
pub fn acceptance_density_check<T: Scalar>(sys: &AdditiveSystem) -> Result<DensityReport<T>> {
    let v = validate_additive_system(sys);
    if let Some(violation) = v.violation {
        return Err(Error::Precondition(format!(
            "not an additive system: {violation}"
        )));
    }
    let ratio = |num: usize, den: usize| BigRational::new(BigInt::from(num), BigInt::from(den));
    let delta = ratio(sys.acc_count(0), sys.space.len());
    let lhs = ratio(sys.acc_count(sys.s), sys.cube(sys.s).len());
    let k = sys.s.count_ones();
    let max_dim = sys.max_dim();
    let mut rhs = num_traits::pow(delta.clone(), 1usize << k);
    let shift = u64::from(max_dim) * 3u64.pow(k);
    if !rhs.is_zero() {
        let den = BigInt::one()
            << usize::try_from(shift).map_err(|_| Error::Overflow("acceptance bound"))?;
        rhs /= BigRational::from_integer(den);
    }
    let pass = lhs >= rhs;
    let conv = |q: &BigRational| T::from_ratio(q.numer(), q.denom());
    Ok(DensityReport {
        lhs: conv(&lhs),
        rhs: conv(&rhs),
        delta: conv(&delta),
        a: 1u64 << max_dim,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn trivial_system_is_fully_accepted() {
        let sys =
            AdditiveSystem::trivial(ProductSpace::with_sizes(&[3, 2, 2]).unwrap(), 0b111).unwrap();
        assert!(validate_additive_system(&sys).is_valid());
        let rep = acceptance_density_check::<Exact>(&sys).unwrap();
        assert!(rep.lhs.is_one() && rep.pass);
    }

    #[test]
    fn empty_acceptance_gives_vacuous_bound() {
        let sp = ProductSpace::with_sizes(&[2, 2]).unwrap();
        let n = sp.len();
        let sys = AdditiveSystem::derive(
            sp,
            0b11,
            vec![0; 4],
            vec![false; n],
            vec![vec![0; 4], vec![0; 8], vec![0; 8], vec![0; 16]],
        )
        .unwrap();
        let rep = acceptance_density_check::<Exact>(&sys).unwrap();
        assert!(rep.rhs.is_zero() && rep.pass);
    }

    #[test]
    fn legendre_system_is_valid() {
        let sp = ProductSpace::new(vec![vec![5, 13, 17], vec![29, 37, 41], vec![53, 61]]).unwrap();
        let sys = AdditiveSystem::legendre(sp, 0b111).unwrap();
        let v = validate_additive_system(&sys);
        assert!(v.is_valid(), "{:?}", v.violation);
        assert!(v.checked_triples > 0);
        assert!(acceptance_density_check::<f64>(&sys).unwrap().pass);
    }

    #[test]
    fn flipped_value_is_caught_by_additivity() {
        let sp = ProductSpace::with_sizes(&[3, 2]).unwrap();
        let mut sys =
            AdditiveSystem::from_potentials(sp, 0b01, vec![1; 4], vec![true; 6], |_, _| 0).unwrap();
        let cube = sys.cube(0b01).clone();
        let idx = cube.index(&CubePoint {
            s: 0b01,
            coords: vec![(0, 1), (0, 0)],
        });
        sys.set_value(0b01, idx, 1);
        match validate_additive_system(&sys).violation {
            Some(Violation::Additivity {
                t: 0b01,
                coordinate: 0,
                ..
            }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(acceptance_density_check::<f64>(&sys).is_err());
    }

    #[test]
    fn tampered_membership_is_reported() {
        let sp = ProductSpace::with_sizes(&[2, 2]).unwrap();
        let sys = AdditiveSystem::trivial(sp.clone(), 0b01).unwrap();
        let mut c: Vec<Vec<bool>> = (0..4)
            .map(|t| {
                if is_subset(t, 1) {
                    sys.c[t as usize].clone()
                } else {
                    Vec::new()
                }
            })
            .collect();
        c[1][3] = false;
        let acc = c.clone();
        let values = (0..4).map(|t| sys.values[t].clone()).collect();
        let bad = AdditiveSystem::from_raw(sp, 0b01, vec![0; 4], values, c, acc).unwrap();
        assert!(matches!(
            validate_additive_system(&bad).violation,
            Some(Violation::Containment { t: 1, .. })
        ));
    }

    #[test]
    fn random_systems_are_valid_and_satisfy_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = rng.gen_range(1..=3);
            let sizes: Vec<usize> = (0..r).map(|_| rng.gen_range(1..=4)).collect();
            let s = rng.gen_range(0..(1u32 << r));
            let density = rng.gen_range(0.3..=1.0);
            let sys = AdditiveSystem::random(
                &mut rng,
                ProductSpace::with_sizes(&sizes).unwrap(),
                s,
                2,
                density,
            )
            .unwrap();
            let rep = acceptance_density_check::<Exact>(&sys).unwrap();
            assert!(rep.pass, "{sizes:?} {s:#b}: {:?}", rep.to_f64());
        }
    }
}
