//! Narrow class groups of real quadratic fields from indefinite binary
//! quadratic forms. This is the slow, independent oracle that the Redei-matrix
//! and continued-fraction fast paths are checked against.

mod artin;
mod cache;
mod forms;
mod genus;
mod group;

pub use artin::{artin_sequence, artin_sequence_permuted, ArtinLevel, ArtinSequence};
pub use cache::{narrow_class_group_cached, ClassSummary};
pub use forms::{compose, reduce_form, reduced_forms, rho_step, Discriminant, QuadForm};
pub use genus::{genus_character_bits, primely_represented};
pub use group::{ClassGroup, TwoSylow};

use crate::arith::FamilyDElement;
use crate::gf2::F2Vec;
use crate::{Error, Result};

/// Default cap on the discriminant handled by the oracle.
pub const DEFAULT_DISCRIMINANT_BOUND: i64 = 4_000_000;

/// The 2-part of the narrow class group of `Q(sqrt d)`, in coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct NarrowClassData {
    pub d: FamilyDElement,
    pub delta: i64,
    pub h_plus: u64,
    /// Cyclic factors have orders `2^{exponents[i]}`, non-increasing.
    pub exponents: Vec<u32>,
    /// Reduced representatives of the basis classes.
    pub generators: Vec<QuadForm>,
    /// For each prime divisor of `d`, ascending, the ambiguous form above it.
    pub ramified_forms: Vec<QuadForm>,
    /// Coordinates of the ramified classes in the generator basis.
    pub ramified: Vec<Vec<u64>>,
    /// Coordinates of the class of `(sqrt d)`.
    pub r_class: Vec<u64>,
    /// Genus character bits of each generator, indexed by prime divisor.
    pub generator_characters: Vec<F2Vec>,
    /// Coordinates of the class of the form with leading coefficient -1.
    pub minus_one_class: Vec<u64>,
}

impl NarrowClassData {
    pub fn omega(&self) -> usize {
        self.d.omega()
    }

    pub fn two_sylow_order(&self) -> u64 {
        1u64 << self.exponents.iter().sum::<u32>()
    }

    /// `dim 2^{k-1} Cl[2^k]`.
    pub fn rank_2k(&self, k: u32) -> usize {
        self.exponents.iter().filter(|&&e| e >= k).count()
    }

    pub fn rk4(&self) -> usize {
        self.rank_2k(2)
    }

    pub fn sqrt_d_class_trivial(&self) -> bool {
        self.r_class.iter().all(|&c| c == 0)
    }

    /// Order of the 2-Sylow of the ordinary class group, the quotient by the
    /// class of the form with leading coefficient -1.
    pub fn ordinary_two_sylow_order(&self) -> u64 {
        let j_trivial = self.minus_one_class.iter().all(|&c| c == 0);
        self.two_sylow_order() / if j_trivial { 1 } else { 2 }
    }

    pub fn summary(&self) -> ClassSummary {
        ClassSummary {
            delta: self.delta,
            h_plus: self.h_plus,
            exponents: self.exponents.clone(),
            ramified: self.ramified.clone(),
        }
    }
}

/// Class group, 2-Sylow basis and the derived coordinate data for one field.
#[derive(Clone, Debug)]
pub struct ClassGroupOracle {
    group: ClassGroup,
    sylow: TwoSylow,
    data: NarrowClassData,
}

/// The ambiguous form `(p, b, .)` with the least `b >= 0`, `b = delta mod 2`
/// and `b^2 = delta mod 4p`.
pub fn ramified_form(p: u64, disc: &Discriminant) -> Result<QuadForm> {
    let p = p as i64;
    let delta = disc.value();
    let modulus = 4 * p as i128;
    // p divides b^2 - delta and delta, hence b; only multiples of p qualify.
    let b = (0..=4 * p)
        .step_by(p as usize)
        .find(|&b| (b - delta) % 2 == 0 && (b as i128 * b as i128 - delta as i128) % modulus == 0)
        .ok_or_else(|| Error::Invalid(format!("{p} does not ramify in discriminant {delta}")))?;
    QuadForm::with_discriminant(p, b, disc)
}

impl ClassGroupOracle {
    pub fn new(d: &FamilyDElement) -> Result<Self> {
        Self::with_bound(d, DEFAULT_DISCRIMINANT_BOUND)
    }

    pub fn with_bound(d: &FamilyDElement, bound: i64) -> Result<Self> {
        let disc = Discriminant::of_radicand(d.d())?;
        if disc.value() > bound {
            return Err(Error::DiscriminantBound {
                delta: disc.value(),
                bound,
            });
        }
        let group = ClassGroup::new(disc)?;
        let sylow = group.two_sylow()?;
        let inconsistent = |what: String| Error::ClassGroupInconsistent {
            delta: disc.value(),
            what,
        };

        if sylow.rank() + 1 != d.omega() {
            return Err(inconsistent(format!(
                "2-rank {} but {} prime divisors",
                sylow.rank(),
                d.omega()
            )));
        }

        let g = sylow.rank();
        let mut ramified_forms = Vec::new();
        let mut ramified = Vec::new();
        for &p in d.primes() {
            let f = ramified_form(p, &disc)?;
            let class = group.class_of(f)?;
            if group.mul(class, class)? != group.identity() {
                return Err(inconsistent(format!(
                    "ramified class above {p} has order > 2"
                )));
            }
            let c = sylow
                .coords(class)
                .ok_or_else(|| inconsistent(format!("ramified class above {p} outside 2-Sylow")))?;
            ramified_forms.push(f);
            ramified.push(c.to_vec());
        }
        let mut r_class = vec![0u64; g];
        for c in &ramified {
            for i in 0..g {
                r_class[i] = (r_class[i] + c[i]) % (1u64 << sylow.exponents[i]);
            }
        }

        let generators: Vec<QuadForm> = sylow
            .generators
            .iter()
            .map(|&x| group.representative(x))
            .collect();
        let generator_characters = generators
            .iter()
            .map(|f| genus_character_bits(f, d, disc.value()))
            .collect::<Result<Vec<_>>>()?;

        let j = group.class_of(QuadForm::minus_one(&disc))?;
        let minus_one_class = sylow
            .coords(j)
            .ok_or_else(|| inconsistent("class of -1 form outside 2-Sylow".into()))?
            .to_vec();

        let data = NarrowClassData {
            d: d.clone(),
            delta: disc.value(),
            h_plus: group.order(),
            exponents: sylow.exponents.clone(),
            generators,
            ramified_forms,
            ramified,
            r_class,
            generator_characters,
            minus_one_class,
        };
        Ok(ClassGroupOracle { group, sylow, data })
    }

    pub fn group(&self) -> &ClassGroup {
        &self.group
    }

    pub fn sylow(&self) -> &TwoSylow {
        &self.sylow
    }

    pub fn data(&self) -> &NarrowClassData {
        &self.data
    }

    pub fn into_data(self) -> NarrowClassData {
        self.data
    }

    /// Coordinates of the 2-part of the class of any form of the discriminant.
    pub fn two_part_coords(&self, f: QuadForm) -> Result<Vec<u64>> {
        let class = self.group.class_of(f)?;
        self.sylow.project(&self.group, class)
    }
}

/// Narrow class group data for `d`, using the default discriminant bound.
pub fn narrow_class_group(d: &FamilyDElement) -> Result<NarrowClassData> {
    Ok(ClassGroupOracle::new(d)?.into_data())
}

/// Whether `(sqrt d)` is trivial in the narrow class group.
pub fn sqrt_d_class_trivial(d: &FamilyDElement) -> Result<bool> {
    Ok(narrow_class_group_cached(d)?.sqrt_d_class_trivial())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::family_d_element;

    fn data(d: u64) -> NarrowClassData {
        narrow_class_group(&family_d_element(d).unwrap()).unwrap()
    }

    #[test]
    fn class_numbers_of_small_discriminants() {
        assert_eq!(
            ClassGroup::new(Discriminant::new(5).unwrap())
                .unwrap()
                .order(),
            1
        );
        assert_eq!(
            ClassGroup::new(Discriminant::new(40).unwrap())
                .unwrap()
                .order(),
            2
        );
        assert_eq!(
            ClassGroup::new(Discriminant::new(12).unwrap())
                .unwrap()
                .order(),
            2
        );
    }

    #[test]
    fn known_values() {
        let five = data(5);
        assert_eq!(five.h_plus, 1);
        assert!(five.exponents.is_empty() && five.sqrt_d_class_trivial());
        let d34 = data(34);
        assert!(d34.two_sylow_order() >= 2);
        assert_eq!(d34.rk4(), 1);
        assert!(!d34.sqrt_d_class_trivial());
        assert_eq!(data(229).two_sylow_order(), 1);
        assert!(data(2).sqrt_d_class_trivial());
    }

    #[test]
    fn bound_is_enforced() {
        let d = family_d_element(1_000_001)
            .or_else(|| family_d_element(1_000_009))
            .unwrap();
        assert!(matches!(
            ClassGroupOracle::with_bound(&d, 1000),
            Err(Error::DiscriminantBound { .. })
        ));
    }
}
