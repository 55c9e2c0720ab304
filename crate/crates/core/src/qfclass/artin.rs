use super::cache::narrow_class_group_cached;
use super::NarrowClassData;
use crate::arith::FamilyDElement;
use crate::gf2::{combine, express_in_basis, F2Matrix, F2Vec};
use crate::{Error, Result};

/// One pairing `Art_k : A_k x B_k -> F2` in chosen bases.
#[derive(Clone, Debug, PartialEq)]
pub struct ArtinLevel {
    pub k: u32,
    /// Basis of `A_k` inside `F2^r`.
    pub left_basis: Vec<F2Vec>,
    /// Basis of `B_k` inside `F2^r`.
    pub right_basis: Vec<F2Vec>,
    pub matrix: F2Matrix,
    /// The all-ones vector in the `right_basis` coordinates.
    pub r_coords: F2Vec,
}

/// The chain of Artin pairings pulled back to genus vectors in `F2^r`.
#[derive(Clone, Debug, PartialEq)]
pub struct ArtinSequence {
    pub r: usize,
    /// The pulled-back `Art_1` on `F2^r x F2^r`, i.e. the Redei matrix.
    pub art1: F2Matrix,
    /// `Art_2, ..., Art_K`, where `A_{K+1}` is one-dimensional.
    pub levels: Vec<ArtinLevel>,
    /// Basis of `A_{K+1}`.
    pub final_left: Vec<F2Vec>,
    pub pellian: bool,
}

impl ArtinSequence {
    /// Dimensions of `A_2, A_3, ..., A_{K+1}`.
    pub fn left_dims(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.levels.iter().map(|l| l.left_basis.len()).collect();
        v.push(self.final_left.len());
        v
    }

    /// Dimensions of `B_2, ..., B_K` followed by the right kernel of `Art_K`.
    pub fn right_dims(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.levels.iter().map(|l| l.right_basis.len()).collect();
        if let Some(last) = self.levels.last() {
            v.push(last.matrix.right_kernel().len());
        } else {
            v.push(self.final_left.len());
        }
        v
    }

    pub fn terminal_level(&self) -> u32 {
        self.levels.last().map_or(1, |l| l.k)
    }

    pub fn r_in_every_right_kernel(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.matrix.mul_vec(&l.r_coords).is_zero())
    }
}

struct Pairing<'a> {
    data: &'a NarrowClassData,
    order: &'a [usize],
}

impl Pairing<'_> {
    fn r(&self) -> usize {
        self.order.len()
    }

    /// Which generators the 2-torsion class of `v` involves.
    fn left_support(&self, v: &F2Vec) -> Vec<bool> {
        let g = self.data.exponents.len();
        let mut c = vec![0u64; g];
        for i in v.ones() {
            let row = &self.data.ramified[self.order[i]];
            for l in 0..g {
                c[l] = (c[l] + row[l]) % (1u64 << self.data.exponents[l]);
            }
        }
        c.iter().map(|&x| x != 0).collect()
    }

    /// Values of the character of `w` on the generators.
    fn right_values(&self, w: &F2Vec) -> Vec<bool> {
        self.data
            .generator_characters
            .iter()
            .map(|chars| {
                w.ones()
                    .fold(false, |acc, j| acc ^ chars.get(self.order[j]))
            })
            .collect()
    }

    fn inconsistent(&self, what: String) -> Error {
        Error::ClassGroupInconsistent {
            delta: self.data.delta,
            what,
        }
    }

    fn matrix(&self, k: u32, left: &[F2Vec], right: &[F2Vec]) -> Result<F2Matrix> {
        let lefts: Vec<Vec<bool>> = left.iter().map(|v| self.left_support(v)).collect();
        let rights: Vec<Vec<bool>> = right.iter().map(|w| self.right_values(w)).collect();
        for (l, e) in self.data.exponents.iter().enumerate() {
            if *e < k && (lefts.iter().any(|x| x[l]) || rights.iter().any(|y| y[l])) {
                return Err(
                    self.inconsistent(format!("level {k} vector leaves 2^{}Cl[2^{k}]", k - 1))
                );
            }
        }
        let exps = &self.data.exponents;
        Ok(F2Matrix::from_fn(left.len(), right.len(), |i, j| {
            (0..exps.len())
                .filter(|&l| exps[l] == k && lefts[i][l] && rights[j][l])
                .count()
                % 2
                == 1
        }))
    }
}

fn compute(data: &NarrowClassData, order: &[usize]) -> Result<ArtinSequence> {
    let pairing = Pairing { data, order };
    let r = pairing.r();
    let std_basis: Vec<F2Vec> = (0..r)
        .map(|i| {
            let mut v = F2Vec::zeros(r);
            v.set(i, true);
            v
        })
        .collect();
    let all_ones = F2Vec::from_bits(&vec![1; r]);
    let art1 = pairing.matrix(1, &std_basis, &std_basis)?;
    let mut left: Vec<F2Vec> = art1.left_kernel();
    let mut right: Vec<F2Vec> = art1.right_kernel();
    let mut levels = Vec::new();
    let mut k = 2;
    while left.len() > 1 {
        let matrix = pairing.matrix(k, &left, &right)?;
        let r_coords = express_in_basis(&right, &all_ones)
            .ok_or_else(|| pairing.inconsistent(format!("R not in B_{k}")))?;
        let next_left: Vec<F2Vec> = matrix
            .left_kernel()
            .iter()
            .map(|c| combine(&left, c, r))
            .collect();
        let next_right: Vec<F2Vec> = matrix
            .right_kernel()
            .iter()
            .map(|c| combine(&right, c, r))
            .collect();
        levels.push(ArtinLevel {
            k,
            left_basis: std::mem::replace(&mut left, next_left),
            right_basis: std::mem::replace(&mut right, next_right),
            matrix,
            r_coords,
        });
        k += 1;
        if k > 64 {
            return Err(pairing.inconsistent("Artin chain does not stabilise".into()));
        }
    }
    if left.len() != 1 || right.len() != 1 {
        return Err(pairing.inconsistent(format!(
            "terminal kernels have dimensions {} and {}",
            left.len(),
            right.len()
        )));
    }
    let pellian = express_in_basis(&left, &all_ones).is_some();
    Ok(ArtinSequence {
        r,
        art1,
        levels,
        final_left: left,
        pellian,
    })
}

/// Artin pairing chain for `d` with prime divisors in ascending order.
pub fn artin_sequence(d: &FamilyDElement) -> Result<ArtinSequence> {
    let data = narrow_class_group_cached(d)?;
    let order: Vec<usize> = (0..d.omega()).collect();
    compute(&data, &order)
}

/// The same chain computed with the genus coordinates permuted: coordinate
/// `i` of every vector refers to prime divisor `order[i]`.
pub fn artin_sequence_permuted(data: &NarrowClassData, order: &[usize]) -> Result<ArtinSequence> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if sorted != (0..data.omega()).collect::<Vec<_>>() {
        return Err(Error::Invalid(
            "not a permutation of the prime indices".into(),
        ));
    }
    compute(data, order)
}
