//! Redei matrices and the fast 4-rank, the conic solver, and Redei symbols.

mod conic;
mod symbol;

pub use conic::{conic_points, reflect, solve_conic, ConicSolution};
pub use symbol::{
    admissible_members, art2_check, art2_pairing, art2_sweep, fuzz_reciprocity, redei_symbol,
    redei_symbol_with, symbol_candidates, Art2Check, Art2Sweep, FuzzRecord, FuzzStatus,
    RedeiTriple,
};

pub use crate::gf2::F2Matrix;

use crate::arith::{jacobi, F2Bit, FamilyDElement};
use crate::gf2::F2Vec;

/// Off-diagonal symbols `a(i, j)` between the prime divisors of `d`.
///
/// `iota(a(i, j)) = (p_i / p_j)` for odd `p_j` and `(2 / p_i)` when one of
/// the primes is 2. The diagonal is fixed by requiring zero row sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolAssignment {
    r: usize,
    upper: Vec<F2Bit>,
}

impl SymbolAssignment {
    pub fn r(&self) -> usize {
        self.r
    }

    fn index(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.r);
        i * self.r - i * (i + 1) / 2 + (j - i - 1)
    }

    /// `a(i, j)` for any `i, j`, including the diagonal.
    pub fn get(&self, i: usize, j: usize) -> F2Bit {
        use std::cmp::Ordering::*;
        match i.cmp(&j) {
            Less => self.upper[self.index(i, j)],
            Greater => self.upper[self.index(j, i)],
            Equal => (0..self.r)
                .filter(|&k| k != i)
                .fold(F2Bit::ZERO, |acc, k| acc + self.get(i, k)),
        }
    }

    /// The symmetric matrix `A(a)` with zero row sums.
    pub fn matrix(&self) -> F2Matrix {
        F2Matrix::from_fn(self.r, self.r, |i, j| self.get(i, j) == F2Bit::ONE)
    }

    /// `A'(a)`: `A(a)` without its last row and column.
    pub fn reduced_matrix(&self) -> F2Matrix {
        let n = self.r.saturating_sub(1);
        F2Matrix::from_fn(n, n, |i, j| self.get(i, j) == F2Bit::ONE)
    }
}

pub fn redei_assignment(d: &FamilyDElement) -> SymbolAssignment {
    let ps = d.primes();
    let r = ps.len();
    let mut upper = Vec::with_capacity(r * r.saturating_sub(1) / 2);
    for i in 0..r {
        for j in i + 1..r {
            // ps is ascending, so only ps[i] can be 2.
            let sign = if ps[i] == 2 {
                jacobi(2, ps[j] as u128)
            } else {
                jacobi(ps[i] as i128, ps[j] as u128)
            }
            .expect("odd prime modulus");
            upper.push(F2Bit::from_sign(sign).expect("coprime primes"));
        }
    }
    SymbolAssignment { r, upper }
}

/// 4-rank of the narrow class group: `dim ker A'(a)`.
pub fn rk4(d: &FamilyDElement) -> usize {
    redei_assignment(d).reduced_matrix().right_kernel().len()
}

/// Right-kernel dimension and echelon basis.
pub fn f2_kernel(m: &F2Matrix) -> (usize, Vec<F2Vec>) {
    let basis = m.right_kernel();
    (basis.len(), basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::family_d_element;

    #[test]
    fn known_values() {
        let d34 = family_d_element(34).unwrap();
        assert_eq!(redei_assignment(&d34).matrix(), F2Matrix::zeros(2, 2));
        assert_eq!(rk4(&d34), 1);
        let p = family_d_element(229).unwrap();
        assert_eq!(redei_assignment(&p).matrix(), F2Matrix::zeros(1, 1));
        assert_eq!(rk4(&p), 0);
        let m = redei_assignment(&family_d_element(65).unwrap()).matrix();
        assert_eq!(m, F2Matrix::from_fn(2, 2, |_, _| true));
        let (dim, basis) = f2_kernel(&m);
        assert_eq!(dim, 1);
        assert_eq!(basis[0].to_bits(), [1, 1]);
        assert_eq!(f2_kernel(&F2Matrix::identity(3)).0, 0);
        assert_eq!(f2_kernel(&F2Matrix::zeros(2, 3)).0, 3);
    }
}
