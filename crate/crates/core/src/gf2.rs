//! Dense linear algebra over GF(2) with rows packed into 64-bit words.

use std::fmt;

/// Vector over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct F2Vec {
    len: usize,
    words: Vec<u64>,
}

impl F2Vec {
    pub fn zeros(len: usize) -> Self {
        F2Vec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn from_bits(bits: &[u8]) -> Self {
        let mut v = F2Vec::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                v.set(i, true);
            }
        }
        v
    }

    /// The low `len` bits of `mask`, bit `i` being coordinate `i`.
    pub fn from_mask(mask: u64, len: usize) -> Self {
        assert!(len <= 64);
        let mut v = F2Vec::zeros(len);
        if len > 0 {
            v.words[0] = if len == 64 {
                mask
            } else {
                mask & ((1u64 << len) - 1)
            };
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let m = 1u64 << (i % 64);
        if bit {
            self.words[i / 64] |= m;
        } else {
            self.words[i / 64] &= !m;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &F2Vec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn dot(&self, other: &F2Vec) -> bool {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .fold(0u32, |acc, (a, b)| acc ^ (a & b).count_ones())
            & 1
            == 1
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Bits packed into a `u64`; panics beyond 64 coordinates.
    pub fn to_mask(&self) -> u64 {
        assert!(self.len <= 64);
        self.words.first().copied().unwrap_or(0)
    }

    pub fn to_bits(&self) -> Vec<u8> {
        (0..self.len).map(|i| self.get(i) as u8).collect()
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.get(i))
    }
}

impl fmt::Display for F2Vec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", self.get(i) as u8)?;
        }
        Ok(())
    }
}

/// Dense matrix over GF(2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct F2Matrix {
    rows: Vec<F2Vec>,
    cols: usize,
}

impl F2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        F2Matrix {
            rows: vec![F2Vec::zeros(cols); rows],
            cols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = F2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = F2Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    pub fn from_rows(rows: Vec<F2Vec>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols));
        F2Matrix { rows, cols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        self.rows[i].set(j, bit)
    }

    pub fn row(&self, i: usize) -> &F2Vec {
        &self.rows[i]
    }

    pub fn column(&self, j: usize) -> F2Vec {
        let mut v = F2Vec::zeros(self.nrows());
        for i in 0..self.nrows() {
            v.set(i, self.get(i, j));
        }
        v
    }

    pub fn transpose(&self) -> F2Matrix {
        F2Matrix::from_fn(self.cols, self.nrows(), |i, j| self.get(j, i))
    }

    pub fn mul_vec(&self, v: &F2Vec) -> F2Vec {
        let mut out = F2Vec::zeros(self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            out.set(i, row.dot(v));
        }
        out
    }

    /// `v^T M`.
    pub fn vec_mul(&self, v: &F2Vec) -> F2Vec {
        assert_eq!(v.len(), self.nrows());
        let mut out = F2Vec::zeros(self.cols);
        for i in v.ones() {
            out.add_assign(&self.rows[i]);
        }
        out
    }

    pub fn mul(&self, other: &F2Matrix) -> F2Matrix {
        assert_eq!(self.cols, other.nrows());
        let rows = self.rows.iter().map(|r| other.vec_mul(r)).collect();
        F2Matrix {
            rows,
            cols: other.cols,
        }
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (F2Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.nrows() {
                break;
            }
            let Some(p) = (r..m.nrows()).find(|&i| m.get(i, c)) else {
                continue;
            };
            m.rows.swap(r, p);
            let pivot = m.rows[r].clone();
            for i in 0..m.nrows() {
                if i != r && m.get(i, c) {
                    m.rows[i].add_assign(&pivot);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : M v = 0}`, one vector per non-pivot column in
    /// ascending order, each with a single 1 among the free coordinates.
    pub fn right_kernel(&self) -> Vec<F2Vec> {
        let (m, pivots) = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for f in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = F2Vec::zeros(self.cols);
            v.set(f, true);
            for (row, &c) in pivots.iter().enumerate() {
                if m.get(row, f) {
                    v.set(c, true);
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Basis of `{v : v^T M = 0}`.
    pub fn left_kernel(&self) -> Vec<F2Vec> {
        self.transpose().right_kernel()
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

impl fmt::Display for F2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Coordinates of `v` in the span of `basis`, if it lies there.
pub fn express_in_basis(basis: &[F2Vec], v: &F2Vec) -> Option<F2Vec> {
    let k = basis.len();
    // Columns are the basis vectors, augmented by v.
    let n = v.len();
    let aug = F2Matrix::from_fn(
        n,
        k + 1,
        |i, j| if j < k { basis[j].get(i) } else { v.get(i) },
    );
    let (m, pivots) = aug.rref();
    if pivots.last() == Some(&k) {
        return None;
    }
    let mut coords = F2Vec::zeros(k);
    for (row, &c) in pivots.iter().enumerate() {
        if m.get(row, k) {
            coords.set(c, true);
        }
    }
    Some(coords)
}

/// Vector `sum_i coeffs[i] * basis[i]`.
pub fn combine(basis: &[F2Vec], coeffs: &F2Vec, len: usize) -> F2Vec {
    let mut out = F2Vec::zeros(len);
    for i in coeffs.ones() {
        out.add_assign(&basis[i]);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix() -> impl Strategy<Value = F2Matrix> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c)
                .prop_map(move |bits| F2Matrix::from_fn(r, c, |i, j| bits[i * c + j]))
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ker = m.right_kernel();
            prop_assert_eq!(m.rank() + ker.len(), m.ncols());
            for v in &ker {
                prop_assert!(m.mul_vec(v).is_zero());
            }
            let span = F2Matrix::from_rows(ker.clone(), m.ncols());
            prop_assert_eq!(span.rank(), ker.len());
            for v in m.left_kernel() {
                prop_assert!(m.vec_mul(&v).is_zero());
            }
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn express_round_trips(m in arb_matrix(), mask in any::<u64>()) {
            let basis = m.right_kernel();
            let coeffs = F2Vec::from_mask(mask, basis.len());
            let v = combine(&basis, &coeffs, m.ncols());
            prop_assert_eq!(express_in_basis(&basis, &v), Some(coeffs));
        }
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        assert!(F2Matrix::identity(5).right_kernel().is_empty());
        assert_eq!(F2Matrix::zeros(2, 3).right_kernel().len(), 3);
    }
}
