//! Dense matrices over a prime field.
//!
//! A [`Matrix`] is immutable after construction and stores canonical entries
//! in row-major order. Row reduction produces the unique reduced row echelon
//! form with zero rows removed, which is what makes subspace equality a plain
//! byte comparison downstream.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use rand::RngCore;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<u64>,
}

/// Result of row reduction: the canonical form, its rank, and the pivot
/// columns in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Matrix {
    /// Builds a matrix, reducing every entry into `[0, q)`.
    pub fn new(field: FieldSpec, rows: usize, cols: usize, mut entries: Vec<u64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for e in &mut entries {
            *e = field.reduce(*e);
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(field: FieldSpec, rows: &[Vec<u64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        Matrix::from_rows_dim(field, cols, rows)
    }

    /// Like [`Self::from_rows`] but with the width given explicitly, so an
    /// empty row list still knows its ambient dimension.
    pub fn from_rows_dim(field: FieldSpec, cols: usize, rows: &[Vec<u64>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Matrix::new(field, rows.len(), cols, rows.concat())
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Matrix with every entry drawn independently and uniformly from `[0, q)`.
    ///
    /// Entries are consumed from the generator in row-major order, so output
    /// is byte-exact for a fixed seed.
    pub fn random<R: RngCore + ?Sized>(
        rows: usize,
        cols: usize,
        field: FieldSpec,
        rng: &mut R,
    ) -> Self {
        let entries = (0..rows * cols).map(|_| field.sample(rng)).collect();
        Matrix {
            field,
            rows,
            cols,
            entries,
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    fn check_same_field(&self, other: &Matrix) -> Result<()> {
        if self.field != other.field {
            return Err(Error::ShapeMismatch(format!(
                "mixed moduli {} and {}",
                self.field.modulus(),
                other.field.modulus()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "add {}x{} to {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let c = self.field.reduce(c);
        let entries = self.entries.iter().map(|&a| self.field.mul(a, c)).collect();
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn multiply(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let q = self.field.modulus() as u128;
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc: u128 = 0;
                for k in 0..self.cols {
                    acc += (self.get(i, k) * other.get(k, j)) as u128;
                }
                entries.push((acc % q) as u64);
            }
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: other.cols,
            entries,
        })
    }

    /// Vertical concatenation; column counts must agree.
    pub fn stack(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_field(other)?;
        if self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "stack {}-column rows onto {}-column rows",
                other.cols, self.cols
            )));
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&other.entries);
        Ok(Matrix {
            field: self.field,
            rows: self.rows + other.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.rows * self.cols);
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    /// Reduced row echelon form with zero rows removed.
    ///
    /// Pivots are leftmost-nonzero, normalized to 1, and eliminated both
    /// above and below, so the output is the unique canonical basis of the
    /// row space.
    pub fn rref(&self) -> Rref {
        let f = self.field;
        let rows = self.rows;
        let cols = self.cols;
        let mut m = self.entries.clone();
        let at = |m: &Vec<u64>, r: usize, c: usize| m[r * cols + c];

        let mut pivots = Vec::new();
        let mut pivot_row = 0usize;
        for col in 0..cols {
            if pivot_row == rows {
                break;
            }
            let Some(src) = (pivot_row..rows).find(|&r| at(&m, r, col) != 0) else {
                continue;
            };
            if src != pivot_row {
                for c in 0..cols {
                    m.swap(src * cols + c, pivot_row * cols + c);
                }
            }
            let inv = f.inv(at(&m, pivot_row, col));
            for c in col..cols {
                m[pivot_row * cols + c] = f.mul(m[pivot_row * cols + c], inv);
            }
            for r in 0..rows {
                if r == pivot_row {
                    continue;
                }
                let factor = at(&m, r, col);
                if factor == 0 {
                    continue;
                }
                for c in col..cols {
                    let t = f.mul(factor, at(&m, pivot_row, c));
                    m[r * cols + c] = f.sub(m[r * cols + c], t);
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }

        let rank = pivots.len();
        m.truncate(rank * cols);
        Rref {
            matrix: Matrix {
                field: f,
                rows: rank,
                cols,
                entries: m,
            },
            rank,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Canonical basis of `{v : M v^T = 0}`; row count is `cols - rank`.
    pub fn kernel(&self) -> Matrix {
        let reduced = self.rref();
        let f = self.field;
        let cols = self.cols;
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; cols];
            for (i, &p) in reduced.pivots.iter().enumerate() {
                v[p] = Some(i);
            }
            v
        };
        let mut basis_rows = Vec::new();
        for free in 0..cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut v = vec![0u64; cols];
            v[free] = 1;
            for (i, &p) in reduced.pivots.iter().enumerate() {
                v[p] = f.neg(reduced.matrix.get(i, free));
            }
            basis_rows.push(v);
        }
        Matrix::from_rows_dim(f, cols, &basis_rows)
            .expect("kernel rows share a length")
            .rref()
            .matrix
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "[{}x{} over F_{}]", self.rows, self.cols, self.field.modulus())?;
        for r in 0..self.rows {
            for (i, e) in self.row(r).iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    fn f(q: u64) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    fn mat(q: u64, rows: &[&[u64]]) -> Matrix {
        let rows: Vec<Vec<u64>> = rows.iter().map(|r| r.to_vec()).collect();
        Matrix::from_rows(f(q), &rows).unwrap()
    }

    #[test]
    fn rref_identity_is_fixed_point() {
        let id = Matrix::identity(f(2), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 3);
        assert_eq!(r.pivots, vec![0, 1, 2]);
    }

    #[test]
    fn rref_collapses_repeated_rows() {
        let m = mat(2, &[&[1, 1], &[1, 1]]);
        let r = m.rref();
        assert_eq!(r.matrix, mat(2, &[&[1, 1]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn rref_swaps_and_normalizes_over_f3() {
        let m = mat(3, &[&[0, 1], &[1, 0]]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::identity(f(3), 2));
        assert_eq!(r.rank, 2);
    }

    #[test]
    fn rref_is_idempotent() {
        let mut rng = rng_from_seed(11);
        for _ in 0..50 {
            let m = Matrix::random(4, 6, f(5), &mut rng);
            let once = m.rref();
            let twice = once.matrix.rref();
            assert_eq!(once.matrix, twice.matrix);
            assert_eq!(once.pivots, twice.pivots);
        }
    }

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = Matrix::zeros(f(2), 0, 4);
        let r = m.rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
        assert_eq!(r.matrix.rows(), 0);
    }

    #[test]
    fn kernel_of_identity_is_empty() {
        let k = Matrix::identity(f(2), 2).kernel();
        assert_eq!(k.rows(), 0);
        assert_eq!(k.cols(), 2);
    }

    #[test]
    fn kernel_of_parity_row_over_f2() {
        let k = mat(2, &[&[1, 1]]).kernel();
        assert_eq!(k, mat(2, &[&[1, 1]]));
    }

    #[test]
    fn kernel_solves_single_row_mod_5() {
        // Solutions of v0 + 2 v1 = 0 over F_5 are spanned by (3, 1);
        // canonicalized that is (1, 2).
        let m = mat(5, &[&[1, 2]]);
        let k = m.kernel();
        assert_eq!(k, mat(5, &[&[1, 2]]));
        // Independent check: every kernel row is annihilated by m.
        let prod = m.multiply(&k.transpose()).unwrap();
        assert!(prod.is_zero());
    }

    #[test]
    fn rank_plus_nullity_is_column_count() {
        let mut rng = rng_from_seed(3);
        for q in [2u64, 3, 101] {
            for _ in 0..30 {
                let m = Matrix::random(3, 5, f(q), &mut rng);
                let k = m.kernel();
                assert_eq!(m.rank() + k.rows(), m.cols());
                assert!(m.multiply(&k.transpose()).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn random_matrix_empty_and_deterministic() {
        let e = Matrix::random(0, 4, f(7), &mut rng_from_seed(0));
        assert_eq!(e.rows(), 0);
        let a = Matrix::random(3, 3, f(7), &mut rng_from_seed(9));
        let b = Matrix::random(3, 3, f(7), &mut rng_from_seed(9));
        assert_eq!(a, b);
    }

    #[test]
    fn random_rank_frequency_matches_enumeration_over_f2() {
        // All 16 binary 2x2 matrices: 6 are invertible, so Pr(rank 2) = 3/8.
        let mut invertible = 0;
        for bits in 0..16u64 {
            let m = mat(
                2,
                &[&[bits & 1, (bits >> 1) & 1], &[(bits >> 2) & 1, (bits >> 3) & 1]],
            );
            if m.rank() == 2 {
                invertible += 1;
            }
        }
        assert_eq!(invertible, 6);

        let trials = 10_000u64;
        let mut rng = rng_from_seed(5);
        let hits = (0..trials)
            .filter(|_| Matrix::random(2, 2, f(2), &mut rng).rank() == 2)
            .count() as f64;
        let p = 6.0 / 16.0;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((hits / trials as f64 - p).abs() <= 3.0 * sigma);
    }

    #[test]
    fn stack_and_multiply_shapes() {
        let a = mat(2, &[&[1, 0, 1], &[0, 1, 0]]);
        let b = mat(2, &[&[1, 1, 0]]);
        let s = a.stack(&b).unwrap();
        assert_eq!((s.rows(), s.cols()), (3, 3));
        assert_eq!(s.rank(), 3);

        let id = Matrix::identity(f(2), 3);
        assert_eq!(a.multiply(&id).unwrap(), a);

        // 1 + 1 = 0 mod 2.
        let row = mat(2, &[&[1, 1]]);
        let col = mat(2, &[&[1], &[1]]);
        assert_eq!(row.multiply(&col).unwrap(), mat(2, &[&[0]]));
    }

    #[test]
    fn shape_errors_are_reported() {
        let a = mat(2, &[&[1, 0]]);
        let b = mat(2, &[&[1, 0, 1]]);
        assert!(matches!(a.stack(&b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.add(&b), Err(Error::ShapeMismatch(_))));
        assert!(matches!(a.multiply(&b), Err(Error::ShapeMismatch(_))));
        assert!(Matrix::new(f(2), 2, 2, vec![1, 0, 1]).is_err());
    }

    #[test]
    fn stack_rank_dominates_parts() {
        let mut rng = rng_from_seed(21);
        for _ in 0..40 {
            let a = Matrix::random(2, 4, f(3), &mut rng);
            let b = Matrix::random(3, 4, f(3), &mut rng);
            let s = a.stack(&b).unwrap();
            assert!(s.rank() >= a.rank().max(b.rank()));
        }
    }
}
