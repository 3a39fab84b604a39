//! Subspaces of F_q^n in canonical form.
//!
//! A [`Subspace`] owns the unique reduced-row-echelon basis of its row space
//! (zero rows removed), so structural equality of two values is equality of
//! the spaces they denote. The zero space is the empty basis.

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::matrix::Matrix;
use rand::RngCore;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
}

impl Subspace {
    /// The subspace spanned by the rows of `m`.
    pub fn from_spanning(m: &Matrix) -> Subspace {
        Subspace {
            basis: m.rref().matrix,
        }
    }

    /// Wraps a matrix that is already a canonical basis.
    ///
    /// Rejects input that is not in reduced echelon form with zero rows
    /// removed; used when reading serialized subspaces.
    pub fn from_canonical_basis(m: Matrix) -> Result<Subspace> {
        let r = m.rref();
        if r.matrix != m {
            return Err(Error::Parse("basis rows are not in canonical form".into()));
        }
        Ok(Subspace { basis: m })
    }

    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            basis: Matrix::zeros(field, 0, ambient_dim),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim()
    }

    fn check_compatible(&self, other: &Subspace) -> Result<()> {
        if self.field() != other.field() || self.ambient_dim() != other.ambient_dim() {
            return Err(Error::LatticeMismatch);
        }
        Ok(())
    }

    /// Reduces `v` against the canonical basis; the remainder is zero exactly
    /// when `v` lies in the subspace.
    pub fn contains_vector(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient_dim());
        let f = self.field();
        let mut v: Vec<u64> = v.iter().map(|&e| f.reduce(e)).collect();
        for i in 0..self.dim() {
            let row = self.basis.row(i);
            let pivot = row.iter().position(|&e| e != 0).expect("no zero rows");
            let factor = v[pivot];
            if factor == 0 {
                continue;
            }
            for (slot, &b) in v.iter_mut().zip(row) {
                *slot = f.sub(*slot, f.mul(factor, b));
            }
        }
        v.iter().all(|&e| e == 0)
    }

    /// Containment test: every basis row of `self` solvable in `other`.
    pub fn leq(&self, other: &Subspace) -> Result<bool> {
        self.check_compatible(other)?;
        Ok((0..self.dim()).all(|i| other.contains_vector(self.basis.row(i))))
    }

    /// Least upper bound: the span of both bases.
    pub fn join(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        Ok(Subspace::from_spanning(&self.basis.stack(&other.basis)?))
    }

    /// Greatest lower bound via the Zassenhaus block construction.
    ///
    /// Row-reduce the 2n-column matrix `[X|X ; Y|0]`; rows whose left block
    /// vanishes carry an intersection basis in the right block. One reduction
    /// yields the meet without solving a system per vector.
    pub fn meet(&self, other: &Subspace) -> Result<Subspace> {
        self.check_compatible(other)?;
        let f = self.field();
        let n = self.ambient_dim();
        let mut rows: Vec<Vec<u64>> = Vec::with_capacity(self.dim() + other.dim());
        for i in 0..self.dim() {
            let r = self.basis.row(i);
            let mut block = Vec::with_capacity(2 * n);
            block.extend_from_slice(r);
            block.extend_from_slice(r);
            rows.push(block);
        }
        for i in 0..other.dim() {
            let r = other.basis.row(i);
            let mut block = Vec::with_capacity(2 * n);
            block.extend_from_slice(r);
            block.extend(std::iter::repeat(0).take(n));
            rows.push(block);
        }
        let reduced = Matrix::from_rows_dim(f, 2 * n, &rows)?.rref().matrix;
        let mut intersection_rows = Vec::new();
        for i in 0..reduced.rows() {
            let row = reduced.row(i);
            if row[..n].iter().all(|&e| e == 0) {
                intersection_rows.push(row[n..].to_vec());
            }
        }
        Ok(Subspace::from_spanning(&Matrix::from_rows_dim(
            f,
            n,
            &intersection_rows,
        )?))
    }

    /// A complement by greedy basis extension: standard basis vectors that
    /// increase the rank are collected, and their span is returned.
    pub fn complement(&self) -> Subspace {
        let f = self.field();
        let n = self.ambient_dim();
        let mut working = self.basis.clone();
        let mut added = Vec::new();
        for i in 0..n {
            if working.rows() == n {
                break;
            }
            let mut e = vec![0u64; n];
            e[i] = 1;
            let candidate = working
                .stack(&Matrix::from_rows(f, &[e.clone()]).expect("row shape"))
                .expect("same width");
            let reduced = candidate.rref();
            if reduced.rank > working.rows() {
                working = reduced.matrix;
                added.push(e);
            }
        }
        Subspace::from_spanning(&Matrix::from_rows_dim(f, n, &added).expect("row shape"))
    }

    /// Span of `m` vectors drawn independently and uniformly.
    ///
    /// The resulting dimension is at most `m` and follows the rank law of an
    /// `m x n` uniform matrix; this is the sampling model used throughout.
    pub fn random_span<R: RngCore + ?Sized>(
        m: usize,
        field: FieldSpec,
        ambient_dim: usize,
        rng: &mut R,
    ) -> Subspace {
        Subspace::from_spanning(&Matrix::random(m, ambient_dim, field, rng))
    }

    /// Uniform-dimension sampling by rejection: re-span until the rank hits
    /// `k` exactly. Expected attempts are below 2 for any q >= 2.
    pub fn random_of_dim<R: RngCore + ?Sized>(
        k: usize,
        field: FieldSpec,
        ambient_dim: usize,
        rng: &mut R,
    ) -> Result<Subspace> {
        if k > ambient_dim {
            return Err(Error::Precondition(format!(
                "cannot sample a {k}-dimensional subspace of dimension-{ambient_dim} space"
            )));
        }
        for _ in 0..256 {
            let s = Subspace::random_span(k, field, ambient_dim, rng);
            if s.dim() == k {
                return Ok(s);
            }
        }
        Err(Error::Precondition(format!(
            "rank-{k} sample did not occur in 256 attempts (q={}, n={ambient_dim})",
            field.modulus()
        )))
    }

    /// Canonical byte serialization: `q=<dec> n=<dec> k=<dec>\n` followed by
    /// `k` lines of `n` space-separated decimal entries in basis row order.
    ///
    /// This encoding is byte-exact across implementations and is the h2
    /// pre-image format as well as the on-disk block format.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        let mut out = format!(
            "q={} n={} k={}\n",
            self.field().modulus(),
            self.ambient_dim(),
            self.dim()
        )
        .into_bytes();
        for i in 0..self.dim() {
            let line = self
                .basis
                .row(i)
                .iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
        out
    }

    /// Parses the canonical serialization produced by [`Self::canonical_bytes`].
    pub fn parse_canonical(text: &str) -> Result<Subspace> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty subspace block".into()))?;
        let (q, n, k) = parse_header(header)?;
        let field = FieldSpec::new(q)?;
        let mut rows = Vec::with_capacity(k);
        for _ in 0..k {
            let line = lines
                .next()
                .ok_or_else(|| Error::Parse("subspace block truncated".into()))?;
            let row: Vec<u64> = line
                .split(' ')
                .filter(|t| !t.is_empty())
                .map(|t| {
                    t.parse::<u64>()
                        .map_err(|_| Error::Parse(format!("bad field element {t:?}")))
                })
                .collect::<Result<_>>()?;
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "expected {n} entries per row, got {}",
                    row.len()
                )));
            }
            if row.iter().any(|&e| e >= q) {
                return Err(Error::Parse("field element out of range".into()));
            }
            rows.push(row);
        }
        Subspace::from_canonical_basis(Matrix::from_rows_dim(field, n, &rows)?)
    }
}

fn parse_header(header: &str) -> Result<(u64, usize, usize)> {
    let mut q = None;
    let mut n = None;
    let mut k = None;
    for part in header.split(' ') {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| Error::Parse(format!("bad header field {part:?}")))?;
        let parsed: u64 = value
            .parse()
            .map_err(|_| Error::Parse(format!("bad header value {value:?}")))?;
        match key {
            "q" => q = Some(parsed),
            "n" => n = Some(parsed as usize),
            "k" => k = Some(parsed as usize),
            _ => return Err(Error::Parse(format!("unknown header key {key:?}"))),
        }
    }
    match (q, n, k) {
        (Some(q), Some(n), Some(k)) => Ok((q, n, k)),
        _ => Err(Error::Parse("subspace header must carry q, n and k".into())),
    }
}
