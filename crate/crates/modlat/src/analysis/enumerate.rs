//! Exhaustive enumeration of small lattices.
//!
//! Subspaces are generated directly as canonical echelon bases: for each
//! rank and each pivot-column set, the free entries run over all of F_q.
//! Every subspace appears exactly once, which makes the enumerator an
//! independent counting oracle for the closed-form coefficients.
//!
//! Enumerations are refused (with the exact count) when they would exceed
//! the caller's budget; counts are computed in advance from the closed form.

use crate::analysis::combinat::gaussian_coeff;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::{Element, Lattice};
use crate::matrix::Matrix;
use crate::subspace::Subspace;
use itertools::Itertools;
use num::BigUint;

/// Total number of subspaces of F_q^n (all dimensions).
pub fn subspace_count(n: usize, q: u64) -> BigUint {
    (0..=n as u64).map(|k| gaussian_coeff(n as u64, k, q)).sum()
}

fn check_budget(count: &BigUint, budget: u64) -> Result<()> {
    if *count > BigUint::from(budget) {
        return Err(Error::BudgetExceeded {
            count: count.clone(),
            budget,
        });
    }
    Ok(())
}

/// All k-dimensional subspaces of F_q^n, each exactly once.
pub fn enumerate_subspaces_of_dim(
    field: FieldSpec,
    n: usize,
    k: usize,
    budget: u64,
) -> Result<Vec<Subspace>> {
    check_budget(&gaussian_coeff(n as u64, k as u64, q_of(field)), budget)?;
    let mut out = Vec::new();
    if k > n {
        return Ok(out);
    }
    if k == 0 {
        out.push(Subspace::zero(field, n));
        return Ok(out);
    }
    let q = q_of(field);
    for pivots in (0..n).combinations(k) {
        // Free entries sit strictly right of their row's pivot and outside
        // pivot columns.
        let mut free_slots: Vec<(usize, usize)> = Vec::new();
        for (row, &p) in pivots.iter().enumerate() {
            for col in (p + 1)..n {
                if !pivots.contains(&col) {
                    free_slots.push((row, col));
                }
            }
        }
        let mut digits = vec![0u64; free_slots.len()];
        loop {
            let mut entries = vec![0u64; k * n];
            for (row, &p) in pivots.iter().enumerate() {
                entries[row * n + p] = 1;
            }
            for (&(row, col), &v) in free_slots.iter().zip(&digits) {
                entries[row * n + col] = v;
            }
            let basis = Matrix::new(field, k, n, entries).expect("constructed shape");
            out.push(Subspace::from_canonical_basis(basis).expect("echelon by construction"));
            // Mixed-radix increment over the free entries.
            let mut carry = true;
            for d in digits.iter_mut() {
                if !carry {
                    break;
                }
                *d += 1;
                if *d == q {
                    *d = 0;
                } else {
                    carry = false;
                }
            }
            if carry {
                break;
            }
        }
    }
    Ok(out)
}

/// All subspaces of F_q^n, each exactly once, ordered by dimension.
pub fn enumerate_subspaces(field: FieldSpec, n: usize, budget: u64) -> Result<Vec<Subspace>> {
    check_budget(&subspace_count(n, q_of(field)), budget)?;
    let mut out = Vec::new();
    for k in 0..=n {
        out.extend(enumerate_subspaces_of_dim(field, n, k, budget)?);
    }
    Ok(out)
}

/// Number of subspaces containing `d`, i.e. the size of the interval [d, I].
pub fn interval_above_count(d: &Subspace) -> BigUint {
    let t = (d.ambient_dim() - d.dim()) as u64;
    (0..=t)
        .map(|k| gaussian_coeff(t, k, d.field().modulus()))
        .sum()
}

/// All subspaces containing `d`.
///
/// Subspaces above `d` correspond to subspaces of the quotient by `d`; the
/// quotient is realized concretely as the coordinate complement of `d`'s
/// pivot columns, so each quotient basis row lifts to a vector supported on
/// the free columns, and the lift spans together with `d`.
pub fn enumerate_interval_above(d: &Subspace, budget: u64) -> Result<Vec<Subspace>> {
    check_budget(&interval_above_count(d), budget)?;
    let field = d.field();
    let n = d.ambient_dim();
    let pivots: Vec<usize> = d.basis().rref().pivots;
    let free_cols: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let t = free_cols.len();
    let mut out = Vec::new();
    for w in enumerate_subspaces(field, t, budget)? {
        let mut lifted_rows = Vec::with_capacity(w.dim());
        for i in 0..w.dim() {
            let mut v = vec![0u64; n];
            for (j, &col) in free_cols.iter().enumerate() {
                v[col] = w.basis().get(i, j);
            }
            lifted_rows.push(v);
        }
        let lifted = Matrix::from_rows_dim(field, n, &lifted_rows)?;
        out.push(Subspace::from_spanning(&d.basis().stack(&lifted)?));
    }
    Ok(out)
}

/// Every element of a finite lattice backend.
pub fn enumerate_lattice_elements(lattice: &Lattice, budget: u64) -> Result<Vec<Element>> {
    match lattice {
        Lattice::Subspaces { field, ambient_dim } => Ok(enumerate_subspaces(
            *field,
            *ambient_dim,
            budget,
        )?
        .into_iter()
        .map(Element::Space)
        .collect()),
        Lattice::Boolean { ground } => {
            let count = BigUint::from(1u64) << *ground;
            check_budget(&count, budget)?;
            Ok((0..(1u64 << ground)).map(Element::Set).collect())
        }
        Lattice::Table(t) => Ok((0..t.size()).map(Element::Index).collect()),
        Lattice::Product(comps) => {
            let mut count = BigUint::from(1u64);
            let mut parts = Vec::with_capacity(comps.len());
            for c in comps {
                let elems = enumerate_lattice_elements(c, budget)?;
                count *= BigUint::from(elems.len());
                check_budget(&count, budget)?;
                parts.push(elems);
            }
            Ok(parts
                .into_iter()
                .multi_cartesian_product()
                .map(Element::Tuple)
                .collect())
        }
    }
}

fn q_of(field: FieldSpec) -> u64 {
    field.modulus()
}
