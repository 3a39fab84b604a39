//! Exact subspace counting and the rank law of uniform matrices.
//!
//! Everything here is integer or rational arithmetic; the only approximation
//! in this module is the optional `f64` view on a result.

use crate::error::{Error, Result};
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{BigUint, One, ToPrimitive, Zero};

/// Number of k-dimensional subspaces of an n-dimensional space over F_q.
///
/// Computed by the telescoping product
/// `prod_{i=1..k} (q^{n-k+i} - 1) / (q^i - 1)` with exact division at every
/// step; each partial product is itself a subspace count, so the division
/// never truncates. By convention the value is zero for `k > n`.
pub fn gaussian_coeff(n: u64, k: u64, q: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut acc = BigUint::one();
    for i in 1..=k {
        let numerator = q.pow((n - k + i) as u32) - 1u32;
        let denominator = q.pow(i as u32) - 1u32;
        let product = acc * numerator;
        debug_assert!((&product % &denominator).is_zero());
        acc = product / denominator;
    }
    acc
}

/// Exact distribution of the rank of a uniform m x n matrix over F_q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDistribution {
    pub m: usize,
    pub n: usize,
    pub q: u64,
    /// `probabilities[r]` is Pr(rank = r) for `0 <= r <= min(m, n)`.
    pub probabilities: Vec<BigRational>,
}

impl RankDistribution {
    pub fn probability(&self, r: usize) -> BigRational {
        self.probabilities
            .get(r)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    /// Pr(rank = min(m, n)).
    pub fn full_rank(&self) -> BigRational {
        self.probabilities
            .last()
            .cloned()
            .unwrap_or_else(BigRational::one)
    }

    /// Expected rank.
    pub fn mean(&self) -> BigRational {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(r, p)| BigRational::from(BigInt::from(r)) * p)
            .sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.probabilities
            .iter()
            .map(|p| p.to_f64().unwrap_or(f64::NAN))
            .collect()
    }
}

/// One minus q^(i - e), as an exact rational: (q^(e-i) - 1) / q^(e-i).
fn one_minus_q_pow_neg(q: u64, e: u64, i: u64) -> BigRational {
    debug_assert!(e > i);
    let power = BigInt::from(q).pow((e - i) as u32);
    BigRational::new(&power - 1, power)
}

/// Rank law of the uniform m x n matrix over F_q:
///
/// `Pr(rank = r) = q^{-(n-r)(m-r)} prod_{i=0..r-1}
///     (1 - q^{i-n}) (1 - q^{i-m}) / (1 - q^{i-r})`.
///
/// The formula is symmetric in m and n (rank is transpose-invariant), so no
/// `m <= n` assumption is needed.
pub fn rank_pmf(m: usize, n: usize, q: u64) -> RankDistribution {
    let max_rank = m.min(n);
    let mut probabilities = Vec::with_capacity(max_rank + 1);
    for r in 0..=max_rank {
        let lead = BigRational::new(
            BigInt::one(),
            BigInt::from(q).pow(((n - r) * (m - r)) as u32),
        );
        let mut p = lead;
        for i in 0..r {
            p *= one_minus_q_pow_neg(q, n as u64, i as u64);
            p *= one_minus_q_pow_neg(q, m as u64, i as u64);
            p /= one_minus_q_pow_neg(q, r as u64, i as u64);
        }
        probabilities.push(p);
    }
    RankDistribution {
        m,
        n,
        q,
        probabilities,
    }
}

/// Expected dimensions of two random spans and of their join and meet.
///
/// The spans of m1 and m2 uniform vectors have the rank law above; the join
/// is spanned by the stacked m1+m2 vectors, and the meet follows from
/// `E(dim meet) = E(dim V1) + E(dim V2) - E(dim join)` since dimension is
/// additive in exactly that way pair by pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpectedDims {
    pub dim1: BigRational,
    pub dim2: BigRational,
    pub union: BigRational,
    pub intersection: BigRational,
}

pub fn expected_dims(m1: usize, m2: usize, n: usize, q: u64) -> ExpectedDims {
    let dim1 = rank_pmf(m1, n, q).mean();
    let dim2 = rank_pmf(m2, n, q).mean();
    let union = rank_pmf(m1 + m2, n, q).mean();
    let intersection = &dim1 + &dim2 - &union;
    ExpectedDims {
        dim1,
        dim2,
        union,
        intersection,
    }
}

/// Number of `outer_dim`-dimensional spaces of F_q^n containing a fixed
/// `inner_dim`-dimensional space.
///
/// By duality this is the number of `(outer-inner)`-dimensional subspaces of
/// the `(n-inner)`-dimensional quotient.
pub fn count_containing_spaces(
    n: usize,
    inner_dim: usize,
    outer_dim: usize,
    q: u64,
) -> Result<BigUint> {
    if inner_dim > outer_dim || outer_dim > n {
        return Err(Error::Precondition(format!(
            "need inner <= outer <= n, got {inner_dim} <= {outer_dim} <= {n}"
        )));
    }
    Ok(gaussian_coeff(
        (n - inner_dim) as u64,
        (outer_dim - inner_dim) as u64,
        q,
    ))
}

/// The containment-count lower bound at the fractional policy dimensions:
/// spaces of dimension ceil(3n/4) containing a fixed ceil(n/2)-dimensional
/// space, compared against q^(n^2/16).
#[derive(Debug, Clone)]
pub struct CountingBound {
    pub count: BigUint,
    pub bound: BigUint,
    pub holds: bool,
}

pub fn verify_counting_bound(n: usize, q: u64) -> Result<CountingBound> {
    let inner = n.div_ceil(2);
    let outer = (3 * n).div_ceil(4);
    let count = count_containing_spaces(n, inner, outer, q)?;
    let bound = BigUint::from(q).pow((n * n / 16) as u32);
    let holds = count >= bound;
    Ok(CountingBound {
        count,
        bound,
        holds,
    })
}
