//! Monte Carlo validation of the closed-form claims.
//!
//! Trials are independent: trial `i` runs under the child generator of
//! `(seed, i)`, and tallies are merged commutatively, so the parallel and
//! sequential drivers return identical reports for the same seed. The
//! `*_seq` variants exist for benchmarking the fan-out and as the fallback
//! when the `parallel` feature is off.

use crate::analysis::combinat::rank_pmf;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::ibe::{self, ParamPolicy, PolicyKind};
use crate::matrix::Matrix;
use crate::par::{reduce_trials, try_reduce_trials, ExecMode};
use crate::rng::child_rng;
use num::ToPrimitive;
use std::collections::BTreeMap;

/// Empirical rank tallies against the exact law.
#[derive(Debug, Clone, PartialEq)]
pub struct RankMonteCarlo {
    pub m: usize,
    pub n: usize,
    pub q: u64,
    pub trials: u64,
    /// `counts[r]` = number of sampled matrices of rank r.
    pub counts: Vec<u64>,
    /// Exact probabilities, as floats, aligned with `counts`.
    pub exact: Vec<f64>,
    /// Pearson statistic over the rank bins.
    pub chi_square: f64,
    pub full_rank_frequency: f64,
}

impl RankMonteCarlo {
    pub fn empirical(&self) -> Vec<f64> {
        if self.trials == 0 {
            return vec![0.0; self.counts.len()];
        }
        self.counts
            .iter()
            .map(|&c| c as f64 / self.trials as f64)
            .collect()
    }

    /// True when every rank frequency sits within `sigmas` standard
    /// deviations of its exact probability.
    pub fn within_sigma(&self, sigmas: f64) -> bool {
        if self.trials == 0 {
            return true;
        }
        let t = self.trials as f64;
        self.empirical()
            .iter()
            .zip(&self.exact)
            .all(|(&obs, &p)| (obs - p).abs() <= sigmas * (p * (1.0 - p) / t).sqrt())
    }
}

pub fn monte_carlo_rank(m: usize, n: usize, q: u64, trials: u64, seed: u64) -> Result<RankMonteCarlo> {
    monte_carlo_rank_impl(m, n, q, trials, seed, ExecMode::Auto)
}

/// Sequential twin of [`monte_carlo_rank`]; same output, single-threaded.
pub fn monte_carlo_rank_seq(
    m: usize,
    n: usize,
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<RankMonteCarlo> {
    monte_carlo_rank_impl(m, n, q, trials, seed, ExecMode::Sequential)
}

fn monte_carlo_rank_impl(
    m: usize,
    n: usize,
    q: u64,
    trials: u64,
    seed: u64,
    mode: ExecMode,
) -> Result<RankMonteCarlo> {
    let field = FieldSpec::new(q)?;
    let bins = m.min(n) + 1;
    let counts = reduce_trials(
        trials,
        mode,
        |i| {
            let mut rng = child_rng(seed, i);
            let rank = Matrix::random(m, n, field, &mut rng).rank();
            let mut c = vec![0u64; bins];
            c[rank] += 1;
            c
        },
        || vec![0u64; bins],
        merge_counts,
    );
    let exact = rank_pmf(m, n, q).to_f64();
    let chi_square = if trials == 0 {
        0.0
    } else {
        counts
            .iter()
            .zip(&exact)
            .map(|(&obs, &p)| {
                let expected = p * trials as f64;
                if expected > 0.0 {
                    (obs as f64 - expected).powi(2) / expected
                } else {
                    0.0
                }
            })
            .sum()
    };
    let full_rank_frequency = if trials == 0 {
        0.0
    } else {
        *counts.last().unwrap_or(&0) as f64 / trials as f64
    };
    Ok(RankMonteCarlo {
        m,
        n,
        q,
        trials,
        counts,
        exact,
        chi_square,
        full_rank_frequency,
    })
}

fn merge_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

/// Full-rank frequency across a family of shapes, for trend inspection
/// (e.g. fixed m/n ratio with growing n).
#[derive(Debug, Clone, PartialEq)]
pub struct TrendRow {
    pub m: usize,
    pub n: usize,
    pub frequency: f64,
    pub exact: f64,
}

pub fn full_rank_trend(
    shapes: &[(usize, usize)],
    q: u64,
    trials: u64,
    seed: u64,
) -> Result<Vec<TrendRow>> {
    shapes
        .iter()
        .enumerate()
        .map(|(idx, &(m, n))| {
            let mc = monte_carlo_rank(m, n, q, trials, seed.wrapping_add(idx as u64))?;
            Ok(TrendRow {
                m,
                n,
                frequency: mc.full_rank_frequency,
                exact: rank_pmf(m, n, q).full_rank().to_f64().unwrap_or(f64::NAN),
            })
        })
        .collect()
}

/// Observed dimensions along the encryption chain, over repeated fresh
/// setups: `Q_ID . r`, `P_pub`, their join, and the session key
/// `d . (Q_ID.r + P_pub)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DimChainStats {
    pub n: usize,
    pub q: u64,
    pub trials: u64,
    pub q_meet_r: BTreeMap<usize, u64>,
    pub p_pub: BTreeMap<usize, u64>,
    pub join: BTreeMap<usize, u64>,
    pub pairing_value: BTreeMap<usize, u64>,
    /// Predicted (Q.r and P_pub, join, pairing value) dimensions:
    /// ceil(3n/8), ceil(3n/4), ceil(n/16).
    pub predicted: (usize, usize, usize),
}

impl DimChainStats {
    /// Fraction of trials in which `hist` hit dimension `dim`.
    pub fn rate(hist: &BTreeMap<usize, u64>, dim: usize, trials: u64) -> f64 {
        if trials == 0 {
            return 0.0;
        }
        *hist.get(&dim).unwrap_or(&0) as f64 / trials as f64
    }

    pub fn predicted_rates(&self) -> (f64, f64, f64, f64) {
        let (lo, mid, hi) = self.predicted;
        (
            Self::rate(&self.q_meet_r, lo, self.trials),
            Self::rate(&self.p_pub, lo, self.trials),
            Self::rate(&self.join, mid, self.trials),
            Self::rate(&self.pairing_value, hi, self.trials),
        )
    }
}

/// Runs `trials` independent setup/hash/encrypt cycles under the fractional
/// policy and tabulates the dimension chain.
pub fn protocol_dim_stats(policy: &ParamPolicy, trials: u64, seed: u64) -> Result<DimChainStats> {
    protocol_dim_stats_impl(policy, trials, seed, ExecMode::Auto)
}

fn protocol_dim_stats_impl(
    policy: &ParamPolicy,
    trials: u64,
    seed: u64,
    mode: ExecMode,
) -> Result<DimChainStats> {
    if policy.kind() != PolicyKind::Vector16ths {
        return Err(Error::Precondition(
            "dimension-chain statistics are defined for the vector16ths policy".into(),
        ));
    }
    let n = policy.ambient_dim();
    type Hists = (
        BTreeMap<usize, u64>,
        BTreeMap<usize, u64>,
        BTreeMap<usize, u64>,
        BTreeMap<usize, u64>,
    );
    let message = vec![0u8; policy.message_bytes()];
    let (q_meet_r, p_pub, join, pairing_value) = try_reduce_trials(
        trials,
        mode,
        |i| -> Result<Hists> {
            let mut rng = child_rng(seed, i);
            let (params, _msk) = ibe::setup(policy, &mut rng)?;
            let id = format!("trial-{i}");
            let (_ct, trace) = ibe::encrypt_traced(&params, id.as_bytes(), &message, &mut rng)?;
            let mut h: Hists = Default::default();
            *h.0.entry(trace.q_meet_r.dim()).or_insert(0) += 1;
            *h.1.entry(params.p_pub().dim()).or_insert(0) += 1;
            *h.2.entry(trace.joined_with_p_pub.dim()).or_insert(0) += 1;
            *h.3.entry(trace.session_key.dim()).or_insert(0) += 1;
            Ok(h)
        },
        Hists::default,
        |mut a, b| {
            merge_hist(&mut a.0, b.0);
            merge_hist(&mut a.1, b.1);
            merge_hist(&mut a.2, b.2);
            merge_hist(&mut a.3, b.3);
            a
        },
    )?;
    Ok(DimChainStats {
        n,
        q: policy.field().modulus(),
        trials,
        q_meet_r,
        p_pub,
        join,
        pairing_value,
        predicted: (
            (3 * n).div_ceil(8),
            (3 * n).div_ceil(4),
            n.div_ceil(16),
        ),
    })
}

fn merge_hist(a: &mut BTreeMap<usize, u64>, b: BTreeMap<usize, u64>) {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
}
