//! Trial fan-out for Monte Carlo drivers.
//!
//! Each trial index maps to an independent result; merging is commutative and
//! associative, so the parallel and sequential paths produce identical
//! reports for the same seed.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum ExecMode {
    /// Parallel when the `parallel` feature is enabled, sequential otherwise.
    Auto,
    Sequential,
}

pub(crate) fn reduce_trials<R, Map, Id, Merge>(
    trials: u64,
    mode: ExecMode,
    map: Map,
    identity: Id,
    merge: Merge,
) -> R
where
    R: Send,
    Map: Fn(u64) -> R + Sync + Send,
    Id: Fn() -> R + Sync + Send,
    Merge: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Auto {
        return (0..trials).into_par_iter().map(&map).reduce(&identity, &merge);
    }
    let _ = mode;
    (0..trials).fold(identity(), |acc, i| merge(acc, map(i)))
}

pub(crate) fn try_reduce_trials<R, Map, Id, Merge>(
    trials: u64,
    mode: ExecMode,
    map: Map,
    identity: Id,
    merge: Merge,
) -> crate::Result<R>
where
    R: Send,
    Map: Fn(u64) -> crate::Result<R> + Sync + Send,
    Id: Fn() -> R + Sync + Send,
    Merge: Fn(R, R) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if mode == ExecMode::Auto {
        return (0..trials)
            .into_par_iter()
            .map(&map)
            .try_reduce(&identity, |a, b| Ok(merge(a, b)));
    }
    let _ = mode;
    let mut acc = identity();
    for i in 0..trials {
        acc = merge(acc, map(i)?);
    }
    Ok(acc)
}
