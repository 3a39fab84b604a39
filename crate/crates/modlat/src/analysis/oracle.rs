//! Brute-force oracles for the scheme's hardness assumptions, feasible only
//! on tiny instances and guarded by enumeration budgets.
//!
//! The action-preimage oracle inverts the meet action of `[d, I]` (the
//! discrete-log analogue); the session-key oracle recovers every pairing
//! value consistent with a ciphertext (the Diffie-Hellman analogue). Both
//! measure ambiguity — the size of the returned set — rather than a single
//! answer, since the action is far from free.

use crate::analysis::enumerate::enumerate_interval_above;
use crate::error::{Error, Result};
use crate::ibe::PublicParams;
use crate::lattice::Element;
use crate::pairing::{pair_subspaces, PairingContext};
use crate::subspace::Subspace;
use std::collections::HashSet;

/// All acting elements `a` in `[d, I]` with `a . x = y`.
///
/// The interval is enumerated exhaustively (via the quotient by `d`), so the
/// instance must be small; enumeration is refused with the exact interval
/// size when it exceeds `budget`. An empty result for `y <= x` failing is
/// immediate since `a . x <= x` always.
pub fn action_preimages(
    ctx: &PairingContext,
    x: &Element,
    y: &Element,
    budget: u64,
) -> Result<Vec<Element>> {
    let (Element::Space(x), Element::Space(y)) = (x, y) else {
        return Err(Error::UnsupportedBackend(
            "action preimages are enumerated on the subspace backend",
        ));
    };
    let Element::Space(d) = ctx.d() else {
        return Err(Error::UnsupportedBackend(
            "action preimages are enumerated on the subspace backend",
        ));
    };
    if !y.leq(x)? {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for a in enumerate_interval_above(d, budget)? {
        if a.meet(x)? == *y {
            out.push(Element::Space(a));
        }
    }
    Ok(out)
}

/// Candidate session keys consistent with one ciphertext.
#[derive(Debug, Clone)]
pub struct BdhCandidates {
    /// Distinct pairing values `e_d(Q_ID . r, P_pub)` over all admissible r.
    pub candidates: Vec<Subspace>,
    /// Number of interval elements r that matched `r . P = U`.
    pub matching_ephemerals: u64,
}

impl BdhCandidates {
    pub fn contains(&self, key: &Subspace) -> bool {
        self.candidates.contains(key)
    }

    /// Set size as the ambiguity measure; 1 means full key recovery.
    pub fn ambiguity(&self) -> usize {
        self.candidates.len()
    }
}

/// Recovers the possible session keys for `(Q_ID, P_pub, U, P)` by
/// exhausting every `r` in `[d, I]` of policy dimension with `r . P = U`
/// and collecting `e_d(Q_ID . r, P_pub)`.
///
/// The true session key of any honest encryption is always a member. A
/// degenerate `U` (say, the zero space) simply matches more ephemerals and
/// widens the candidate set; that is reported, not an error.
pub fn brute_force_bdh(
    params: &PublicParams,
    q_id: &Subspace,
    u: &Subspace,
    budget: u64,
) -> Result<BdhCandidates> {
    let admissible_dims = params.policy().s_dims();
    let mut seen = HashSet::new();
    let mut candidates = Vec::new();
    let mut matching = 0u64;
    for r in enumerate_interval_above(params.d(), budget)? {
        if !admissible_dims.contains(&r.dim()) {
            continue;
        }
        if r.meet(params.p())? != *u {
            continue;
        }
        matching += 1;
        let key = pair_subspaces(params.d(), &q_id.meet(&r)?, params.p_pub())?;
        if seen.insert(key.canonical_bytes()) {
            candidates.push(key);
        }
    }
    Ok(BdhCandidates {
        candidates,
        matching_ephemerals: matching,
    })
}
