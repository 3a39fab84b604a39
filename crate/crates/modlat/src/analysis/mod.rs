//! Quantitative study of the scheme: exact counting, Monte Carlo validation,
//! brute-force hardness oracles, and an indistinguishability game harness.
//!
//! Closed-form quantities (subspace counts, rank distributions, expected
//! dimensions) are computed in exact rational arithmetic; Monte Carlo
//! comparisons use a 3-sigma normal band around the exact values, so no
//! floating-point tolerance ever enters a correctness claim.

pub mod combinat;
pub mod enumerate;
pub mod game;
pub mod montecarlo;
pub mod oracle;

pub use combinat::{
    count_containing_spaces, expected_dims, gaussian_coeff, rank_pmf, verify_counting_bound,
    CountingBound, ExpectedDims, RankDistribution,
};
pub use enumerate::{
    enumerate_interval_above, enumerate_lattice_elements, enumerate_subspaces,
    enumerate_subspaces_of_dim, interval_above_count, subspace_count,
};
pub use game::{run_cpa_game, run_cpa_game_seq, AdversaryKind, GameConfig, GameReport};
pub use montecarlo::{
    full_rank_trend, monte_carlo_rank, monte_carlo_rank_seq, protocol_dim_stats, DimChainStats,
    RankMonteCarlo, TrendRow,
};
pub use oracle::{action_preimages, brute_force_bdh, BdhCandidates};
