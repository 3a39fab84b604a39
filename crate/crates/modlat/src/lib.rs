//! Identity-based encryption over the modular lattice of subspaces of F_q^n,
//! together with the exact combinatorics and Monte Carlo machinery needed to
//! study it at desk scale.
//!
//! The crate is organized in layers:
//!
//! - [`field`] and [`matrix`]: prime-field arithmetic and dense row reduction,
//!   the computational kernel everything else builds on.
//! - [`subspace`] and [`lattice`]: canonical subspace values and bounded
//!   lattices with subspace, Boolean, product, and table backends, including
//!   checkable modular/distributive laws and complements.
//! - [`pairing`]: the lattice pairing `(x, y) -> d . (x + y)` with its
//!   bilinearity check over the acting interval `[d, I]`, the distributive
//!   collapse value, and an empirical nondegeneracy report.
//! - [`ibe`]: the encryption scheme itself (setup, extract, encrypt, decrypt)
//!   with hash constructions and three parameter policies.
//! - [`analysis`]: exact subspace counting and rank distributions, Monte
//!   Carlo validation, brute-force hardness oracles on tiny instances, and an
//!   indistinguishability game harness.
//!
//! Randomized operations take a caller-supplied ChaCha generator (see
//! [`rng`]) and are byte-exact for a fixed seed; Monte Carlo drivers run
//! trials in parallel when the `parallel` feature (on by default) is enabled,
//! deriving one child generator per trial so results do not depend on
//! scheduling. Sequential variants (`*_seq`) are always available.

pub mod analysis;
pub mod error;
pub mod field;
pub mod ibe;
pub mod lattice;
pub mod matrix;
pub mod pairing;
pub mod rng;
pub mod subspace;

mod par;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use lattice::{Element, Lattice};
pub use matrix::{Matrix, Rref};
pub use pairing::PairingContext;
pub use subspace::Subspace;
