use num::BigUint;
use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("modulus {0} is not a prime in [2, 2^31)")]
    NotPrime(u64),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("element does not belong to this lattice")]
    LatticeMismatch,
    #[error("operation not supported by this lattice backend: {0}")]
    UnsupportedBackend(&'static str),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("setup failed after {0} attempts; the policy is degenerate at these parameters")]
    SetupFailure(u32),
    #[error("identity hashing failed after {0} attempts")]
    H1Failure(u32),
    #[error("encryption failed after {0} attempts")]
    EncryptionFailure(u32),
    #[error("issuance bound {0} reached; no further private keys may be extracted")]
    IssuanceExhausted(u64),
    #[error("extraction rejected: {0}")]
    ExtractionDegenerate(&'static str),
    #[error("message length: expected {expected_bits} bits ({expected_bytes} bytes), got {got_bytes} bytes")]
    MessageLength {
        expected_bits: usize,
        expected_bytes: usize,
        got_bytes: usize,
    },
    #[error("ciphertext header does not match these public parameters")]
    HeaderMismatch,
    #[error("enumeration of {count} elements exceeds budget {budget}")]
    BudgetExceeded { count: BigUint, budget: u64 },
    #[error("game protocol violation: {0}")]
    ProtocolViolation(String),
    #[error("invalid {what}: {detail}")]
    InvalidParameter { what: &'static str, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
