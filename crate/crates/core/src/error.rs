//! Crate-wide error type.

use num_bigint::BigInt;

/// Errors produced by the exact-arithmetic and group machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Exact division by zero (rational inversion, `checked_div`).
    #[error("division by zero")]
    DivisionByZero,

    /// A q-Pochhammer or q-binomial denominator factor vanished.
    #[error("vanishing denominator: {0}")]
    VanishingDenominator(String),

    /// Group specification rejected at construction.
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    /// Field order not supported by the extension-field machinery.
    #[error("unsupported field: {0}")]
    UnsupportedField(String),

    /// Group too large for exhaustive enumeration.
    #[error("group order {order} exceeds enumeration cap {cap}")]
    EnumerationTooLarge { order: BigInt, cap: u64 },

    /// No random-element sampler exists for the requested group.
    #[error("unsupported sampling: {0}")]
    UnsupportedSampling(String),

    /// Out-of-range argument (zero trials, non-positive tolerance, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Matrix shape violation (non-square input, dimension mismatch).
    #[error("shape error: {0}")]
    Shape(String),
}

pub type Result<T> = std::result::Result<T, Error>;
