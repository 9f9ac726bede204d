//! Crate-wide error type.

/// Errors produced by matrix construction, factorization, model building and
/// the experiment harness.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("matrix dimensions must be at least 1x1, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("{context}: expected length {expected}, got {actual}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("{context}: incompatible shapes {left_rows}x{left_cols} and {right_rows}x{right_cols}")]
    ShapeMismatch {
        context: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("{context}: non-finite value encountered")]
    NonFinite { context: &'static str },

    #[error("{context}: input is empty")]
    EmptyInput { context: &'static str },

    #[error(
        "SVD of a {rows}x{cols} matrix did not converge after {sweeps} sweeps \
         (largest off-diagonal inner product {residual:e})"
    )]
    SvdNonConvergence {
        rows: usize,
        cols: usize,
        sweeps: usize,
        residual: f64,
    },

    #[error("model order {order} outside valid range 1..={max}")]
    OrderOutOfRange { order: usize, max: usize },

    #[error("frequencies must be distinct rationals in [0, 1)")]
    InvalidFrequencies,

    #[error("data generator requires exactly {expected} coefficients, got {actual}")]
    CoefficientCount { expected: usize, actual: usize },

    #[error("noise variance must be finite and nonnegative, got {value}")]
    InvalidNoiseVariance { value: f64 },

    #[error("ridge penalty must be positive and finite, got {lambda}")]
    InvalidRidgePenalty { lambda: f64 },

    #[error("{context}: zero singular value")]
    ZeroSingularValue { context: &'static str },

    #[error("NMSE reference values are all zero")]
    ZeroNmseReference,

    #[error("spectrum sweep carries no theta-star norms (no data generator was supplied)")]
    MissingThetaStarNorms,

    #[error("invalid experiment config: {reason}")]
    InvalidConfig { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
