//! Minimum-norm and ridge least-squares regression over complex-exponential
//! model classes, with the singular-spectrum machinery that explains the
//! double-descent shape of the test error, and a deterministic Monte-Carlo
//! experiment harness.
//!
//! The crate is organized around a handful of pieces:
//!
//! * [`linalg`] -- dense complex matrices, a one-sided Jacobi SVD, and the
//!   truncating pseudo-inverse;
//! * [`model`] -- frequency-set model structures (linear/optimal/custom
//!   orderings), regression matrices, and data generators;
//! * [`estimators`] -- minimum-norm and ridge fits plus closed-form
//!   bias/variance reports;
//! * [`spectrum`] -- smallest-singular-value sweeps, interlacing checks for
//!   column appends, and parameter-norm diagnostics;
//! * [`harness`] -- the seeded experiment cases (A-D) and NMSE aggregation;
//! * [`rng`] -- deterministic ChaCha12 substreams and circular complex
//!   Gaussian sampling.
//!
//! All numeric code is generic over the real scalar behind the complex
//! arithmetic (see [`Scalar`]); the aliases below pin the two concrete
//! instantiations. Experiments use `f64`.

pub mod error;
pub mod estimators;
pub mod harness;
pub mod linalg;
pub mod model;
pub mod rng;
mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::Scalar;

/// Dense complex matrix over `f64` scalars.
pub type ComplexMatrix64 = linalg::ComplexMatrix<f64>;
/// Dense complex matrix over `f32` scalars.
pub type ComplexMatrix32 = linalg::ComplexMatrix<f32>;
/// SVD factorization over `f64` scalars.
pub type SvdFactorization64 = linalg::SvdFactorization<f64>;
/// SVD factorization over `f32` scalars.
pub type SvdFactorization32 = linalg::SvdFactorization<f32>;
/// Data generator over `f64` scalars.
pub type DataGenerator64 = model::DataGenerator<f64>;
/// Experiment configuration over `f64` scalars.
pub type ExperimentConfig64 = harness::ExperimentConfig<f64>;
/// Case result over `f64` scalars.
pub type CaseResult64 = harness::CaseResult<f64>;
