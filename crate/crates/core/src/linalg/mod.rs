//! Dense complex linear algebra: matrices, SVD, pseudo-inverse.

mod matrix;
mod svd;

pub use matrix::{hermitian_dot, vector_norm, ComplexMatrix};
pub use svd::{pseudo_inverse_apply, svd, svd_with_tolerance, SvdFactorization, MAX_SWEEPS};
