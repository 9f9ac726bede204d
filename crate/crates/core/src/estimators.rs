//! Minimum-norm and ridge least-squares estimation, prediction, and the
//! closed-form bias/variance reports.
//!
//! Everything here is expressed through the SVD of the regression matrix.
//! With `Phi = sum_k sigma_k u_k v_k^H`:
//!
//! * minimum norm: `theta = sum_k (1/sigma_k) v_k u_k^H y`, singular values
//!   at or below the rank tolerance excluded;
//! * ridge with penalty `lambda > 0`:
//!   `theta = sum_k sigma_k/(sigma_k^2 + lambda) v_k u_k^H y`.
//!
//! Reports are computed from these closed forms, never by Monte-Carlo, so
//! simulation can cross-validate them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{
    hermitian_dot, pseudo_inverse_apply, svd, vector_norm, ComplexMatrix, SvdFactorization,
};
use crate::model::{regression_matrix, Dataset, ModelStructure};
use crate::scalar::{as_f64, Scalar};

/// Which least-squares estimator produced a fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimatorKind<T: Scalar> {
    MinNorm,
    Ridge { lambda: T },
}

impl<T: Scalar> EstimatorKind<T> {
    pub fn validate(&self) -> Result<()> {
        if let Self::Ridge { lambda } = self {
            if !lambda.is_finite() || *lambda <= T::zero() {
                return Err(Error::InvalidRidgePenalty {
                    lambda: as_f64(*lambda),
                });
            }
        }
        Ok(())
    }
}

/// A fitted model: structure, parameter vector, and the estimator used.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel<T: Scalar> {
    structure: ModelStructure,
    theta: Vec<Complex<T>>,
    kind: EstimatorKind<T>,
}

impl<T: Scalar> FittedModel<T> {
    pub fn structure(&self) -> &ModelStructure {
        &self.structure
    }

    pub fn theta(&self) -> &[Complex<T>] {
        &self.theta
    }

    pub fn kind(&self) -> EstimatorKind<T> {
        self.kind
    }

    pub fn parameter_norm(&self) -> T {
        vector_norm(&self.theta)
    }

    /// Model output `phi(x) theta`.
    pub fn predict(&self, x: T) -> Complex<T> {
        let row = self.structure.basis_row(x);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (phi_i, theta_i) in row.iter().zip(&self.theta) {
            acc += *phi_i * *theta_i;
        }
        acc
    }

    pub fn predict_many(&self, xs: &[T]) -> Vec<Complex<T>> {
        xs.iter().map(|&x| self.predict(x)).collect()
    }
}

/// Minimum-norm solution from a precomputed factorization.
pub fn min_norm_theta<T: Scalar>(
    f: &SvdFactorization<T>,
    y: &[Complex<T>],
) -> Result<Vec<Complex<T>>> {
    pseudo_inverse_apply(f, y)
}

/// Ridge solution from a precomputed factorization; `lambda > 0`.
pub fn ridge_theta<T: Scalar>(
    f: &SvdFactorization<T>,
    y: &[Complex<T>],
    lambda: T,
) -> Result<Vec<Complex<T>>> {
    EstimatorKind::Ridge { lambda }.validate()?;
    if y.len() != f.data_rows() {
        return Err(Error::DimensionMismatch {
            context: "ridge_theta",
            expected: f.data_rows(),
            actual: y.len(),
        });
    }
    let n = f.parameter_count();
    let mut out = vec![Complex::new(T::zero(), T::zero()); n];
    for (k, &sigma) in f.singular_values().iter().enumerate() {
        let weight = sigma / (sigma * sigma + lambda);
        let mut coef = Complex::new(T::zero(), T::zero());
        for (i, value) in y.iter().enumerate() {
            coef += f.left_vectors().get(i, k).conj() * *value;
        }
        coef = coef.scale(weight);
        for (j, slot) in out.iter_mut().enumerate() {
            *slot += f.right_vectors().get(j, k) * coef;
        }
    }
    Ok(out)
}

/// Solve from a factorization according to the estimator kind.
pub fn estimate_theta<T: Scalar>(
    f: &SvdFactorization<T>,
    y: &[Complex<T>],
    kind: EstimatorKind<T>,
) -> Result<Vec<Complex<T>>> {
    match kind {
        EstimatorKind::MinNorm => min_norm_theta(f, y),
        EstimatorKind::Ridge { lambda } => ridge_theta(f, y, lambda),
    }
}

/// Fits the unique minimum-norm least-squares solution on a dataset.
pub fn fit_min_norm<T: Scalar>(
    structure: &ModelStructure,
    data: &Dataset<T>,
) -> Result<FittedModel<T>> {
    let phi = regression_matrix(structure, data.inputs())?;
    let f = svd(&phi)?;
    Ok(FittedModel {
        structure: structure.clone(),
        theta: min_norm_theta(&f, data.outputs())?,
        kind: EstimatorKind::MinNorm,
    })
}

/// Fits the ridge solution `argmin ||y - Phi theta||^2 + lambda ||theta||^2`.
pub fn fit_ridge<T: Scalar>(
    structure: &ModelStructure,
    data: &Dataset<T>,
    lambda: T,
) -> Result<FittedModel<T>> {
    let phi = regression_matrix(structure, data.inputs())?;
    let f = svd(&phi)?;
    Ok(FittedModel {
        structure: structure.clone(),
        theta: ridge_theta(&f, data.outputs(), lambda)?,
        kind: EstimatorKind::Ridge { lambda },
    })
}

/// Decomposition of the estimate into the noise-free solution and the
/// distribution of the noise contribution: `theta_hat = theta_star +
/// theta_tilde` with `cov(theta_tilde) = r_z * covariance_factor`.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorDecomposition<T: Scalar> {
    theta_star: Vec<Complex<T>>,
    covariance_factor: ComplexMatrix<T>,
    noise_variance: T,
    kind: EstimatorKind<T>,
}

impl<T: Scalar> ErrorDecomposition<T> {
    /// Noise-free solution `theta_star`.
    pub fn theta_star(&self) -> &[Complex<T>] {
        &self.theta_star
    }

    /// Hermitian PSD matrix `sum_k w_k v_k v_k^H` with `w_k = 1/sigma_k^2`
    /// (minimum norm) or `sigma_k^2/(sigma_k^2 + lambda)^2` (ridge).
    pub fn covariance_factor(&self) -> &ComplexMatrix<T> {
        &self.covariance_factor
    }

    pub fn noise_variance(&self) -> T {
        self.noise_variance
    }

    pub fn kind(&self) -> EstimatorKind<T> {
        self.kind
    }
}

/// Splits the estimate on `phi` for noise-free values `f0_values` into
/// `theta_star` plus the covariance factor of the noise term.
pub fn decompose_error<T: Scalar>(
    phi: &ComplexMatrix<T>,
    f0_values: &[Complex<T>],
    kind: EstimatorKind<T>,
    noise_variance: T,
) -> Result<ErrorDecomposition<T>> {
    kind.validate()?;
    if f0_values.len() != phi.rows() {
        return Err(Error::DimensionMismatch {
            context: "decompose_error",
            expected: phi.rows(),
            actual: f0_values.len(),
        });
    }
    let f = svd(phi)?;
    let theta_star = match kind {
        EstimatorKind::MinNorm => min_norm_theta(&f, f0_values)?,
        EstimatorKind::Ridge { lambda } => ridge_theta(&f, f0_values, lambda)?,
    };

    let n = f.parameter_count();
    let mut entries = vec![Complex::new(T::zero(), T::zero()); n * n];
    for (k, &sigma) in f.singular_values().iter().enumerate() {
        let weight = match kind {
            EstimatorKind::MinNorm => {
                if k >= f.rank() {
                    continue; // excluded, never inverted
                }
                T::one() / (sigma * sigma)
            }
            EstimatorKind::Ridge { lambda } => {
                let denom = sigma * sigma + lambda;
                sigma * sigma / (denom * denom)
            }
        };
        for i in 0..n {
            let vi = f.right_vectors().get(i, k).scale(weight);
            for j in 0..n {
                entries[i * n + j] += vi * f.right_vectors().get(j, k).conj();
            }
        }
    }
    let covariance_factor = ComplexMatrix::from_fn(n, n, |i, j| entries[i * n + j]);
    Ok(ErrorDecomposition {
        theta_star,
        covariance_factor,
        noise_variance,
        kind,
    })
}

/// Prediction-error variance at a test point:
/// `R_e(x) = r_z * phi(x) C phi(x)^H` with C the covariance factor.
pub fn prediction_variance<T: Scalar>(
    decomposition: &ErrorDecomposition<T>,
    structure: &ModelStructure,
    x: T,
) -> Result<T> {
    let n = decomposition.covariance_factor.rows();
    if structure.order() != n {
        return Err(Error::DimensionMismatch {
            context: "prediction_variance",
            expected: n,
            actual: structure.order(),
        });
    }
    let row = structure.basis_row(x);
    let conj_row: Vec<Complex<T>> = row.iter().map(|e| e.conj()).collect();
    let image = decomposition.covariance_factor.matvec(&conj_row)?;
    let mut quad = Complex::new(T::zero(), T::zero());
    for (phi_i, im_i) in row.iter().zip(&image) {
        quad += *phi_i * *im_i;
    }
    // Hermitian quadratic form: real up to roundoff.
    Ok((decomposition.noise_variance * quad.re).max(T::zero()))
}

/// What the true function is, for bias evaluation.
pub enum TrueModel<'a, T: Scalar> {
    /// Correctly specified: `f0(x) = phi(x) theta0` with `theta0` of length n.
    InClass { theta0: &'a [Complex<T>] },
    /// Misspecified: `f0` given by its values at the training inputs and at
    /// the test points.
    OutOfClass {
        f0_train: &'a [Complex<T>],
        f0_test: &'a [Complex<T>],
    },
}

/// Expected prediction error per test point, plus the rank of the projector
/// `I - pinv(Phi) Phi` at the rank tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasReport<T: Scalar> {
    expected_errors: Vec<Complex<T>>,
    projection_rank: usize,
}

impl<T: Scalar> BiasReport<T> {
    pub fn expected_errors(&self) -> &[Complex<T>] {
        &self.expected_errors
    }

    pub fn projection_rank(&self) -> usize {
        self.projection_rank
    }

    pub fn max_error_magnitude(&self) -> T {
        self.expected_errors
            .iter()
            .map(|e| e.norm_sqr().sqrt())
            .fold(T::zero(), T::max)
    }
}

/// Closed-form expected error `E e(x')` at each test point.
///
/// Correctly specified: `phi(x')(pinv(Phi) Phi - I) theta0`.
/// Misspecified: `phi(x') pinv(Phi) f0(x) - f0(x')`.
pub fn bias_report<T: Scalar>(
    phi: &ComplexMatrix<T>,
    structure: &ModelStructure,
    truth: TrueModel<'_, T>,
    test_points: &[T],
) -> Result<BiasReport<T>> {
    if structure.order() != phi.cols() {
        return Err(Error::DimensionMismatch {
            context: "bias_report structure",
            expected: phi.cols(),
            actual: structure.order(),
        });
    }
    let f = svd(phi)?;
    let projection_rank = phi.cols() - f.rank();

    let expected_errors = match truth {
        TrueModel::InClass { theta0 } => {
            if theta0.len() != phi.cols() {
                return Err(Error::DimensionMismatch {
                    context: "bias_report theta0",
                    expected: phi.cols(),
                    actual: theta0.len(),
                });
            }
            let projected = pseudo_inverse_apply(&f, &phi.matvec(theta0)?)?;
            let residual: Vec<Complex<T>> = projected
                .iter()
                .zip(theta0)
                .map(|(p, t)| *p - *t)
                .collect();
            test_points
                .iter()
                .map(|&x| {
                    let row = structure.basis_row(x);
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for (r, d) in row.iter().zip(&residual) {
                        acc += *r * *d;
                    }
                    acc
                })
                .collect()
        }
        TrueModel::OutOfClass { f0_train, f0_test } => {
            if f0_train.len() != phi.rows() {
                return Err(Error::DimensionMismatch {
                    context: "bias_report f0_train",
                    expected: phi.rows(),
                    actual: f0_train.len(),
                });
            }
            if f0_test.len() != test_points.len() {
                return Err(Error::DimensionMismatch {
                    context: "bias_report f0_test",
                    expected: test_points.len(),
                    actual: f0_test.len(),
                });
            }
            let theta_star = pseudo_inverse_apply(&f, f0_train)?;
            test_points
                .iter()
                .zip(f0_test)
                .map(|(&x, f0x)| {
                    let row = structure.basis_row(x);
                    let mut acc = Complex::new(T::zero(), T::zero());
                    for (r, t) in row.iter().zip(&theta_star) {
                        acc += *r * *t;
                    }
                    acc - *f0x
                })
                .collect()
        }
    };

    Ok(BiasReport {
        expected_errors,
        projection_rank,
    })
}

/// `||(pinv(Phi) Phi - I) theta0||`: zero iff `theta0` lies in the row space
/// of `Phi` (within tolerance).
pub fn row_space_bias_indicator<T: Scalar>(
    phi: &ComplexMatrix<T>,
    theta0: &[Complex<T>],
) -> Result<T> {
    if theta0.len() != phi.cols() {
        return Err(Error::DimensionMismatch {
            context: "row_space_bias_indicator",
            expected: phi.cols(),
            actual: theta0.len(),
        });
    }
    let f = svd(phi)?;
    // pinv(Phi) Phi theta0 = sum_{k < rank} v_k (v_k^H theta0)
    let mut projected = vec![Complex::new(T::zero(), T::zero()); theta0.len()];
    for k in 0..f.rank() {
        let vk = f.right_vectors().column(k);
        let coef = hermitian_dot(&vk, theta0);
        for (slot, v) in projected.iter_mut().zip(&vk) {
            *slot += *v * coef;
        }
    }
    let diff: Vec<Complex<T>> = projected
        .iter()
        .zip(theta0)
        .map(|(p, t)| *p - *t)
        .collect();
    Ok(vector_norm(&diff))
}

/// `sum_k 1/sigma_k^2 - r^2 / sum_k sigma_k^2`: nonnegative, zero exactly
/// when all singular values are equal. Fails on a zero singular value.
pub fn variance_optimality_gap<T: Scalar>(f: &SvdFactorization<T>) -> Result<T> {
    let sigma = f.singular_values();
    if sigma.iter().any(|s| *s <= T::zero()) {
        return Err(Error::ZeroSingularValue {
            context: "variance_optimality_gap",
        });
    }
    let mut inv_sum = T::zero();
    let mut sq_sum = T::zero();
    for &s in sigma {
        inv_sum += T::one() / (s * s);
        sq_sum += s * s;
    }
    let r = T::from_usize(sigma.len()).expect("rank fits scalar");
    Ok((inv_sum - r * r / sq_sum).max(T::zero()))
}
