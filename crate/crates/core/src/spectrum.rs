//! Smallest-singular-value tracking across model orders, interlacing checks
//! for column appends, and parameter-norm diagnostics.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{pseudo_inverse_apply, svd, vector_norm, ComplexMatrix};
use crate::model::{regression_matrix, DataGenerator, StructureFamily};
use crate::scalar::{real, Scalar};

/// Per-order smallest singular values (and optional noise-free solution
/// norms) for a nested structure family.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSweep<T: Scalar> {
    orders: Vec<usize>,
    sigma_min: Vec<T>,
    inv_sigma_min: Vec<T>,
    theta_star_norm: Option<Vec<T>>,
    rank_deficient_orders: Vec<usize>,
}

impl<T: Scalar> SpectrumSweep<T> {
    pub fn orders(&self) -> &[usize] {
        &self.orders
    }

    pub fn sigma_min(&self) -> &[T] {
        &self.sigma_min
    }

    pub fn inv_sigma_min(&self) -> &[T] {
        &self.inv_sigma_min
    }

    /// `||theta_star||` per order; present when a generator was supplied.
    pub fn theta_star_norm(&self) -> Option<&[T]> {
        self.theta_star_norm.as_deref()
    }

    /// Orders at which the regression matrix fell below full rank.
    pub fn rank_deficient_orders(&self) -> &[usize] {
        &self.rank_deficient_orders
    }

    /// Order with the largest `1/sigma_min` (first maximum).
    pub fn peak_order(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.inv_sigma_min.iter().enumerate() {
            if *v > self.inv_sigma_min[best] {
                best = i;
            }
        }
        self.orders[best]
    }
}

/// Computes `sigma_min` of the regression matrix for each order `1..=n_max`,
/// plus `||pinv(Phi) f0(x)||` when a generator is supplied.
///
/// Each order is factored independently; rank deficiency is recorded per
/// order rather than treated as fatal.
pub fn sweep_spectrum<T: Scalar>(
    family: &StructureFamily,
    inputs: &[T],
    n_max: usize,
    generator: Option<&DataGenerator<T>>,
) -> Result<SpectrumSweep<T>> {
    if n_max < 1 || n_max > family.max_order() {
        return Err(Error::OrderOutOfRange {
            order: n_max,
            max: family.max_order(),
        });
    }
    let f0_values = generator.map(|g| g.evaluate_f0_many(inputs));

    let mut orders = Vec::with_capacity(n_max);
    let mut sigma_min = Vec::with_capacity(n_max);
    let mut inv_sigma_min = Vec::with_capacity(n_max);
    let mut norms = Vec::with_capacity(n_max);
    let mut rank_deficient_orders = Vec::new();

    for order in 1..=n_max {
        let structure = family.structure(order)?;
        let phi = regression_matrix(&structure, inputs)?;
        let f = svd(&phi)?;
        let smallest = f.sigma_min();
        orders.push(order);
        sigma_min.push(smallest);
        inv_sigma_min.push(if smallest > T::zero() {
            T::one() / smallest
        } else {
            T::infinity()
        });
        if f.rank() < f.singular_values().len() {
            rank_deficient_orders.push(order);
        }
        if let Some(f0) = &f0_values {
            let theta_star = pseudo_inverse_apply(&f, f0)?;
            norms.push(vector_norm(&theta_star));
        }
    }

    Ok(SpectrumSweep {
        orders,
        sigma_min,
        inv_sigma_min,
        theta_star_norm: generator.map(|_| norms),
        rank_deficient_orders,
    })
}

/// One broken inequality in an interlacing chain.
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingViolation<T: Scalar> {
    /// Position in the interleaved chain (0-based; even entries come from the
    /// extended spectrum, odd entries from the base spectrum).
    pub position: usize,
    pub upper: T,
    pub lower: T,
}

/// Both spectra and the per-inequality outcome of an interlacing check.
#[derive(Debug, Clone, PartialEq)]
pub struct InterlacingVerdict<T: Scalar> {
    base_spectrum: Vec<T>,
    extended_spectrum: Vec<T>,
    slack: T,
    violations: Vec<InterlacingViolation<T>>,
}

impl<T: Scalar> InterlacingVerdict<T> {
    pub fn base_spectrum(&self) -> &[T] {
        &self.base_spectrum
    }

    pub fn extended_spectrum(&self) -> &[T] {
        &self.extended_spectrum
    }

    /// Absolute slack applied to each inequality: `1e-9 * sigma_max`.
    pub fn slack(&self) -> T {
        self.slack
    }

    pub fn violations(&self) -> &[InterlacingViolation<T>] {
        &self.violations
    }

    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the interlacing chain between the singular values of `phi` and of
/// `[phi new_column]`.
///
/// With base spectrum `s` (length r) and extended spectrum `e` (length r or
/// r+1), the interleaved sequence `e_1, s_1, e_2, s_2, ...` must be
/// non-increasing; each inequality is allowed slack `1e-9 * e_1`.
pub fn verify_interlacing<T: Scalar>(
    phi: &ComplexMatrix<T>,
    new_column: &[Complex<T>],
) -> Result<InterlacingVerdict<T>> {
    let extended_matrix = phi.append_column(new_column)?;
    let base = svd(phi)?.singular_values().to_vec();
    let extended = svd(&extended_matrix)?.singular_values().to_vec();

    let mut chain: Vec<T> = Vec::with_capacity(base.len() + extended.len());
    for k in 0..extended.len().max(base.len()) {
        if k < extended.len() {
            chain.push(extended[k]);
        }
        if k < base.len() {
            chain.push(base[k]);
        }
    }

    let slack = real::<T>(1e-9) * extended[0];
    let mut violations = Vec::new();
    for (i, pair) in chain.windows(2).enumerate() {
        if pair[0] - pair[1] < -slack {
            violations.push(InterlacingViolation {
                position: i,
                upper: pair[0],
                lower: pair[1],
            });
        }
    }

    Ok(InterlacingVerdict {
        base_spectrum: base,
        extended_spectrum: extended,
        slack,
        violations,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectedTrend {
    /// Below the sample count, `sigma_min` must not increase.
    NonIncreasing,
    /// At or above the sample count, `sigma_min` must not decrease.
    NonDecreasing,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation<T: Scalar> {
    pub from_order: usize,
    pub to_order: usize,
    pub from_value: T,
    pub to_value: T,
    pub expected: ExpectedTrend,
}

/// Outcome of the two-sided monotonicity check of `sigma_min` across orders.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityVerdict<T: Scalar> {
    first_violation: Option<MonotonicityViolation<T>>,
}

impl<T: Scalar> MonotonicityVerdict<T> {
    pub fn holds(&self) -> bool {
        self.first_violation.is_none()
    }

    pub fn first_violation(&self) -> Option<&MonotonicityViolation<T>> {
        self.first_violation.as_ref()
    }
}

/// Checks that `sigma_min(n+1) <= sigma_min(n) + 1e-9` while `n + 1 <=
/// n_train` and `sigma_min(n+1) >= sigma_min(n) - 1e-9` once `n >= n_train`.
/// A single-order sweep passes vacuously.
pub fn check_sigma_min_monotonicity<T: Scalar>(
    sweep: &SpectrumSweep<T>,
    n_train: usize,
) -> MonotonicityVerdict<T> {
    let tol = real::<T>(1e-9);
    for i in 0..sweep.orders.len().saturating_sub(1) {
        let n = sweep.orders[i];
        let next = sweep.orders[i + 1];
        let from = sweep.sigma_min[i];
        let to = sweep.sigma_min[i + 1];
        if next <= n_train && to > from + tol {
            return MonotonicityVerdict {
                first_violation: Some(MonotonicityViolation {
                    from_order: n,
                    to_order: next,
                    from_value: from,
                    to_value: to,
                    expected: ExpectedTrend::NonIncreasing,
                }),
            };
        }
        if n >= n_train && to < from - tol {
            return MonotonicityVerdict {
                first_violation: Some(MonotonicityViolation {
                    from_order: n,
                    to_order: next,
                    from_value: from,
                    to_value: to,
                    expected: ExpectedTrend::NonDecreasing,
                }),
            };
        }
    }
    MonotonicityVerdict {
        first_violation: None,
    }
}

/// Per-order `||theta_star||` with the maximal strictly-decreasing order
/// ranges flagged. Descriptive: the decrease is a tendency, not a law.
#[derive(Debug, Clone, PartialEq)]
pub struct NormTrend<T: Scalar> {
    pub orders: Vec<usize>,
    pub norms: Vec<T>,
    /// Inclusive order ranges over which the norm strictly decreases.
    pub decreasing_runs: Vec<(usize, usize)>,
}

pub fn theta_star_norm_trend<T: Scalar>(sweep: &SpectrumSweep<T>) -> Result<NormTrend<T>> {
    let norms = sweep
        .theta_star_norm()
        .ok_or(Error::MissingThetaStarNorms)?
        .to_vec();
    let orders = sweep.orders.clone();

    let mut decreasing_runs = Vec::new();
    let mut run_start: Option<usize> = None;
    for i in 0..norms.len().saturating_sub(1) {
        if norms[i + 1] < norms[i] {
            run_start.get_or_insert(i);
        } else if let Some(start) = run_start.take() {
            decreasing_runs.push((orders[start], orders[i]));
        }
    }
    if let Some(start) = run_start {
        decreasing_runs.push((orders[start], orders[norms.len() - 1]));
    }

    Ok(NormTrend {
        orders,
        norms,
        decreasing_runs,
    })
}
