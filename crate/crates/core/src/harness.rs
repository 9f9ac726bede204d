//! Seeded Monte-Carlo reproduction of the four experiment cases: fit both
//! structure families at every order on replicated noisy/noise-free data and
//! aggregate normalized mean squared errors.
//!
//! Determinism contract: a config fully determines every random draw. The
//! coefficient vector comes from substream `(base_seed, case, ALPHA_STREAM,
//! index)` and replicate noise from `(base_seed, case, NOISE_STREAM,
//! replicate)`. The noisy datasets are drawn once per case and shared by
//! every family and order, so all model orders fit the same data.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::estimators::{estimate_theta, EstimatorKind};
use crate::linalg::{pseudo_inverse_apply, svd, vector_norm};
use crate::model::{
    regression_matrix, DataGenerator, GeneratorKind, StructureFamily, GENERATOR_TERMS,
};
use crate::rng::{self, substream, ALPHA_STREAM, NOISE_STREAM};
use crate::scalar::{as_f64, real, Scalar};

/// Experiment case identifier. A-D are the predefined configurations; other
/// configs carry their own name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CaseId {
    A,
    B,
    C,
    D,
    Custom(String),
}

impl CaseId {
    pub fn label(&self) -> &str {
        match self {
            Self::A => "A",
            Self::B => "B",
            Self::C => "C",
            Self::D => "D",
            Self::Custom(name) => name,
        }
    }

    /// Stream word mixed into every substream of the case.
    pub fn stream_code(&self) -> u64 {
        match self {
            Self::A => 1,
            Self::B => 2,
            Self::C => 3,
            Self::D => 4,
            Self::Custom(name) => rng::stream_code(name),
        }
    }

    pub fn parse(s: &str) -> Self {
        match s {
            "A" | "a" => Self::A,
            "B" | "b" => Self::B,
            "C" | "c" => Self::C,
            "D" | "d" => Self::D,
            other => Self::Custom(other.to_string()),
        }
    }
}

/// Whether the generator coefficients are drawn once per case or afresh for
/// every replicate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlphaMode {
    FixedPerCase,
    ResamplePerReplicate,
}

impl AlphaMode {
    pub fn label(&self) -> &'static str {
        match self {
            Self::FixedPerCase => "fixed_per_case",
            Self::ResamplePerReplicate => "resample_per_replicate",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "fixed_per_case" => Ok(Self::FixedPerCase),
            "resample_per_replicate" => Ok(Self::ResamplePerReplicate),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown alpha mode '{other}'"),
            }),
        }
    }
}

/// Full description of one experiment run.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig<T: Scalar> {
    pub case_id: CaseId,
    pub epsilon: T,
    pub generator_kind: GeneratorKind,
    pub n_train: usize,
    pub n_max: usize,
    pub noise_variance: T,
    pub replicates: usize,
    pub base_seed: u64,
    pub estimator: EstimatorKind<T>,
    pub alpha_mode: AlphaMode,
}

impl<T: Scalar> ExperimentConfig<T> {
    /// Predefined cases: N = 10, n_max = 30, noise variance 0.1, 500
    /// replicates, minimum-norm estimator, coefficients fixed per case.
    /// A: eps 0.5 / lin, B: eps 0 / lin, C: eps 0.5 / opt, D: eps 0 / opt.
    pub fn for_case(case_id: CaseId, base_seed: u64) -> Result<Self> {
        let (epsilon, generator_kind) = match case_id {
            CaseId::A => (real::<T>(0.5), GeneratorKind::Lin),
            CaseId::B => (T::zero(), GeneratorKind::Lin),
            CaseId::C => (real::<T>(0.5), GeneratorKind::Opt),
            CaseId::D => (T::zero(), GeneratorKind::Opt),
            CaseId::Custom(name) => {
                return Err(Error::InvalidConfig {
                    reason: format!("case '{name}' has no predefined configuration"),
                })
            }
        };
        Ok(Self {
            case_id,
            epsilon,
            generator_kind,
            n_train: 10,
            n_max: 30,
            noise_variance: real::<T>(0.1),
            replicates: 500,
            base_seed,
            estimator: EstimatorKind::MinNorm,
            alpha_mode: AlphaMode::FixedPerCase,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 1 {
            return Err(Error::InvalidConfig {
                reason: "replicates must be at least 1".into(),
            });
        }
        if self.n_train < 1 || self.n_train > self.n_max {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "n_train {} must lie in 1..=n_max ({})",
                    self.n_train, self.n_max
                ),
            });
        }
        if !self.epsilon.is_finite() {
            return Err(Error::InvalidConfig {
                reason: "epsilon must be finite".into(),
            });
        }
        if !self.noise_variance.is_finite() || self.noise_variance < T::zero() {
            return Err(Error::InvalidNoiseVariance {
                value: as_f64(self.noise_variance),
            });
        }
        let denominator = match self.generator_kind {
            GeneratorKind::Lin => self.n_max,
            GeneratorKind::Opt => self.n_train,
        };
        if denominator < GENERATOR_TERMS {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "generator denominator {denominator} is smaller than the {GENERATOR_TERMS} coefficient terms"
                ),
            });
        }
        self.estimator.validate()
    }
}

/// The two structure families evaluated by every case.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyLabel {
    Linear,
    Optimal,
}

impl FamilyLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Linear => "linear",
            Self::Optimal => "optimal",
        }
    }
}

/// Aggregates for one (family, order) cell. Means reproduce the experiment
/// aggregation; medians are robustness diagnostics near the singular peak
/// and appear in no serialized output.
#[derive(Debug, Clone, PartialEq)]
pub struct OrderRecord<T: Scalar> {
    pub order: usize,
    pub nmse_noisy_mean: T,
    pub nmse_noisefree_mean: T,
    pub nmse_noisy_median: T,
    pub nmse_noisefree_median: T,
    pub inv_sigma_min: T,
    pub theta_star_norm: T,
}

/// A per-order failure that did not abort the case.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderFailure {
    pub order: usize,
    pub message: String,
}

/// Per-order curves for one structure family.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyCurve<T: Scalar> {
    pub family: FamilyLabel,
    pub records: Vec<OrderRecord<T>>,
    pub failures: Vec<OrderFailure>,
}

/// Everything produced by one case run.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult<T: Scalar> {
    pub config: ExperimentConfig<T>,
    pub linear: FamilyCurve<T>,
    pub optimal: FamilyCurve<T>,
}

impl<T: Scalar> CaseResult<T> {
    pub fn family(&self, label: FamilyLabel) -> &FamilyCurve<T> {
        match label {
            FamilyLabel::Linear => &self.linear,
            FamilyLabel::Optimal => &self.optimal,
        }
    }
}

/// Normalized mean squared error
/// `sum |true - predicted|^2 / sum |true|^2`.
pub fn nmse<T: Scalar>(true_values: &[Complex<T>], predicted: &[Complex<T>]) -> Result<T> {
    if true_values.len() != predicted.len() {
        return Err(Error::DimensionMismatch {
            context: "nmse",
            expected: true_values.len(),
            actual: predicted.len(),
        });
    }
    let mut numerator = T::zero();
    let mut denominator = T::zero();
    for (t, p) in true_values.iter().zip(predicted) {
        numerator += (*t - *p).norm_sqr();
        denominator += t.norm_sqr();
    }
    if denominator == T::zero() {
        return Err(Error::ZeroNmseReference);
    }
    Ok(numerator / denominator)
}

/// Test inputs `(eps, 1 + eps, ..., n_train - 1 + eps)`.
pub fn test_grid<T: Scalar>(n_train: usize, epsilon: T) -> Vec<T> {
    (0..n_train)
        .map(|t| T::from_usize(t).expect("grid index fits scalar") + epsilon)
        .collect()
}

fn mean<T: Scalar>(values: &[T]) -> T {
    let mut acc = T::zero();
    for v in values {
        acc += *v;
    }
    acc / T::from_usize(values.len()).expect("count fits scalar")
}

fn median<T: Scalar>(values: &[T]) -> T {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite NMSE values"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        (sorted[mid - 1] + sorted[mid]) / real::<T>(2.0)
    }
}

/// Runs one case: every replicate of every order of both families, fully
/// determined by the config.
pub fn run_case<T: Scalar>(config: &ExperimentConfig<T>) -> Result<CaseResult<T>> {
    config.validate()?;
    let case_code = config.case_id.stream_code();
    let x_train: Vec<T> = (0..config.n_train)
        .map(|t| T::from_usize(t).expect("input index fits scalar"))
        .collect();
    let x_test = test_grid(config.n_train, config.epsilon);

    // Coefficient draws: one per case, or one per replicate.
    let alpha_count = match config.alpha_mode {
        AlphaMode::FixedPerCase => 1,
        AlphaMode::ResamplePerReplicate => config.replicates,
    };
    let generators: Vec<DataGenerator<T>> = (0..alpha_count)
        .map(|idx| {
            DataGenerator::sample(
                config.generator_kind,
                config.n_train,
                config.n_max,
                config.noise_variance,
                &mut substream(config.base_seed, &[case_code, ALPHA_STREAM, idx as u64]),
            )
        })
        .collect::<Result<_>>()?;
    let f0_train: Vec<Vec<Complex<T>>> = generators
        .iter()
        .map(|g| g.evaluate_f0_many(&x_train))
        .collect();
    let f0_test: Vec<Vec<Complex<T>>> = generators
        .iter()
        .map(|g| g.evaluate_f0_many(&x_test))
        .collect();

    // One pool of noisy training datasets per case, shared across orders and
    // families.
    let noisy_y: Vec<Vec<Complex<T>>> = (0..config.replicates)
        .map(|r| {
            let alpha_idx = r.min(alpha_count - 1);
            let data = generators[alpha_idx].generate_dataset(
                &x_train,
                &mut substream(config.base_seed, &[case_code, NOISE_STREAM, r as u64]),
            )?;
            Ok(data.outputs().to_vec())
        })
        .collect::<Result<_>>()?;

    let families = [
        (
            FamilyLabel::Linear,
            StructureFamily::Linear {
                n_max: config.n_max,
            },
        ),
        (
            FamilyLabel::Optimal,
            StructureFamily::Optimal {
                n_train: config.n_train,
                n_max: config.n_max,
            },
        ),
    ];

    let mut curves = Vec::with_capacity(2);
    for (label, family) in families {
        let mut records = Vec::with_capacity(config.n_max);
        let mut failures = Vec::new();
        for order in 1..=config.n_max {
            let structure = family.structure(order)?;
            let phi = regression_matrix(&structure, &x_train)?;
            let phi_test = regression_matrix(&structure, &x_test)?;
            let factorization = match svd(&phi) {
                Ok(f) => f,
                Err(err) => {
                    failures.push(OrderFailure {
                        order,
                        message: err.to_string(),
                    });
                    records.push(OrderRecord {
                        order,
                        nmse_noisy_mean: T::nan(),
                        nmse_noisefree_mean: T::nan(),
                        nmse_noisy_median: T::nan(),
                        nmse_noisefree_median: T::nan(),
                        inv_sigma_min: T::nan(),
                        theta_star_norm: T::nan(),
                    });
                    continue;
                }
            };

            let sigma_min = factorization.sigma_min();
            let inv_sigma_min = if sigma_min > T::zero() {
                T::one() / sigma_min
            } else {
                T::infinity()
            };
            // Noise-free minimum-norm solution norm for the stream-0 draw.
            let theta_star = pseudo_inverse_apply(&factorization, &f0_train[0])?;
            let theta_star_norm = vector_norm(&theta_star);

            // Noise-free branch: a single run when the coefficients are fixed
            // (all replicates would be identical), one run per draw otherwise.
            let mut noisefree = Vec::with_capacity(alpha_count);
            for idx in 0..alpha_count {
                let theta = estimate_theta(&factorization, &f0_train[idx], config.estimator)?;
                let predicted = phi_test.matvec(&theta)?;
                noisefree.push(nmse(&f0_test[idx], &predicted)?);
            }

            let mut noisy = Vec::with_capacity(config.replicates);
            for (r, y) in noisy_y.iter().enumerate() {
                let alpha_idx = r.min(alpha_count - 1);
                let theta = estimate_theta(&factorization, y, config.estimator)?;
                let predicted = phi_test.matvec(&theta)?;
                noisy.push(nmse(&f0_test[alpha_idx], &predicted)?);
            }

            records.push(OrderRecord {
                order,
                nmse_noisy_mean: mean(&noisy),
                nmse_noisefree_mean: mean(&noisefree),
                nmse_noisy_median: median(&noisy),
                nmse_noisefree_median: median(&noisefree),
                inv_sigma_min,
                theta_star_norm,
            });
        }
        curves.push(FamilyCurve {
            family: label,
            records,
            failures,
        });
    }

    let optimal = curves.pop().expect("two family curves");
    let linear = curves.pop().expect("two family curves");
    Ok(CaseResult {
        config: config.clone(),
        linear,
        optimal,
    })
}

/// Location of the noisy-NMSE maximum over interior orders, if the curve has
/// any variation at all.
#[derive(Debug, Clone, PartialEq)]
pub enum DescentVerdict<T: Scalar> {
    /// The curve is constant over the interior orders.
    Flat,
    Peak {
        order: usize,
        peak_nmse: T,
        nmse_at_max_order: T,
        /// Whether the curve descends again: NMSE at n_max < NMSE at peak.
        descends: bool,
    },
}

/// Finds the argmax of the mean noisy NMSE restricted to orders
/// `2..=n_max-1` and reports whether the curve at `n_max` sits below it.
pub fn double_descent_profile<T: Scalar>(
    result: &CaseResult<T>,
    family: FamilyLabel,
) -> DescentVerdict<T> {
    let records = &result.family(family).records;
    let interior: Vec<&OrderRecord<T>> = records
        .iter()
        .filter(|r| r.order >= 2 && r.order < result.config.n_max)
        .collect();
    if interior.is_empty() {
        return DescentVerdict::Flat;
    }
    let mut lo = interior[0].nmse_noisy_mean;
    let mut hi = lo;
    let mut peak = interior[0];
    for r in &interior {
        lo = lo.min(r.nmse_noisy_mean);
        hi = hi.max(r.nmse_noisy_mean);
        if r.nmse_noisy_mean > peak.nmse_noisy_mean {
            peak = r;
        }
    }
    if hi - lo <= T::epsilon() * hi.max(T::one()) {
        return DescentVerdict::Flat;
    }
    let last = records.last().expect("at least one record");
    DescentVerdict::Peak {
        order: peak.order,
        peak_nmse: peak.nmse_noisy_mean,
        nmse_at_max_order: last.nmse_noisy_mean,
        descends: last.nmse_noisy_mean < peak.nmse_noisy_mean,
    }
}
