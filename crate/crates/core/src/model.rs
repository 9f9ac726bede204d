//! Model structures (frequency sets), regression matrices, and the
//! data-generating functions used by the experiments.
//!
//! Frequencies are exact rationals in cycles per sample. Keeping them
//! rational makes the set difference in the optimal ordering exact integer
//! arithmetic and lets structures at different orders share identical basis
//! functions without floating-point drift. They are evaluated in the working
//! scalar type only when a matrix or basis row is built.

use std::collections::BTreeSet;

use num_complex::Complex;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::rng::{complex_gaussian, RngCore};
use crate::scalar::{as_f64, Scalar};

/// Basis frequency in cycles per sample, kept exact.
pub type Frequency = Ratio<i64>;

/// Number of coefficients in a data-generating function.
pub const GENERATOR_TERMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderingKind {
    Linear,
    Optimal,
    Custom,
}

/// Ordered set of distinct basis frequencies defining the model class
/// `f(x; theta) = sum_i theta_i exp(j 2 pi f_i x)` and the column order of
/// the regression matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelStructure {
    frequencies: Vec<Frequency>,
    ordering_kind: OrderingKind,
    n_max: usize,
}

impl ModelStructure {
    /// Linear ordering: frequencies `(0, 1/n_max, ..., (order-1)/n_max)`.
    pub fn linear(order: usize, n_max: usize) -> Result<Self> {
        if order < 1 || order > n_max {
            return Err(Error::OrderOutOfRange { order, max: n_max });
        }
        let frequencies = (0..order)
            .map(|k| Ratio::new(k as i64, n_max as i64))
            .collect();
        Ok(Self {
            frequencies,
            ordering_kind: OrderingKind::Linear,
            n_max,
        })
    }

    /// Optimal ordering: `(0, 1/n_train, ..., (order-1)/n_train)` while
    /// `order <= n_train`; beyond that, the full `{k/n_train}` set followed
    /// by the first `order - n_train` elements of the ascending sequence
    /// `{k/n_max}` with every element of `{k/n_train}` removed.
    pub fn optimal(order: usize, n_train: usize, n_max: usize) -> Result<Self> {
        if n_train < 1 || n_train > n_max {
            return Err(Error::OrderOutOfRange {
                order: n_train,
                max: n_max,
            });
        }
        if order < 1 || order > n_max {
            return Err(Error::OrderOutOfRange { order, max: n_max });
        }
        let base: Vec<Frequency> = (0..order.min(n_train))
            .map(|k| Ratio::new(k as i64, n_train as i64))
            .collect();
        let frequencies = if order <= n_train {
            base
        } else {
            let base_set: BTreeSet<Frequency> = base.iter().copied().collect();
            let tail = (0..n_max)
                .map(|k| Ratio::new(k as i64, n_max as i64))
                .filter(|f| !base_set.contains(f))
                .take(order - n_train);
            base.iter().copied().chain(tail).collect()
        };
        debug_assert_eq!(frequencies.len(), order);
        Ok(Self {
            frequencies,
            ordering_kind: OrderingKind::Optimal,
            n_max,
        })
    }

    /// User-supplied ordering; frequencies must be distinct and in [0, 1).
    pub fn custom(frequencies: Vec<Frequency>) -> Result<Self> {
        if frequencies.is_empty() {
            return Err(Error::EmptyInput {
                context: "custom structure frequencies",
            });
        }
        let zero = Ratio::new(0, 1);
        let one = Ratio::new(1, 1);
        if frequencies.iter().any(|f| *f < zero || *f >= one) {
            return Err(Error::InvalidFrequencies);
        }
        let distinct: BTreeSet<Frequency> = frequencies.iter().copied().collect();
        if distinct.len() != frequencies.len() {
            return Err(Error::InvalidFrequencies);
        }
        let n_max = frequencies.len();
        Ok(Self {
            frequencies,
            ordering_kind: OrderingKind::Custom,
            n_max,
        })
    }

    /// Model order `n` (number of basis functions).
    pub fn order(&self) -> usize {
        self.frequencies.len()
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn ordering_kind(&self) -> OrderingKind {
        self.ordering_kind
    }

    pub fn frequencies(&self) -> &[Frequency] {
        &self.frequencies
    }

    /// Frequencies evaluated in the working scalar type.
    pub fn frequency_values<T: Scalar>(&self) -> Vec<T> {
        self.frequencies
            .iter()
            .map(|f| frequency_value::<T>(*f))
            .collect()
    }

    /// Basis row `phi(x) = [exp(j 2 pi f_i x)]_i`.
    pub fn basis_row<T: Scalar>(&self, x: T) -> Vec<Complex<T>> {
        self.frequencies
            .iter()
            .map(|f| {
                let phase = T::TAU() * frequency_value::<T>(*f) * x;
                Complex::new(phase.cos(), phase.sin())
            })
            .collect()
    }
}

fn frequency_value<T: Scalar>(f: Frequency) -> T {
    T::from_i64(*f.numer()).expect("frequency numerator fits scalar")
        / T::from_i64(*f.denom()).expect("frequency denominator fits scalar")
}

/// Builds the `M x n` regression matrix with entry
/// `(t, i) = exp(j 2 pi f_i x(t))`; column order follows the structure.
pub fn regression_matrix<T: Scalar>(
    structure: &ModelStructure,
    inputs: &[T],
) -> Result<ComplexMatrix<T>> {
    if inputs.is_empty() {
        return Err(Error::EmptyInput {
            context: "regression inputs",
        });
    }
    if inputs.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            context: "regression inputs",
        });
    }
    let freqs = structure.frequency_values::<T>();
    Ok(ComplexMatrix::from_fn(
        inputs.len(),
        structure.order(),
        |t, i| {
            let phase = T::TAU() * freqs[i] * inputs[t];
            Complex::new(phase.cos(), phase.sin())
        },
    ))
}

/// A nested family of model structures, one per order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StructureFamily {
    Linear { n_max: usize },
    Optimal { n_train: usize, n_max: usize },
    Custom { frequencies: Vec<Frequency> },
}

impl StructureFamily {
    pub fn structure(&self, order: usize) -> Result<ModelStructure> {
        match self {
            Self::Linear { n_max } => ModelStructure::linear(order, *n_max),
            Self::Optimal { n_train, n_max } => ModelStructure::optimal(order, *n_train, *n_max),
            Self::Custom { frequencies } => {
                if order < 1 || order > frequencies.len() {
                    return Err(Error::OrderOutOfRange {
                        order,
                        max: frequencies.len(),
                    });
                }
                ModelStructure::custom(frequencies[..order].to_vec())
            }
        }
    }

    pub fn max_order(&self) -> usize {
        match self {
            Self::Linear { n_max } => *n_max,
            Self::Optimal { n_max, .. } => *n_max,
            Self::Custom { frequencies } => frequencies.len(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Linear { .. } => "linear",
            Self::Optimal { .. } => "optimal",
            Self::Custom { .. } => "custom",
        }
    }
}

/// Which of the two data-generating functions is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// Frequencies `(k-1)/n_max`, k = 1..=10.
    Lin,
    /// Frequencies `(k-1)/n_train`, k = 1..=10.
    Opt,
}

impl GeneratorKind {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Lin => "lin",
            Self::Opt => "opt",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "lin" => Ok(Self::Lin),
            "opt" => Ok(Self::Opt),
            other => Err(Error::InvalidConfig {
                reason: format!("unknown generator kind '{other}' (expected lin or opt)"),
            }),
        }
    }
}

/// True function `f0` as ten complex coefficients over a fixed frequency
/// set, plus the measurement-noise variance.
#[derive(Debug, Clone, PartialEq)]
pub struct DataGenerator<T: Scalar> {
    coefficients: Vec<Complex<T>>,
    kind: GeneratorKind,
    n_train: usize,
    n_max: usize,
    noise_variance: T,
}

impl<T: Scalar> DataGenerator<T> {
    pub fn new(
        coefficients: Vec<Complex<T>>,
        kind: GeneratorKind,
        n_train: usize,
        n_max: usize,
        noise_variance: T,
    ) -> Result<Self> {
        if coefficients.len() != GENERATOR_TERMS {
            return Err(Error::CoefficientCount {
                expected: GENERATOR_TERMS,
                actual: coefficients.len(),
            });
        }
        if coefficients
            .iter()
            .any(|c| !c.re.is_finite() || !c.im.is_finite())
        {
            return Err(Error::NonFinite {
                context: "generator coefficients",
            });
        }
        if !noise_variance.is_finite() || noise_variance < T::zero() {
            return Err(Error::InvalidNoiseVariance {
                value: as_f64(noise_variance),
            });
        }
        // (k-1)/denominator must stay inside [0, 1).
        let denominator = match kind {
            GeneratorKind::Lin => n_max,
            GeneratorKind::Opt => n_train,
        };
        if denominator < GENERATOR_TERMS {
            return Err(Error::InvalidConfig {
                reason: format!(
                    "generator denominator {denominator} is smaller than the {GENERATOR_TERMS} coefficient terms"
                ),
            });
        }
        Ok(Self {
            coefficients,
            kind,
            n_train,
            n_max,
            noise_variance,
        })
    }

    /// Draws the ten coefficients from CN(0, 1).
    pub fn sample(
        kind: GeneratorKind,
        n_train: usize,
        n_max: usize,
        noise_variance: T,
        rng: &mut impl RngCore,
    ) -> Result<Self> {
        let coefficients = (0..GENERATOR_TERMS)
            .map(|_| complex_gaussian(rng, T::one()))
            .collect();
        Self::new(coefficients, kind, n_train, n_max, noise_variance)
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coefficients
    }

    pub fn kind(&self) -> GeneratorKind {
        self.kind
    }

    pub fn noise_variance(&self) -> T {
        self.noise_variance
    }

    /// The generator's own frequency set `(k-1)/denominator`.
    pub fn frequencies(&self) -> Vec<Frequency> {
        let denominator = match self.kind {
            GeneratorKind::Lin => self.n_max,
            GeneratorKind::Opt => self.n_train,
        } as i64;
        (0..GENERATOR_TERMS)
            .map(|k| Ratio::new(k as i64, denominator))
            .collect()
    }

    /// Evaluates `f0(x) = sum_k alpha_k exp(j 2 pi (k-1)/D x)`.
    pub fn evaluate_f0(&self, x: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (freq, alpha) in self.frequencies().iter().zip(&self.coefficients) {
            let phase = T::TAU() * frequency_value::<T>(*freq) * x;
            acc += *alpha * Complex::new(phase.cos(), phase.sin());
        }
        acc
    }

    pub fn evaluate_f0_many(&self, xs: &[T]) -> Vec<Complex<T>> {
        xs.iter().map(|&x| self.evaluate_f0(x)).collect()
    }

    /// Embeds the generator coefficients as a parameter vector of the given
    /// structure; `None` when some generator frequency is missing from it.
    pub fn coefficients_in(&self, structure: &ModelStructure) -> Option<Vec<Complex<T>>> {
        let mut theta = vec![Complex::new(T::zero(), T::zero()); structure.order()];
        for (freq, alpha) in self.frequencies().iter().zip(&self.coefficients) {
            let pos = structure.frequencies().iter().position(|f| f == freq)?;
            theta[pos] += *alpha;
        }
        Some(theta)
    }

    /// Samples `y(t) = f0(x(t)) + z(t)` with circular complex Gaussian noise
    /// of variance `noise_variance`. Zero variance produces noise-free data.
    pub fn generate_dataset(&self, inputs: &[T], rng: &mut impl RngCore) -> Result<Dataset<T>> {
        if inputs.is_empty() {
            return Err(Error::EmptyInput {
                context: "dataset inputs",
            });
        }
        if inputs.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                context: "dataset inputs",
            });
        }
        let outputs = inputs
            .iter()
            .map(|&x| self.evaluate_f0(x) + complex_gaussian(rng, self.noise_variance))
            .collect();
        Dataset::new(inputs.to_vec(), outputs)
    }
}

/// Training set: inputs `x(t)` and complex outputs `y(t)` of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset<T: Scalar> {
    inputs: Vec<T>,
    outputs: Vec<Complex<T>>,
}

impl<T: Scalar> Dataset<T> {
    pub fn new(inputs: Vec<T>, outputs: Vec<Complex<T>>) -> Result<Self> {
        if inputs.is_empty() {
            return Err(Error::EmptyInput {
                context: "dataset inputs",
            });
        }
        if inputs.len() != outputs.len() {
            return Err(Error::DimensionMismatch {
                context: "dataset outputs",
                expected: inputs.len(),
                actual: outputs.len(),
            });
        }
        Ok(Self { inputs, outputs })
    }

    pub fn len(&self) -> usize {
        self.inputs.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction requires at least one sample
    }

    pub fn inputs(&self) -> &[T] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Complex<T>] {
        &self.outputs
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::substream;

    fn fr(n: i64, d: i64) -> Frequency {
        Ratio::new(n, d)
    }

    #[test]
    fn linear_ordering_examples() {
        let s = ModelStructure::linear(1, 30).unwrap();
        assert_eq!(s.frequencies(), &[fr(0, 1)]);

        let s = ModelStructure::linear(3, 30).unwrap();
        assert_eq!(s.frequencies(), &[fr(0, 1), fr(1, 30), fr(2, 30)]);

        assert!(ModelStructure::linear(0, 30).is_err());
        assert!(ModelStructure::linear(31, 30).is_err());
    }

    #[test]
    fn optimal_ordering_below_threshold_uses_train_denominator() {
        let s = ModelStructure::optimal(10, 10, 30).unwrap();
        let expected: Vec<Frequency> = (0..10).map(|k| fr(k, 10)).collect();
        assert_eq!(s.frequencies(), expected.as_slice());
    }

    #[test]
    fn optimal_ordering_above_threshold_appends_set_difference() {
        let s = ModelStructure::optimal(13, 10, 30).unwrap();
        let mut expected: Vec<Frequency> = (0..10).map(|k| fr(k, 10)).collect();
        expected.extend([fr(1, 30), fr(2, 30), fr(4, 30)]);
        assert_eq!(s.frequencies(), expected.as_slice());
    }

    #[test]
    fn optimal_ordering_supports_non_dividing_denominators() {
        // n_train = 10 does not divide n_max = 25: k/25 coincides with a
        // k/10 frequency exactly when k is a multiple of 5, so the appended
        // tail is (1, 2, 3, 4, 6)/25.
        let s = ModelStructure::optimal(15, 10, 25).unwrap();
        let mut expected: Vec<Frequency> = (0..10).map(|k| fr(k, 10)).collect();
        expected.extend([fr(1, 25), fr(2, 25), fr(3, 25), fr(4, 25), fr(6, 25)]);
        assert_eq!(s.frequencies(), expected.as_slice());
        let distinct: BTreeSet<Frequency> = s.frequencies().iter().copied().collect();
        assert_eq!(distinct.len(), 15);
    }

    #[test]
    fn orderings_agree_as_sets_at_n_max() {
        let lin = ModelStructure::linear(30, 30).unwrap();
        let opt = ModelStructure::optimal(30, 10, 30).unwrap();
        let lin_set: BTreeSet<Frequency> = lin.frequencies().iter().copied().collect();
        let opt_set: BTreeSet<Frequency> = opt.frequencies().iter().copied().collect();
        assert_eq!(lin_set, opt_set);
        assert_ne!(lin.frequencies(), opt.frequencies()); // different order
    }

    #[test]
    fn families_nest_one_trailing_frequency() {
        let lin = StructureFamily::Linear { n_max: 30 };
        let opt = StructureFamily::Optimal {
            n_train: 10,
            n_max: 30,
        };
        for family in [lin, opt] {
            for n in 1..30 {
                let a = family.structure(n).unwrap();
                let b = family.structure(n + 1).unwrap();
                assert_eq!(&b.frequencies()[..n], a.frequencies());
            }
        }
    }

    #[test]
    fn custom_rejects_duplicates_and_out_of_range() {
        assert!(ModelStructure::custom(vec![fr(1, 2), fr(2, 4)]).is_err());
        assert!(ModelStructure::custom(vec![fr(1, 1)]).is_err());
        assert!(ModelStructure::custom(vec![fr(-1, 4)]).is_err());
        assert!(ModelStructure::custom(vec![fr(1, 4), fr(1, 3)]).is_ok());
    }

    #[test]
    fn zero_frequency_column_is_all_ones() {
        let s = ModelStructure::linear(1, 30).unwrap();
        let phi = regression_matrix(&s, &[0.0f64, 0.7, 3.1]).unwrap();
        for t in 0..3 {
            assert!((phi.get(t, 0) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dft_columns_are_orthogonal_with_norm_sqrt_n() {
        let s = ModelStructure::optimal(8, 10, 30).unwrap();
        let inputs: Vec<f64> = (0..10).map(|t| t as f64).collect();
        let phi = regression_matrix(&s, &inputs).unwrap();
        for a in 0..8 {
            for b in 0..8 {
                let dot = crate::linalg::hermitian_dot(&phi.column(a), &phi.column(b));
                let expected = if a == b { 10.0 } else { 0.0 };
                assert!((dot.norm() - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn f0_trivial_evaluations() {
        let mut alpha = vec![Complex::new(0.0f64, 0.0); GENERATOR_TERMS];
        alpha[0] = Complex::new(1.0, 0.0);
        let g = DataGenerator::new(alpha, GeneratorKind::Opt, 10, 30, 0.0).unwrap();
        for x in [0.0, 0.3, 5.0, 17.2] {
            assert!((g.evaluate_f0(x) - Complex::new(1.0, 0.0)).norm() < 1e-15);
        }

        let mut alpha = vec![Complex::new(0.0f64, 0.0); GENERATOR_TERMS];
        alpha[1] = Complex::new(1.0, 0.0);
        let g = DataGenerator::new(alpha, GeneratorKind::Lin, 10, 30, 0.0).unwrap();
        let x = 2.25f64;
        let phase = std::f64::consts::TAU * x / 30.0;
        let expected = Complex::new(phase.cos(), phase.sin());
        assert!((g.evaluate_f0(x) - expected).norm() < 1e-15);
    }

    #[test]
    fn f0_at_zero_is_coefficient_sum() {
        let mut rng = substream(7, &[0]);
        let g = DataGenerator::<f64>::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
        let sum: Complex<f64> = g.coefficients().iter().sum();
        assert!((g.evaluate_f0(0.0) - sum).norm() < 1e-12);
    }

    #[test]
    fn noise_free_dataset_equals_f0_exactly() {
        let mut rng = substream(11, &[0]);
        let g = DataGenerator::<f64>::sample(GeneratorKind::Opt, 10, 30, 0.0, &mut rng).unwrap();
        let inputs: Vec<f64> = (0..10).map(|t| t as f64).collect();
        let mut noise_rng = substream(11, &[1]);
        let d = g.generate_dataset(&inputs, &mut noise_rng).unwrap();
        for (y, f) in d.outputs().iter().zip(g.evaluate_f0_many(&inputs)) {
            assert_eq!(*y, f);
        }
    }

    #[test]
    fn fixed_seed_dataset_is_bit_identical() {
        let mut rng = substream(3, &[0]);
        let g = DataGenerator::<f64>::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
        let inputs: Vec<f64> = (0..10).map(|t| t as f64).collect();
        let d1 = g
            .generate_dataset(&inputs, &mut substream(3, &[1, 5]))
            .unwrap();
        let d2 = g
            .generate_dataset(&inputs, &mut substream(3, &[1, 5]))
            .unwrap();
        let bits = |d: &Dataset<f64>| -> Vec<u64> {
            d.outputs()
                .iter()
                .flat_map(|z| [z.re.to_bits(), z.im.to_bits()])
                .collect()
        };
        assert_eq!(bits(&d1), bits(&d2));
    }

    #[test]
    fn generator_validates_coefficient_count_and_variance() {
        let alpha = vec![Complex::new(0.0f64, 0.0); 9];
        assert!(matches!(
            DataGenerator::new(alpha, GeneratorKind::Lin, 10, 30, 0.1),
            Err(Error::CoefficientCount { .. })
        ));
        let alpha = vec![Complex::new(0.0f64, 0.0); GENERATOR_TERMS];
        assert!(matches!(
            DataGenerator::new(alpha, GeneratorKind::Lin, 10, 30, -0.1),
            Err(Error::InvalidNoiseVariance { .. })
        ));
    }

    #[test]
    fn coefficients_embed_into_containing_structures() {
        let mut rng = substream(19, &[0]);
        let g = DataGenerator::<f64>::sample(GeneratorKind::Opt, 10, 30, 0.1, &mut rng).unwrap();
        let s = ModelStructure::optimal(10, 10, 30).unwrap();
        let theta = g.coefficients_in(&s).unwrap();
        assert_eq!(theta, g.coefficients());
        // lin generator needs frequencies 0..9 over 30: present only from n >= 16
        let g = DataGenerator::<f64>::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
        assert!(g
            .coefficients_in(&ModelStructure::optimal(15, 10, 30).unwrap())
            .is_none());
        assert!(g
            .coefficients_in(&ModelStructure::optimal(16, 10, 30).unwrap())
            .is_some());
    }
}
