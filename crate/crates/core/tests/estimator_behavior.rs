//! Statistical cross-validation of the closed-form reports, interpolation
//! behavior at and above the threshold order, and the parameter-norm trend.

use descent_lab::estimators::{
    decompose_error, fit_min_norm, fit_ridge, min_norm_theta, prediction_variance, EstimatorKind,
};
use descent_lab::linalg::{pseudo_inverse_apply, svd, vector_norm};
use descent_lab::model::{regression_matrix, DataGenerator, GeneratorKind, ModelStructure};
use descent_lab::rng::{complex_gaussian, substream, ALPHA_STREAM, NOISE_STREAM};
use num_complex::Complex;

type C = Complex<f64>;

fn train_inputs(n: usize) -> Vec<f64> {
    (0..n).map(|t| t as f64).collect()
}

/// Shared fixture: linear-ordering structure of order 8 on ten samples, a
/// fixed generator draw, and the matching factorization.
struct Fixture {
    structure: ModelStructure,
    inputs: Vec<f64>,
    f0_train: Vec<C>,
    factorization: descent_lab::linalg::SvdFactorization<f64>,
}

fn fixture() -> Fixture {
    let structure = ModelStructure::linear(8, 30).unwrap();
    let inputs = train_inputs(10);
    let mut rng = substream(2024, &[ALPHA_STREAM, 0]);
    let generator = DataGenerator::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
    let f0_train = generator.evaluate_f0_many(&inputs);
    let phi = regression_matrix(&structure, &inputs).unwrap();
    let factorization = svd(&phi).unwrap();
    Fixture {
        structure,
        inputs,
        f0_train,
        factorization,
    }
}

#[test]
fn estimate_mean_matches_theta_star_within_three_standard_errors() {
    let fx = fixture();
    let replicates = 2000;
    let n = fx.structure.order();

    let mut thetas: Vec<Vec<C>> = Vec::with_capacity(replicates);
    for r in 0..replicates {
        let mut rng = substream(2024, &[NOISE_STREAM, r as u64]);
        let y: Vec<C> = fx
            .f0_train
            .iter()
            .map(|f| f + complex_gaussian::<f64>(&mut rng, 0.1))
            .collect();
        thetas.push(min_norm_theta(&fx.factorization, &y).unwrap());
    }

    let phi = regression_matrix(&fx.structure, &fx.inputs).unwrap();
    let decomposition =
        decompose_error(&phi, &fx.f0_train, EstimatorKind::MinNorm, 0.1).unwrap();
    let theta_star = decomposition.theta_star();

    for k in 0..n {
        let mean = thetas
            .iter()
            .fold(C::new(0.0, 0.0), |acc, t| acc + t[k])
            .scale(1.0 / replicates as f64);
        let variance = thetas
            .iter()
            .map(|t| (t[k] - mean).norm_sqr())
            .sum::<f64>()
            / replicates as f64;
        let standard_error = (variance / replicates as f64).sqrt();
        let deviation = (mean - theta_star[k]).norm();
        assert!(
            deviation <= 3.0 * standard_error,
            "component {k}: |mean - theta*| = {deviation:.3e}, 3se = {:.3e}",
            3.0 * standard_error
        );
    }
}

#[test]
fn empirical_prediction_variance_matches_closed_form_within_ten_percent() {
    let fx = fixture();
    let replicates = 2000;
    let x_query = 0.5;

    let phi = regression_matrix(&fx.structure, &fx.inputs).unwrap();
    let decomposition =
        decompose_error(&phi, &fx.f0_train, EstimatorKind::MinNorm, 0.1).unwrap();
    let closed_form = prediction_variance(&decomposition, &fx.structure, x_query).unwrap();

    let basis = fx.structure.basis_row(x_query);
    let mut predictions: Vec<C> = Vec::with_capacity(replicates);
    for r in 0..replicates {
        let mut rng = substream(2024, &[NOISE_STREAM, r as u64]);
        let y: Vec<C> = fx
            .f0_train
            .iter()
            .map(|f| f + complex_gaussian::<f64>(&mut rng, 0.1))
            .collect();
        let theta = min_norm_theta(&fx.factorization, &y).unwrap();
        let mut value = C::new(0.0, 0.0);
        for (b, t) in basis.iter().zip(&theta) {
            value += *b * *t;
        }
        predictions.push(value);
    }
    let mean = predictions
        .iter()
        .fold(C::new(0.0, 0.0), |acc, p| acc + *p)
        .scale(1.0 / replicates as f64);
    let empirical = predictions
        .iter()
        .map(|p| (*p - mean).norm_sqr())
        .sum::<f64>()
        / replicates as f64;

    let relative = (empirical - closed_form).abs() / closed_form;
    assert!(
        relative <= 0.10,
        "empirical {empirical:.6} vs closed form {closed_form:.6} (rel {relative:.3})"
    );
}

#[test]
fn variance_is_dominated_by_smallest_singular_value_bound() {
    let fx = fixture();
    let phi = regression_matrix(&fx.structure, &fx.inputs).unwrap();
    let decomposition =
        decompose_error(&phi, &fx.f0_train, EstimatorKind::MinNorm, 0.1).unwrap();
    let sigma_min = fx.factorization.sigma_min();
    for x in [0.25, 0.5, 3.75, 8.5] {
        let variance = prediction_variance(&decomposition, &fx.structure, x).unwrap();
        let basis_norm_sqr: f64 = fx.structure.basis_row(x).iter().map(|e| e.norm_sqr()).sum();
        let bound = 0.1 * basis_norm_sqr / (sigma_min * sigma_min);
        assert!(
            variance <= bound * (1.0 + 1e-12),
            "x = {x}: variance {variance} exceeds bound {bound}"
        );
    }
}

#[test]
fn fits_interpolate_noisy_training_data_at_and_above_threshold() {
    let inputs = train_inputs(10);
    let mut rng = substream(77, &[ALPHA_STREAM, 0]);
    let generator = DataGenerator::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
    let mut noise_rng = substream(77, &[NOISE_STREAM, 0]);
    let data = generator.generate_dataset(&inputs, &mut noise_rng).unwrap();
    let y_norm = vector_norm(data.outputs());

    for order in [10, 14, 22, 30] {
        let structure = ModelStructure::linear(order, 30).unwrap();
        let model = fit_min_norm(&structure, &data).unwrap();
        let residual: Vec<C> = inputs
            .iter()
            .zip(data.outputs())
            .map(|(&x, y)| model.predict(x) - *y)
            .collect();
        assert!(
            vector_norm(&residual) <= 1e-8 * y_norm,
            "order {order}: residual {} vs {}",
            vector_norm(&residual),
            1e-8 * y_norm
        );
    }
}

#[test]
fn ridge_does_not_interpolate_but_min_norm_does() {
    let inputs = train_inputs(10);
    let mut rng = substream(78, &[ALPHA_STREAM, 0]);
    let generator = DataGenerator::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
    let mut noise_rng = substream(78, &[NOISE_STREAM, 0]);
    let data = generator.generate_dataset(&inputs, &mut noise_rng).unwrap();

    let structure = ModelStructure::linear(14, 30).unwrap();
    let ridge = fit_ridge(&structure, &data, 0.1).unwrap();
    let residual: Vec<C> = inputs
        .iter()
        .zip(data.outputs())
        .map(|(&x, y)| ridge.predict(x) - *y)
        .collect();
    assert!(
        vector_norm(&residual) > 1e-4 * vector_norm(data.outputs()),
        "ridge residual unexpectedly small"
    );
}

#[test]
fn ridge_approaches_min_norm_as_lambda_vanishes() {
    let inputs = train_inputs(10);
    let mut rng = substream(79, &[ALPHA_STREAM, 0]);
    let generator = DataGenerator::sample(GeneratorKind::Opt, 10, 30, 0.1, &mut rng).unwrap();
    let mut noise_rng = substream(79, &[NOISE_STREAM, 0]);
    let data = generator.generate_dataset(&inputs, &mut noise_rng).unwrap();

    let structure = ModelStructure::optimal(12, 10, 30).unwrap();
    let min_norm = fit_min_norm(&structure, &data).unwrap();
    let ridge = fit_ridge(&structure, &data, 1e-12).unwrap();
    let diff: Vec<C> = min_norm
        .theta()
        .iter()
        .zip(ridge.theta())
        .map(|(a, b)| *a - *b)
        .collect();
    assert!(vector_norm(&diff) <= 1e-6 * min_norm.parameter_norm());
}

#[test]
fn theta_star_norm_shrinks_from_threshold_to_max_order() {
    // For 100 coefficient draws of the lin generator, the noise-free solution
    // norm of the linear family at order 30 stays at or below the order-10
    // norm. The regression matrices do not depend on the draw, so factor once.
    let inputs = train_inputs(10);
    let phi_10 = regression_matrix(&ModelStructure::linear(10, 30).unwrap(), &inputs).unwrap();
    let phi_30 = regression_matrix(&ModelStructure::linear(30, 30).unwrap(), &inputs).unwrap();
    let f_10 = svd(&phi_10).unwrap();
    let f_30 = svd(&phi_30).unwrap();

    for draw in 0..100u64 {
        let mut rng = substream(555, &[ALPHA_STREAM, draw]);
        let generator = DataGenerator::sample(GeneratorKind::Lin, 10, 30, 0.1, &mut rng).unwrap();
        let f0 = generator.evaluate_f0_many(&inputs);
        let norm_10 = vector_norm(&pseudo_inverse_apply(&f_10, &f0).unwrap());
        let norm_30 = vector_norm(&pseudo_inverse_apply(&f_30, &f0).unwrap());
        assert!(
            norm_30 <= norm_10,
            "draw {draw}: ||theta*|| grew from {norm_10} to {norm_30}"
        );
    }
}

#[test]
fn noise_free_fit_is_unbiased_reference_for_datasets() {
    // Dataset-level determinism glue: fitting the noise-free dataset equals
    // theta_star from the decomposition.
    let inputs = train_inputs(10);
    let mut rng = substream(91, &[ALPHA_STREAM, 0]);
    let generator = DataGenerator::sample(GeneratorKind::Opt, 10, 30, 0.0, &mut rng).unwrap();
    let data = generator
        .generate_dataset(&inputs, &mut substream(91, &[NOISE_STREAM, 0]))
        .unwrap();
    let structure = ModelStructure::optimal(10, 10, 30).unwrap();
    let fit = fit_min_norm(&structure, &data).unwrap();

    let phi = regression_matrix(&structure, &inputs).unwrap();
    let decomposition = decompose_error(
        &phi,
        &generator.evaluate_f0_many(&inputs),
        EstimatorKind::MinNorm,
        0.0,
    )
    .unwrap();
    for (a, b) in fit.theta().iter().zip(decomposition.theta_star()) {
        assert!((a - b).norm() < 1e-12);
    }
    // exactly specified square case recovers the true coefficients
    let theta0 = generator.coefficients_in(&structure).unwrap();
    for (a, b) in fit.theta().iter().zip(&theta0) {
        assert!((a - b).norm() < 1e-10);
    }
}
