//! Randomized invariants of the factorization, the pseudo-inverse, the
//! estimators, and the structure families.

use descent_lab::estimators::{min_norm_theta, ridge_theta};
use descent_lab::linalg::{
    hermitian_dot, pseudo_inverse_apply, svd, vector_norm, ComplexMatrix,
};
use descent_lab::model::StructureFamily;
use descent_lab::spectrum::verify_interlacing;
use num_complex::Complex;
use proptest::prelude::*;

type C = Complex<f64>;

fn entries_for(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix<f64>> {
    prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), rows * cols).prop_map(move |parts| {
        let entries = parts.into_iter().map(|(re, im)| C::new(re, im)).collect();
        ComplexMatrix::new(rows, cols, entries).expect("valid matrix")
    })
}

fn matrix_strategy(
    max_rows: usize,
    max_cols: usize,
) -> impl Strategy<Value = ComplexMatrix<f64>> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(rows, cols)| entries_for(rows, cols))
}

/// Strictly more rows than columns.
fn tall_matrix_strategy(
    max_cols: usize,
    max_extra: usize,
) -> impl Strategy<Value = ComplexMatrix<f64>> {
    (1..=max_cols, 1..=max_extra).prop_flat_map(|(cols, extra)| entries_for(cols + extra, cols))
}

/// Strictly more columns than rows.
fn wide_matrix_strategy(
    max_rows: usize,
    max_extra: usize,
) -> impl Strategy<Value = ComplexMatrix<f64>> {
    (1..=max_rows, 1..=max_extra).prop_flat_map(|(rows, extra)| entries_for(rows, rows + extra))
}

fn max_abs_pairwise_dot(m: &ComplexMatrix<f64>) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..m.cols() {
        for b in 0..m.cols() {
            let dot = hermitian_dot(&m.column(a), &m.column(b)).norm();
            let target = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // Reconstruction and orthonormality hold on random matrices up to 20x30.
    #[test]
    fn svd_reconstructs_with_orthonormal_factors(m in matrix_strategy(20, 30)) {
        let f = svd(&m).unwrap();
        let sigma = f.singular_values();
        for w in sigma.windows(2) {
            prop_assert!(w[0] >= w[1]);
        }
        prop_assert!(sigma.iter().all(|s| *s >= 0.0));
        prop_assert_eq!(sigma.len(), m.rows().min(m.cols()));

        prop_assert!(max_abs_pairwise_dot(f.left_vectors()) <= 1e-10);
        prop_assert!(max_abs_pairwise_dot(f.right_vectors()) <= 1e-10);

        let rec = f.reconstruct();
        let mut err = 0.0f64;
        for (a, b) in rec.entries().iter().zip(m.entries()) {
            err += (a - b).norm_sqr();
        }
        prop_assert!(err.sqrt() <= 1e-10 * f.sigma_max().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    // Appending any column interleaves the two spectra.
    #[test]
    fn interlacing_holds_for_appended_columns(
        m in matrix_strategy(12, 14),
        col_parts in prop::collection::vec((-10.0f64..10.0, -10.0f64..10.0), 12),
    ) {
        let column: Vec<C> = col_parts
            .into_iter()
            .take(m.rows())
            .map(|(re, im)| C::new(re, im))
            .collect();
        let verdict = verify_interlacing(&m, &column).unwrap();
        prop_assert!(verdict.holds(), "violations: {:?}", verdict.violations());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    // Phi pinv(Phi) acts as the identity on the column space.
    #[test]
    fn pseudo_inverse_is_identity_on_column_space(
        m in tall_matrix_strategy(8, 8),
        w_parts in prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), 8),
    ) {
        let f = svd(&m).unwrap();
        prop_assume!(f.sigma_min() > 1e-6 * f.sigma_max().max(1.0));
        let w: Vec<C> = w_parts.into_iter().take(m.cols()).map(|(re, im)| C::new(re, im)).collect();
        let rhs = m.matvec(&w).unwrap();
        prop_assume!(vector_norm(&rhs) > 1e-6);
        let back = m.matvec(&pseudo_inverse_apply(&f, &rhs).unwrap()).unwrap();
        let mut err = 0.0f64;
        for (a, b) in back.iter().zip(&rhs) {
            err += (a - b).norm_sqr();
        }
        prop_assert!(err.sqrt() <= 1e-9 * vector_norm(&rhs));
    }

    // Repeated factorization of the same matrix is bit-identical.
    #[test]
    fn factorization_is_deterministic(m in matrix_strategy(10, 12)) {
        let f1 = svd(&m).unwrap();
        let f2 = svd(&m).unwrap();
        let bits = |f: &descent_lab::linalg::SvdFactorization<f64>| -> Vec<u64> {
            let mut v: Vec<u64> = f.singular_values().iter().map(|s| s.to_bits()).collect();
            for e in f
                .left_vectors()
                .entries()
                .iter()
                .chain(f.right_vectors().entries())
            {
                v.push(e.re.to_bits());
                v.push(e.im.to_bits());
            }
            v
        };
        prop_assert_eq!(bits(&f1), bits(&f2));
    }

    // Among all least-squares minimizers, the minimum-norm solution has the
    // smallest norm: adding any null-space vector cannot shrink it.
    #[test]
    fn min_norm_beats_null_space_perturbations(
        m in wide_matrix_strategy(6, 6),
        y_parts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 6),
        seed_parts in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 12),
    ) {
        let f = svd(&m).unwrap();
        let y: Vec<C> = y_parts.into_iter().take(m.rows()).map(|(re, im)| C::new(re, im)).collect();
        let theta = min_norm_theta(&f, &y).unwrap();

        // null component of a random seed vector
        let seed: Vec<C> = seed_parts.into_iter().take(m.cols()).map(|(re, im)| C::new(re, im)).collect();
        let mut projected = vec![C::new(0.0, 0.0); m.cols()];
        for k in 0..f.rank() {
            let vk = f.right_vectors().column(k);
            let coef = hermitian_dot(&vk, &seed);
            for (slot, v) in projected.iter_mut().zip(&vk) {
                *slot += *v * coef;
            }
        }
        let null_vec: Vec<C> = seed.iter().zip(&projected).map(|(s, p)| *s - *p).collect();
        let perturbed: Vec<C> = theta.iter().zip(&null_vec).map(|(t, w)| *t + *w).collect();
        prop_assert!(vector_norm(&perturbed) + 1e-12 >= vector_norm(&theta));
    }

    // Ridge shrinks: the fit norm never exceeds the minimum-norm fit and
    // decreases as lambda grows.
    #[test]
    fn ridge_norms_shrink_with_lambda(
        m in matrix_strategy(8, 12),
        y_parts in prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 8),
    ) {
        let f = svd(&m).unwrap();
        prop_assume!(f.sigma_min() > 1e-6 * f.sigma_max().max(1.0));
        let y: Vec<C> = y_parts.into_iter().take(m.rows()).map(|(re, im)| C::new(re, im)).collect();
        prop_assume!(vector_norm(&y) > 1e-6);
        let base = vector_norm(&min_norm_theta(&f, &y).unwrap());
        let mut last = base;
        for lambda in [1e-3, 1e-2, 1e-1, 1.0] {
            let norm = vector_norm(&ridge_theta(&f, &y, lambda).unwrap());
            prop_assert!(norm <= base + 1e-12 * base);
            prop_assert!(norm <= last + 1e-12 * base);
            last = norm;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    // Nested families extend by exactly one trailing frequency, and
    // frequencies stay distinct.
    #[test]
    fn families_nest_and_stay_distinct(n in 1usize..30, n_train in 1usize..=30) {
        for family in [
            StructureFamily::Linear { n_max: 30 },
            StructureFamily::Optimal { n_train, n_max: 30 },
        ] {
            let a = family.structure(n).unwrap();
            let b = family.structure(n + 1).unwrap();
            prop_assert_eq!(&b.frequencies()[..n], a.frequencies());
            let mut sorted = b.frequencies().to_vec();
            sorted.sort();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), b.order());
        }
    }
}
