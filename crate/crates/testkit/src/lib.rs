//! Independent numerical oracles for tests.
//!
//! These deliberately avoid the library's SVD code path: singular values are
//! cross-checked through eigenvalues of the Gram matrix `Phi^H Phi` computed
//! with a classical two-sided Jacobi eigenvalue iteration, and least-squares
//! solutions through the normal equations solved by Gaussian elimination
//! with partial pivoting.

// 2D similarity updates read clearest with explicit indices.
#![allow(clippy::needless_range_loop)]

use descent_lab::linalg::ComplexMatrix;
use num_complex::Complex;

type C64 = Complex<f64>;

/// Eigenvalues of a Hermitian matrix by the two-sided Jacobi method,
/// returned in descending order.
pub fn hermitian_eigenvalues(matrix: &ComplexMatrix<f64>) -> Vec<f64> {
    assert_eq!(matrix.rows(), matrix.cols(), "matrix must be square");
    let n = matrix.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|r| (0..n).map(|c| matrix.get(r, c)).collect())
        .collect();

    let off = |a: &Vec<Vec<C64>>| -> f64 {
        let mut acc = 0.0;
        for p in 0..n {
            for q in 0..n {
                if p != q {
                    acc += a[p][q].norm_sqr();
                }
            }
        }
        acc.sqrt()
    };

    let scale: f64 = (0..n)
        .map(|p| (0..n).map(|q| a[p][q].norm_sqr()).sum::<f64>())
        .sum::<f64>()
        .sqrt()
        .max(1.0);

    for _sweep in 0..100 {
        if off(&a) <= 1e-14 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p][q];
                let mag = apq.norm();
                if mag <= 1e-300 {
                    continue;
                }
                // Unitary similarity zeroing a[p][q]: phase-align, then a real
                // Jacobi rotation on the 2x2 block.
                let phase = apq / mag;
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                let tau = (aqq - app) / (2.0 * mag);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // Column update: columns p, q of A <- A * J with
                // J = [[c, s*phase], [-s*conj(phase), c]].
                for r in 0..n {
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = arp * c - arq * phase.conj() * s;
                    a[r][q] = arp * phase * s + arq * c;
                }
                // Row update with J^H from the left.
                for col in 0..n {
                    let apc = a[p][col];
                    let aqc = a[q][col];
                    a[p][col] = apc * c - aqc * phase * s;
                    a[q][col] = apc * phase.conj() * s + aqc * c;
                }
            }
        }
    }

    let mut eigenvalues: Vec<f64> = (0..n).map(|i| a[i][i].re).collect();
    eigenvalues.sort_by(|x, y| y.partial_cmp(x).expect("finite eigenvalues"));
    eigenvalues
}

/// Singular values of `phi` through the Gram-matrix eigenvalue route:
/// square roots of the eigenvalues of `Phi^H Phi`, descending, truncated to
/// `min(rows, cols)` values.
pub fn gram_singular_values(phi: &ComplexMatrix<f64>) -> Vec<f64> {
    let gram = phi
        .hermitian_transpose()
        .matmul(phi)
        .expect("gram dimensions agree");
    let r = phi.rows().min(phi.cols());
    hermitian_eigenvalues(&gram)
        .into_iter()
        .take(r)
        .map(|ev| ev.max(0.0).sqrt())
        .collect()
}

/// Solves a square complex system by Gaussian elimination with partial
/// pivoting. Panics on singular systems (oracle inputs are well conditioned).
pub fn solve_linear_system(matrix: &ComplexMatrix<f64>, rhs: &[C64]) -> Vec<C64> {
    assert_eq!(matrix.rows(), matrix.cols(), "system must be square");
    assert_eq!(matrix.rows(), rhs.len(), "rhs length mismatch");
    let n = matrix.rows();
    let mut a: Vec<Vec<C64>> = (0..n)
        .map(|r| (0..n).map(|c| matrix.get(r, c)).collect())
        .collect();
    let mut b: Vec<C64> = rhs.to_vec();

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&i, &j| {
                a[i][k]
                    .norm_sqr()
                    .partial_cmp(&a[j][k].norm_sqr())
                    .expect("finite pivots")
            })
            .expect("nonempty pivot range");
        a.swap(k, pivot_row);
        b.swap(k, pivot_row);
        let pivot = a[k][k];
        assert!(pivot.norm_sqr() > 0.0, "singular system in oracle solve");
        for i in (k + 1)..n {
            let factor = a[i][k] / pivot;
            for j in k..n {
                let akj = a[k][j];
                a[i][j] -= factor * akj;
            }
            let bk = b[k];
            b[i] -= factor * bk;
        }
    }

    let mut x = vec![C64::new(0.0, 0.0); n];
    for k in (0..n).rev() {
        let mut acc = b[k];
        for j in (k + 1)..n {
            acc -= a[k][j] * x[j];
        }
        x[k] = acc / a[k][k];
    }
    x
}

/// Least-squares solution of an (over- or exactly-determined) full-rank
/// system via the normal equations `(Phi^H Phi) theta = Phi^H y`.
pub fn normal_equation_solve(phi: &ComplexMatrix<f64>, y: &[C64]) -> Vec<C64> {
    assert!(
        phi.rows() >= phi.cols(),
        "normal equations need rows >= cols"
    );
    let phi_h = phi.hermitian_transpose();
    let gram = phi_h.matmul(phi).expect("gram dimensions agree");
    let rhs = phi_h.matvec(y).expect("rhs dimensions agree");
    solve_linear_system(&gram, &rhs)
}

/// Relative difference between two complex vectors.
pub fn relative_vector_error(actual: &[C64], expected: &[C64]) -> f64 {
    assert_eq!(actual.len(), expected.len());
    let mut diff = 0.0;
    let mut scale = 0.0;
    for (a, e) in actual.iter().zip(expected) {
        diff += (a - e).norm_sqr();
        scale += e.norm_sqr();
    }
    (diff / scale.max(f64::MIN_POSITIVE)).sqrt()
}
