//! Dense complex matrices with a deterministic row-major layout.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense complex matrix, row-major, at least 1x1, all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T: Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, validating shape and finiteness.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                context: "matrix entries",
                expected: rows * cols,
                actual: entries.len(),
            });
        }
        if entries.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix entries",
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Zero matrix. Panics on zero dimensions (programming error).
    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        Self {
            rows,
            cols,
            entries: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds entry (r, c) from `f(r, c)`. The caller guarantees finite values.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(rows >= 1 && cols >= 1, "matrix dimensions must be >= 1");
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// Assembles a matrix whose j-th column is `columns[j]`.
    pub fn from_columns(columns: &[Vec<Complex<T>>]) -> Self {
        assert!(!columns.is_empty(), "at least one column required");
        let rows = columns[0].len();
        assert!(rows >= 1, "columns must be nonempty");
        assert!(
            columns.iter().all(|c| c.len() == rows),
            "columns must have equal lengths"
        );
        Self::from_fn(rows, columns.len(), |r, c| columns[c][r])
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex<T>] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        self.entries[row * self.cols + col]
    }

    pub fn row(&self, row: usize) -> &[Complex<T>] {
        assert!(row < self.rows, "row index out of bounds");
        &self.entries[row * self.cols..(row + 1) * self.cols]
    }

    pub fn column(&self, col: usize) -> Vec<Complex<T>> {
        assert!(col < self.cols, "column index out of bounds");
        (0..self.rows).map(|r| self.get(r, col)).collect()
    }

    /// Conjugate transpose.
    pub fn hermitian_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r).conj())
    }

    pub fn frobenius_norm(&self) -> T {
        let mut acc = T::zero();
        for e in &self.entries {
            acc += e.norm_sqr();
        }
        acc.sqrt()
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch {
                context: "matmul",
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                for c in 0..rhs.cols {
                    out.entries[r * rhs.cols + c] += a * rhs.get(k, c);
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, v: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: "matvec",
                expected: self.cols,
                actual: v.len(),
            });
        }
        let out = (0..self.rows)
            .map(|r| {
                let mut acc = Complex::new(T::zero(), T::zero());
                for (entry, value) in self.row(r).iter().zip(v) {
                    acc += *entry * *value;
                }
                acc
            })
            .collect();
        Ok(out)
    }

    /// Returns a new matrix with `col` appended as the last column.
    pub fn append_column(&self, col: &[Complex<T>]) -> Result<Self> {
        if col.len() != self.rows {
            return Err(Error::DimensionMismatch {
                context: "append_column",
                expected: self.rows,
                actual: col.len(),
            });
        }
        if col.iter().any(|e| !e.re.is_finite() || !e.im.is_finite()) {
            return Err(Error::NonFinite {
                context: "append_column",
            });
        }
        Ok(Self::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c)
            } else {
                col[r]
            }
        }))
    }
}

/// Hermitian inner product `a^H b = sum conj(a_i) b_i`.
pub fn hermitian_dot<T: Scalar>(a: &[Complex<T>], b: &[Complex<T>]) -> Complex<T> {
    assert_eq!(a.len(), b.len(), "inner product length mismatch");
    let mut acc = Complex::new(T::zero(), T::zero());
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * *y;
    }
    acc
}

/// Euclidean norm of a complex vector.
pub fn vector_norm<T: Scalar>(v: &[Complex<T>]) -> T {
    let mut acc = T::zero();
    for e in v {
        acc += e.norm_sqr();
    }
    acc.sqrt()
}
