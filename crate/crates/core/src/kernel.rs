//! Dense complex matrices and the spectral/solving primitives the frame layers
//! are built on.
//!
//! Every operator in this crate (synthesis, analysis, frame operators, the
//! controller of a controlled frame, each block of a g-frame) is a [`Matrix`].
//! Vectors are plain `[C64]` slices; inner products are linear in the first
//! argument and conjugate-linear in the second.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen, SVD};

use crate::error::{FrameError, Result};

pub type C64 = nalgebra::Complex<f64>;

/// Default relative tolerance for verdicts and Hermitian checks.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `solve_pd` rejects matrices with `λ_min <= PD_RATIO * λ_max`.
pub const PD_RATIO: f64 = 1e-12;

pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `⟨a, b⟩ = Σ a_i · conj(b_i)`.
pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(C64::new(0.0, 0.0), |acc, (x, y)| acc + x * y.conj())
}

pub fn norm_sq(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    norm_sq(a).sqrt()
}

pub fn sub(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn real_vector(values: &[f64]) -> Vec<C64> {
    values.iter().map(|&v| C64::new(v, 0.0)).collect()
}

fn all_finite<'a>(entries: impl IntoIterator<Item = &'a C64>) -> bool {
    entries
        .into_iter()
        .all(|z| z.re.is_finite() && z.im.is_finite())
}

pub(crate) fn check_vector(v: &[C64], len: usize, what: &'static str) -> Result<()> {
    if v.len() != len {
        return Err(FrameError::ShapeMismatch(format!(
            "{what} has length {}, expected {len}",
            v.len()
        )));
    }
    if !all_finite(v) {
        return Err(FrameError::NonFinite(what));
    }
    Ok(())
}

/// Dense complex matrix with positive dimensions and finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix(DMatrix<C64>);

impl Matrix {
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(FrameError::Empty("matrix"));
        }
        if entries.len() != rows * cols {
            return Err(FrameError::ShapeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if !all_finite(&entries) {
            return Err(FrameError::NonFinite("matrix"));
        }
        Ok(Matrix(DMatrix::from_row_slice(rows, cols, &entries)))
    }

    /// Builds a matrix from parallel real/imaginary row-major arrays.
    pub fn from_parts(rows: usize, cols: usize, re: &[f64], im: &[f64]) -> Result<Self> {
        if re.len() != im.len() {
            return Err(FrameError::ShapeMismatch(format!(
                "{} real parts but {} imaginary parts",
                re.len(),
                im.len()
            )));
        }
        let entries = re.iter().zip(im).map(|(&r, &i)| C64::new(r, i)).collect();
        Self::from_row_major(rows, cols, entries)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(FrameError::ShapeMismatch("ragged rows".into()));
            }
            entries.extend(row.iter().map(|&v| C64::new(v, 0.0)));
        }
        Self::from_row_major(rows.len(), cols, entries)
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Result<Self> {
        if columns.is_empty() || rows == 0 {
            return Err(FrameError::Empty("matrix"));
        }
        for c in columns {
            check_vector(c, rows, "column")?;
        }
        Ok(Matrix(DMatrix::from_fn(rows, columns.len(), |i, j| {
            columns[j][i]
        })))
    }

    pub fn identity(n: usize) -> Self {
        Matrix(DMatrix::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix(DMatrix::zeros(rows, cols))
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Matrix(DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(diag[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        }))
    }

    pub(crate) fn from_inner(m: DMatrix<C64>) -> Self {
        Matrix(m)
    }

    pub fn as_inner(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn row_major(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for i in 0..self.rows() {
            out.extend(self.0.row(i).iter().copied());
        }
        out
    }

    pub fn row(&self, i: usize) -> Vec<C64> {
        self.0.row(i).iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        self.0.column(j).iter().copied().collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Matrix {
        Matrix(self.0.adjoint())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols() != other.rows() {
            return Err(FrameError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(Matrix(&self.0 * &other.0))
    }

    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        check_vector(v, self.cols(), "vector")?;
        Ok((0..self.rows())
            .map(|i| {
                self.0
                    .row(i)
                    .iter()
                    .zip(v)
                    .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.0.shape() != other.0.shape() {
            return Err(FrameError::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows(),
                self.cols(),
                other.rows(),
                other.cols()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix(&self.0 + &other.0))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix(&self.0 - &other.0))
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix(&self.0 * s)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        self.check_same_shape(other)?;
        Ok(self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    fn require_square(&self) -> Result<()> {
        if !self.is_square() {
            return Err(FrameError::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        Ok(())
    }

    /// `‖M − M*‖_F / max(1, ‖M‖_F)`.
    pub fn hermitian_deviation(&self) -> Result<f64> {
        self.require_square()?;
        let skew = &self.0 - self.0.adjoint();
        let num = skew.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        Ok(num / self.frobenius_norm().max(1.0))
    }

    /// `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> Result<Matrix> {
        self.require_square()?;
        Ok(Matrix((&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0)))
    }

    pub fn eig_hermitian(&self) -> Result<HermitianEigen> {
        self.eig_hermitian_tol(DEFAULT_TOL)
    }

    /// Eigendecomposition of a matrix that is Hermitian up to `tol`; the
    /// Hermitian part is decomposed. Eigenvalues ascend.
    pub fn eig_hermitian_tol(&self, tol: f64) -> Result<HermitianEigen> {
        let deviation = self.hermitian_deviation()?;
        if deviation > tol {
            return Err(FrameError::NotHermitian {
                deviation,
                tolerance: tol,
            });
        }
        let sym = self.hermitian_part()?;
        let eig = SymmetricEigen::new(sym.0);
        let n = eig.eigenvalues.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let eigenvectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Ok(HermitianEigen {
            eigenvalues,
            eigenvectors: Matrix(eigenvectors),
        })
    }

    /// Solves `M X = B` for Hermitian positive definite `M`.
    pub fn solve_pd(&self, b: &Matrix) -> Result<Matrix> {
        self.require_square()?;
        if b.rows() != self.rows() {
            return Err(FrameError::ShapeMismatch(format!(
                "right-hand side has {} rows, expected {}",
                b.rows(),
                self.rows()
            )));
        }
        let eig = self.eig_hermitian()?;
        let (lo, hi) = (eig.min(), eig.max());
        if hi <= 0.0 || lo <= PD_RATIO * hi {
            return Err(FrameError::NotPositiveDefinite { lambda_min: lo });
        }
        let chol = Cholesky::new(self.hermitian_part()?.0)
            .ok_or(FrameError::NotPositiveDefinite { lambda_min: lo })?;
        Ok(Matrix(chol.solve(&b.0)))
    }

    /// General LU solve of `M X = B`.
    pub fn solve(&self, b: &Matrix) -> Result<Matrix> {
        self.require_square()?;
        if b.rows() != self.rows() {
            return Err(FrameError::ShapeMismatch(format!(
                "right-hand side has {} rows, expected {}",
                b.rows(),
                self.rows()
            )));
        }
        let x = self
            .0
            .clone()
            .lu()
            .solve(&b.0)
            .ok_or(FrameError::Singular)?;
        if !all_finite(x.iter()) {
            return Err(FrameError::Singular);
        }
        Ok(Matrix(x))
    }

    pub fn inverse(&self) -> Result<Matrix> {
        self.solve(&Matrix::identity(self.rows()))
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let svd = SVD::new(self.0.clone(), false, false);
        let mut s: Vec<f64> = svd.singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        s
    }

    /// Orthonormal basis (as columns) of the right singular subspace with
    /// singular values above `tol * σ_max`, i.e. the row space.
    pub(crate) fn row_space_basis(&self, tol: f64) -> DMatrix<C64> {
        let svd = SVD::new(self.0.clone(), false, true);
        let v_t = svd.v_t.expect("v_t requested");
        let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
        let keep: Vec<usize> = (0..svd.singular_values.len())
            .filter(|&k| sigma_max > 0.0 && svd.singular_values[k] > tol * sigma_max)
            .collect();
        DMatrix::from_fn(self.cols(), keep.len(), |i, j| v_t[(keep[j], i)].conj())
    }

    /// Orthonormal basis of `{x : M x = 0}`, treating singular values at or
    /// below `tol * σ_max` as zero. Vectors are the eigenvectors of the
    /// kernel projector `I − V V*` with eigenvalue near 1, in ascending
    /// eigenvalue order.
    pub fn null_space(&self, tol: f64) -> Vec<Vec<C64>> {
        let n = self.cols();
        let v = self.row_space_basis(tol);
        let nullity = n - v.ncols();
        if nullity == 0 {
            return Vec::new();
        }
        let projector = DMatrix::<C64>::identity(n, n) - &v * v.adjoint();
        let eig = Matrix(projector)
            .eig_hermitian_tol(f64::INFINITY)
            .expect("projector is square");
        (n - nullity..n)
            .map(|k| eig.eigenvectors.column(k))
            .collect()
    }

    /// Largest singular value.
    pub fn operator_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }
}

/// Ascending eigenvalues with a unitary matrix of eigenvectors (columns).
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl HermitianEigen {
    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// `V · diag(λ) · V*`.
    pub fn reconstruct(&self) -> Matrix {
        let v = &self.eigenvectors.0;
        let n = self.eigenvalues.len();
        let d = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(self.eigenvalues[i], 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Matrix(v * d * v.adjoint())
    }
}
