//! Dense complex linear algebra used throughout the crate.
//!
//! [`ComplexMatrix`] wraps a `nalgebra` matrix of `Complex64` and only admits
//! finite entries. The free functions implement the handful of Hermitian
//! operations the factorization needs: eigendecomposition, PSD square root,
//! Moore-Penrose pseudoinverse and partial transposition over the first
//! tensor factor.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};

/// Relative asymmetry tolerated before a matrix is rejected as non-Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Default eigenvalue / PSD tolerance.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Absolute tolerance on `‖U†U − I‖_F / dim` for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex matrix with at least one row and one column and finite entries.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix(DMatrix<Complex64>);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidShape(format!("{rows}x{cols} matrix is empty")));
        }
        if entries.len() != rows * cols {
            return Err(Error::InvalidShape(format!(
                "{} entries given for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_slice(rows, cols, &entries))
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Wraps an existing `nalgebra` matrix after validating it.
    pub fn from_dmatrix(m: DMatrix<Complex64>) -> Result<Self> {
        if m.nrows() == 0 || m.ncols() == 0 {
            return Err(Error::InvalidShape(format!("{}x{} matrix is empty", m.nrows(), m.ncols())));
        }
        for c in 0..m.ncols() {
            for r in 0..m.nrows() {
                let z = m[(r, c)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self(m))
    }

    // Internal constructor for results of arithmetic on already-valid matrices.
    pub(crate) fn wrap(m: DMatrix<Complex64>) -> Self {
        debug_assert!(m.nrows() > 0 && m.ncols() > 0);
        Self(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        assert!(n > 0, "empty matrix");
        Self(DMatrix::identity(n, n))
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self::wrap(DMatrix::from_fn(n, n, |r, c| if r == c { diag[r] } else { ZERO }))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let d: Vec<Complex64> = diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::from_diagonal(&d)
    }

    /// Rank-one matrix `u v†`.
    pub fn outer(u: &[Complex64], v: &[Complex64]) -> Self {
        Self::wrap(DMatrix::from_fn(u.len(), v.len(), |r, c| u[r] * v[c].conj()))
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

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[(r, c)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.0
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.0
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.0[(r, c)]);
            }
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Complex64> {
        self.0.column(c).iter().copied().collect()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn scale_complex(&self, factor: Complex64) -> Self {
        Self(self.0.map(|z| z * factor))
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `‖A − A†‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        (&self.0 - self.0.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self((&self.0 + self.0.adjoint()) * Complex64::new(0.5, 0.0))
    }

    /// `‖U†U − I‖_F`.
    pub fn unitary_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        (self.0.adjoint() * &self.0 - DMatrix::<Complex64>::identity(n, n))
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Fails with `NotUnitary` when `‖U†U − I‖_F > UNITARY_TOL · dim`.
    pub fn check_unitary(&self) -> Result<()> {
        if !self.is_square() {
            return Err(Error::NotSquare { rows: self.rows(), cols: self.cols() });
        }
        let defect = self.unitary_defect();
        if defect > UNITARY_TOL * self.rows() as f64 {
            return Err(Error::NotUnitary { defect });
        }
        Ok(())
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        Self(self.0.kronecker(&other.0))
    }

    /// Copy of the `size × size` block at block coordinates `(bi, bj)`.
    pub fn block(&self, bi: usize, bj: usize, size: usize) -> Self {
        Self(self.0.view((bi * size, bj * size), (size, size)).into_owned())
    }

    pub fn set_block(&mut self, bi: usize, bj: usize, block: &Self) {
        let size_r = block.rows();
        let size_c = block.cols();
        self.0
            .view_mut((bi * size_r, bj * size_c), (size_r, size_c))
            .copy_from(&block.0);
    }

    /// Commutator-style difference `A B − B A`.
    pub fn commutator(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0 - &other.0 * &self.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows(), self.cols())?;
        for r in 0..self.rows() {
            write!(f, "  ")?;
            for c in 0..self.cols() {
                let z = self.0[(r, c)];
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols(), rhs.rows(), "inner dimensions differ");
        ComplexMatrix(&self.0 * &rhs.0)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix(&self.0 - &rhs.0)
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenSystem {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().unwrap()
    }

    /// `V f(Λ) V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = self.vectors.as_dmatrix();
        let n = v.nrows();
        let mut scaled = v.clone();
        for (c, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            for r in 0..n {
                scaled[(r, c)] *= w;
            }
        }
        ComplexMatrix::wrap(scaled * v.adjoint())
    }
}

fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let asymmetry = a.hermitian_defect();
    let bound = HERMITIAN_TOL * a.frobenius_norm();
    if asymmetry > bound {
        return Err(Error::NotHermitian { asymmetry, bound });
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix. The input is symmetrized first.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<EigenSystem> {
    check_hermitian(a)?;
    let n = a.rows();
    let sym = a.hermitian_part();
    let eig = SymmetricEigen::try_new(sym.0, f64::EPSILON, 0).ok_or(Error::ConvergenceFailure)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y]));

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenSystem { values, vectors: ComplexMatrix::wrap(vectors) })
}

/// Hermitian PSD square root. Eigenvalues in `[-tol, 0)` are clamped to zero.
pub fn psd_sqrt(a: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    if eig.min() < -tol {
        return Err(Error::NotPsd { min_eigenvalue: eig.min(), bound: -tol });
    }
    Ok(eig.reconstruct_with(|x| x.max(0.0).sqrt()))
}

/// Moore-Penrose pseudoinverse of a Hermitian matrix.
///
/// Eigenvalues with `|λ| ≤ rank_tol · max|λ|` are treated as zero.
pub fn pseudo_inverse(a: &ComplexMatrix, rank_tol: f64) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(a)?;
    let scale = eig.values.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let cutoff = rank_tol * scale;
    Ok(eig.reconstruct_with(|x| if scale > 0.0 && x.abs() > cutoff { 1.0 / x } else { 0.0 }))
}

/// Partial transpose over the first tensor factor: block `(i, j)` of the
/// output is block `(j, i)` of the input.
pub fn partial_transpose(rho: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let d = dim_a * dim_b;
    if dim_a == 0 || dim_b == 0 || rho.rows() != d || rho.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} matrix is not {d}x{d} for a {dim_a}x{dim_b} system",
            rho.rows(),
            rho.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(d, d);
    for i in 0..dim_a {
        for j in 0..dim_a {
            out.set_block(i, j, &rho.block(j, i, dim_b));
        }
    }
    Ok(out)
}

/// `n × n` matrix of i.i.d. standard complex Gaussians.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows * cols {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        entries.push(Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2);
    }
    ComplexMatrix::wrap(DMatrix::from_row_slice(rows, cols, &entries))
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the phases
/// of `diag(R)` absorbed into `Q`.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = complex_gaussian(n, n, rng);
    let qr = g.0.qr();
    let mut q = qr.q();
    let r = qr.r();
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { ONE };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    ComplexMatrix::wrap(q)
}
