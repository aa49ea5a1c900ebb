//! Block Cholesky factorization `ρ = X†X` with `X` block upper triangular.
//!
//! Block `(i, j)` of `X` is `S_ij X_i` for `i ≤ j` (with `S_ii = I`) and zero
//! below the diagonal. `block_cholesky` picks each `X_i` as the Hermitian PSD
//! square root of its Schur complement, which makes the factor unique.
//! Indices are 0-based throughout.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::states::BipartiteState;

/// Schur complement eigenvalues at or below
/// `RANK_FLOOR_EPS · ε · MN · ‖ρ‖_F` are treated as zero.
pub const RANK_FLOOR_EPS: f64 = 100.0;

/// Factor data `{X_1..X_M, S_ij for i < j}` and the `A`-basis it refers to.
///
/// `S_ii = I` and `S_ij = 0` for `i > j` are implicit and never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockFactor {
    dim_a: usize,
    dim_b: usize,
    x: Vec<ComplexMatrix>,
    s: BTreeMap<(usize, usize), ComplexMatrix>,
    basis: ComplexMatrix,
    reconstruction_residual: Option<f64>,
}

impl BlockFactor {
    /// `s` must hold exactly the pairs `(i, j)` with `i < j < dim_a`.
    pub fn new(
        dim_a: usize,
        dim_b: usize,
        x: Vec<ComplexMatrix>,
        s: BTreeMap<(usize, usize), ComplexMatrix>,
        basis: ComplexMatrix,
    ) -> Result<Self> {
        let factor = Self { dim_a, dim_b, x, s, basis, reconstruction_residual: None };
        factor.validate()?;
        Ok(factor)
    }

    pub(crate) fn validate(&self) -> Result<()> {
        let (m, n) = (self.dim_a, self.dim_b);
        if m == 0 || n == 0 {
            return Err(Error::MalformedFactor("dimensions must be positive".into()));
        }
        if self.x.len() != m {
            return Err(Error::MalformedFactor(format!("{} diagonal blocks for M = {m}", self.x.len())));
        }
        if let Some(k) = self.x.iter().position(|xk| xk.rows() != n || xk.cols() != n) {
            return Err(Error::MalformedFactor(format!("X_{k} is not {n}x{n}")));
        }
        if self.s.len() != m * (m - 1) / 2 {
            return Err(Error::MalformedFactor(format!(
                "{} off-diagonal blocks, expected {}",
                self.s.len(),
                m * (m - 1) / 2
            )));
        }
        for (&(i, j), sij) in &self.s {
            if !(i < j && j < m) {
                return Err(Error::MalformedFactor(format!("S_({i},{j}) is not above the diagonal")));
            }
            if sij.rows() != n || sij.cols() != n {
                return Err(Error::MalformedFactor(format!("S_({i},{j}) is not {n}x{n}")));
            }
        }
        if self.basis.rows() != m || self.basis.cols() != m {
            return Err(Error::MalformedFactor(format!("basis is not {m}x{m}")));
        }
        Ok(())
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn x(&self, k: usize) -> &ComplexMatrix {
        &self.x[k]
    }

    pub fn xs(&self) -> &[ComplexMatrix] {
        &self.x
    }

    /// Stored `S_ij`, `i < j`.
    pub fn s(&self, i: usize, j: usize) -> Option<&ComplexMatrix> {
        self.s.get(&(i, j))
    }

    /// `S_ij` including the implicit `S_ii = I` and `S_ij = 0` for `i > j`.
    pub fn s_full(&self, i: usize, j: usize) -> ComplexMatrix {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.s[&(i, j)].clone(),
            std::cmp::Ordering::Equal => ComplexMatrix::identity(self.dim_b),
            std::cmp::Ordering::Greater => ComplexMatrix::zeros(self.dim_b, self.dim_b),
        }
    }

    pub fn s_blocks(&self) -> &BTreeMap<(usize, usize), ComplexMatrix> {
        &self.s
    }

    pub fn basis(&self) -> &ComplexMatrix {
        &self.basis
    }

    /// `‖from_factor(self) − ρ‖_F / ‖ρ‖_F` for the state this factor came from,
    /// when produced by [`block_cholesky`].
    pub fn reconstruction_residual(&self) -> Option<f64> {
        self.reconstruction_residual
    }

    /// Records the `A`-basis the factor refers to.
    pub fn with_basis(mut self, basis: ComplexMatrix) -> Self {
        assert_eq!(basis.rows(), self.dim_a, "basis dimension");
        self.basis = basis;
        self
    }

    pub fn with_reconstruction_residual(mut self, residual: Option<f64>) -> Self {
        self.reconstruction_residual = residual;
        self
    }

    /// Block `(k, i)` of `X`: `S_ki X_k`.
    pub fn x_block(&self, k: usize, i: usize) -> ComplexMatrix {
        match k.cmp(&i) {
            std::cmp::Ordering::Less => &self.s[&(k, i)] * &self.x[k],
            std::cmp::Ordering::Equal => self.x[k].clone(),
            std::cmp::Ordering::Greater => ComplexMatrix::zeros(self.dim_b, self.dim_b),
        }
    }

    /// Applies the gauge `X_k → W_k X_k`, `S_kj → W_k S_kj W_k†`.
    ///
    /// This leaves `X†X` unchanged. The recorded basis is kept.
    pub fn gauge(&self, unitaries: &[ComplexMatrix]) -> Result<Self> {
        if unitaries.len() != self.dim_a {
            return Err(Error::DimensionMismatch(format!("{} gauge unitaries for M = {}", unitaries.len(), self.dim_a)));
        }
        for w in unitaries {
            if w.rows() != self.dim_b {
                return Err(Error::DimensionMismatch("gauge unitary has wrong size".into()));
            }
            w.check_unitary()?;
        }
        let x = self.x.iter().zip(unitaries).map(|(xk, w)| w * xk).collect();
        let s = self
            .s
            .iter()
            .map(|(&(k, j), skj)| ((k, j), &(&unitaries[k] * skj) * &unitaries[k].adjoint()))
            .collect();
        Ok(Self { x, s, ..self.clone() })
    }
}

/// Canonical block Cholesky factor of `rho` in its computational `A`-basis.
///
/// `tol` is relative to `‖ρ‖_F`: Schur complement eigenvalues below
/// `-tol·‖ρ‖_F` fail with `NotPsd`, and each off-diagonal block must satisfy
/// `‖X_i S_ij X_i − R_ij‖_F ≤ tol·‖ρ‖_F` or `RangeViolation` is returned.
/// `S_ij = X_i⁺ R_ij X_i⁺`, with `X_i⁺` inverting only the eigenvalues of the
/// Schur complement above max(round-off floor, `tol²·λ_max`).
///
/// `X_i S_ij X_i = R_ij` needs `R_ij` to vanish on `ker X_i` from both sides.
/// Positivity of `ρ` gives only the left side, so low-rank states such as
/// `|01⟩ + |10⟩` have no factor of this form and yield `RangeViolation`.
pub fn block_cholesky(rho: &BipartiteState, tol: f64) -> Result<BlockFactor> {
    let (m, n) = (rho.dim_a(), rho.dim_b());
    let norm = rho.frobenius_norm();
    let abs_tol = tol * norm;
    let rank_floor = RANK_FLOOR_EPS * f64::EPSILON * (m * n) as f64 * norm;

    let mut x: Vec<ComplexMatrix> = Vec::with_capacity(m);
    let mut s = BTreeMap::new();
    // rows[k][j] = S_kj X_k for j ≥ k, filled as rows complete.
    let mut rows: Vec<Vec<Option<ComplexMatrix>>> = vec![vec![None; m]; m];

    for i in 0..m {
        let mut schur = rho.block(i, i);
        for row in rows.iter().take(i) {
            let t = row[i].as_ref().expect("computed in an earlier row");
            schur = &schur - &(&t.adjoint() * t);
        }
        let schur = schur.hermitian_part();
        let eig = linalg::hermitian_eig(&schur)?;
        if eig.min() < -abs_tol {
            return Err(Error::NotPsd { min_eigenvalue: eig.min(), bound: -abs_tol });
        }
        // Schur eigenvalues at round-off level are exact zeros of a
        // rank-deficient input; inverting them would amplify noise.
        let floor = rank_floor.max(tol * tol * eig.max());
        let xi = eig.reconstruct_with(|v| if v > floor { v.sqrt() } else { 0.0 });
        let xi_pinv = eig.reconstruct_with(|v| if v > floor { 1.0 / v.sqrt() } else { 0.0 });

        for j in i + 1..m {
            let mut r = rho.block(i, j);
            for row in rows.iter().take(i) {
                let ti = row[i].as_ref().expect("computed in an earlier row");
                let tj = row[j].as_ref().expect("computed in an earlier row");
                r = &r - &(&ti.adjoint() * tj);
            }
            let sij = &(&xi_pinv * &r) * &xi_pinv;
            let residual = (&(&(&xi * &sij) * &xi) - &r).frobenius_norm();
            if residual > abs_tol {
                return Err(Error::RangeViolation { i, j, residual });
            }
            rows[i][j] = Some(&sij * &xi);
            s.insert((i, j), sij);
        }
        rows[i][i] = Some(xi.clone());
        x.push(xi);
    }

    let factor = BlockFactor::new(m, n, x, s, ComplexMatrix::identity(m))?;
    let rebuilt = crate::states::from_factor(&factor)?;
    let residual = if norm > 0.0 {
        (rebuilt.matrix() - rho.matrix()).frobenius_norm() / norm
    } else {
        rebuilt.frobenius_norm()
    };
    Ok(factor.with_reconstruction_residual(Some(residual)))
}

fn assemble(factor: &BlockFactor, adjoint_s: bool) -> Result<ComplexMatrix> {
    factor.validate()?;
    let (m, n) = (factor.dim_a(), factor.dim_b());
    let mut out = ComplexMatrix::zeros(m * n, m * n);
    for i in 0..m {
        out.set_block(i, i, factor.x(i));
        for j in i + 1..m {
            let sij = factor.s(i, j).expect("validated");
            let sij = if adjoint_s { sij.adjoint() } else { sij.clone() };
            out.set_block(i, j, &(&sij * factor.x(i)));
        }
    }
    Ok(out)
}

/// The block upper triangular `X` with block `(i, j) = S_ij X_i`.
pub fn assemble_x(factor: &BlockFactor) -> Result<ComplexMatrix> {
    assemble(factor, false)
}

/// `X` with every `S_ij` replaced by `S_ij†`.
pub fn assemble_y(factor: &BlockFactor) -> Result<ComplexMatrix> {
    assemble(factor, true)
}
