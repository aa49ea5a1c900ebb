//! PPT, SPPT and super SPPT verdicts.
//!
//! SPPT is checked on a block factor: `ρ^Γ = Y†Y` where `Y` is `X` with every
//! `S_ij` replaced by `S_ij†`. Super SPPT requires
//! `S_ki S_kj† = S_kj† S_ki` for all `k < i ≤ j`. Both depend on the `A`-basis
//! the factor was computed in; PPT does not.

use crate::basis;
use crate::error::{Error, Result};
use crate::factorization::{self, BlockFactor};
use crate::linalg::{self, ComplexMatrix};
use crate::states::{self, BipartiteState};

/// Verdict record for one state in one `A`-basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub ppt: bool,
    /// Smallest eigenvalue of `ρ^Γ` (unnormalized).
    pub ppt_min_eig: f64,
    pub sppt: bool,
    /// Largest SPPT defect relative to `‖ρ‖_F`.
    pub sppt_residual: f64,
    pub super_sppt: bool,
    /// Largest normalized commutator over the `(k, i, j)` triples.
    pub ssppt_residual: f64,
    /// Columns are the `A`-basis vectors the verdicts refer to.
    pub basis: ComplexMatrix,
    pub tol: f64,
    /// Set when any residual lies within a factor 10 of its threshold.
    pub marginal: bool,
}

impl Classification {
    /// Assembles a classification, rejecting records that break
    /// `super_sppt ⇒ sppt ⇒ ppt`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        ppt: (bool, f64),
        sppt: (bool, f64),
        super_sppt: (bool, f64),
        rho_norm: f64,
        basis: ComplexMatrix,
        tol: f64,
    ) -> Result<Self> {
        if super_sppt.0 && !sppt.0 {
            return Err(Error::Internal(format!(
                "super SPPT (residual {:.3e}) but not SPPT (residual {:.3e})",
                super_sppt.1, sppt.1
            )));
        }
        if sppt.0 && !ppt.0 {
            return Err(Error::Internal(format!(
                "SPPT (residual {:.3e}) but not PPT (min eigenvalue {:.3e})",
                sppt.1, ppt.1
            )));
        }
        let near = |r: f64| r > tol / 10.0 && r <= tol * 10.0;
        let ppt_rel = if rho_norm > 0.0 { -ppt.1 / rho_norm } else { 0.0 };
        Ok(Self {
            ppt: ppt.0,
            ppt_min_eig: ppt.1,
            sppt: sppt.0,
            sppt_residual: sppt.1,
            super_sppt: super_sppt.0,
            ssppt_residual: super_sppt.1,
            basis,
            tol,
            marginal: near(ppt_rel) || near(sppt.1) || near(super_sppt.1),
        })
    }
}

/// `(λ_min(ρ^Γ) ≥ −tol·‖ρ‖_F, λ_min(ρ^Γ))`.
pub fn is_ppt(rho: &BipartiteState, tol: f64) -> Result<(bool, f64)> {
    let pt = linalg::partial_transpose(rho.matrix(), rho.dim_a(), rho.dim_b())?;
    let min = linalg::hermitian_eig(&pt)?.min();
    Ok((min >= -tol * rho.frobenius_norm(), min))
}

/// SPPT test on a factor.
///
/// The residual is the larger of the blockwise defect
/// `max_{i≤j} ‖Σ_{k≤i} X_k†(S_kj† S_ki − S_ki S_kj†)X_k‖_F` and `‖Y†Y − ρ^Γ‖_F`,
/// both divided by `‖ρ‖_F`.
pub fn is_sppt(factor: &BlockFactor, tol: f64) -> Result<(bool, f64)> {
    let rho = states::from_factor(factor)?;
    let norm = rho.frobenius_norm();
    if norm == 0.0 {
        return Ok((true, 0.0));
    }
    let m = factor.dim_a();

    let mut blockwise = 0.0_f64;
    for i in 0..m {
        for j in i..m {
            let mut defect = ComplexMatrix::zeros(factor.dim_b(), factor.dim_b());
            for k in 0..=i {
                let ski = factor.s_full(k, i);
                let skj_adj = factor.s_full(k, j).adjoint();
                let inner = &(&skj_adj * &ski) - &(&ski * &skj_adj);
                let xk = factor.x(k);
                defect = &defect + &(&(&xk.adjoint() * &inner) * xk);
            }
            blockwise = blockwise.max(defect.frobenius_norm() / norm);
        }
    }

    let y = factorization::assemble_y(factor)?;
    let pt = linalg::partial_transpose(rho.matrix(), m, factor.dim_b())?;
    let operator = (&(&y.adjoint() * &y) - &pt).frobenius_norm() / norm;

    let residual = blockwise.max(operator);
    Ok((residual <= tol, residual))
}

/// Super SPPT test: `max_{k<i≤j} ‖S_ki S_kj† − S_kj† S_ki‖_F / max(1, ‖S_ki‖_F ‖S_kj‖_F)`.
pub fn is_super_sppt(factor: &BlockFactor, tol: f64) -> Result<(bool, f64)> {
    factor.validate()?;
    let m = factor.dim_a();
    let mut residual = 0.0_f64;
    for k in 0..m {
        for i in k + 1..m {
            let ski = factor.s(k, i).expect("validated");
            for j in i..m {
                let skj_adj = factor.s(k, j).expect("validated").adjoint();
                let comm = ski.commutator(&skj_adj).frobenius_norm();
                let scale = (ski.frobenius_norm() * skj_adj.frobenius_norm()).max(1.0);
                residual = residual.max(comm / scale);
            }
        }
    }
    Ok((residual <= tol, residual))
}

/// Classifies `rho` with respect to the `A`-basis given by the columns of `basis`.
pub fn classify(rho: &BipartiteState, basis: &ComplexMatrix, tol: f64) -> Result<Classification> {
    classify_with_factor(rho, basis, tol).map(|(c, _)| c)
}

/// As [`classify`], also returning the factor computed in that basis.
pub fn classify_with_factor(
    rho: &BipartiteState,
    basis: &ComplexMatrix,
    tol: f64,
) -> Result<(Classification, BlockFactor)> {
    if basis.rows() != rho.dim_a() || basis.cols() != rho.dim_a() {
        return Err(Error::DimensionMismatch(format!(
            "basis is {}x{}, subsystem A has dimension {}",
            basis.rows(),
            basis.cols(),
            rho.dim_a()
        )));
    }
    let in_basis = basis::local_unitary_a(rho, &basis.adjoint())?;
    let factor = factorization::block_cholesky(&in_basis, tol)?.with_basis(basis.clone());
    let ppt = is_ppt(&in_basis, tol)?;
    let sppt = is_sppt(&factor, tol)?;
    let super_sppt = is_super_sppt(&factor, tol)?;
    let c = Classification::new(ppt, sppt, super_sppt, in_basis.frobenius_norm(), basis.clone(), tol)?;
    Ok((c, factor))
}
