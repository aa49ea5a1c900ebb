//! Local basis changes and a randomized search over `A`-bases.
//!
//! SPPT depends on the `A`-basis. [`random_basis_search`] samples Haar
//! unitaries and reports the first basis giving the requested verdict. A
//! failed search means only that none was found in the sample.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classification::{self, Classification};
use crate::error::{Error, Result};
use crate::linalg::{self, ComplexMatrix};
use crate::states::BipartiteState;

/// `(U ⊗ I) ρ (U† ⊗ I)`.
pub fn local_unitary_a(rho: &BipartiteState, u: &ComplexMatrix) -> Result<BipartiteState> {
    if u.rows() != rho.dim_a() || u.cols() != rho.dim_a() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} unitary on a {}-dimensional subsystem",
            u.rows(),
            u.cols(),
            rho.dim_a()
        )));
    }
    u.check_unitary()?;
    let full = u.kron(&ComplexMatrix::identity(rho.dim_b()));
    Ok(rho.with_matrix(&(&full * rho.matrix()) * &full.adjoint()))
}

/// `(I ⊗ U) ρ (I ⊗ U†)`.
pub fn local_unitary_b(rho: &BipartiteState, u: &ComplexMatrix) -> Result<BipartiteState> {
    if u.rows() != rho.dim_b() || u.cols() != rho.dim_b() {
        return Err(Error::DimensionMismatch(format!(
            "{}x{} unitary on a {}-dimensional subsystem",
            u.rows(),
            u.cols(),
            rho.dim_b()
        )));
    }
    u.check_unitary()?;
    let full = ComplexMatrix::identity(rho.dim_a()).kron(u);
    Ok(rho.with_matrix(&(&full * rho.matrix()) * &full.adjoint()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchTarget {
    Sppt,
    SuperSppt,
}

impl SearchTarget {
    fn achieved(self, c: &Classification) -> bool {
        match self {
            SearchTarget::Sppt => c.sppt,
            SearchTarget::SuperSppt => c.super_sppt,
        }
    }

    fn residual(self, c: &Classification) -> f64 {
        match self {
            SearchTarget::Sppt => c.sppt_residual,
            SearchTarget::SuperSppt => c.ssppt_residual,
        }
    }
}

#[derive(Debug, Clone)]
pub struct BasisCandidate {
    /// 0-based index of the trial that produced this basis.
    pub trial: usize,
    pub basis: ComplexMatrix,
    pub classification: Classification,
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// First trial achieving the target, if any.
    pub found: Option<BasisCandidate>,
    /// Trial with the lowest target residual (ties go to the earlier trial).
    pub best: BasisCandidate,
    pub trials: usize,
}

/// Classifies `rho` in `trials` Haar-random `A`-bases drawn from ChaCha8
/// seeded with `seed`, stopping at the first basis achieving `target`.
pub fn random_basis_search(
    rho: &BipartiteState,
    trials: usize,
    tol: f64,
    seed: u64,
    target: SearchTarget,
) -> Result<SearchOutcome> {
    if trials == 0 {
        return Err(Error::OutOfRange("at least one trial is required".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<BasisCandidate> = None;
    for trial in 0..trials {
        let basis = linalg::random_unitary(rho.dim_a(), &mut rng);
        let classification = classification::classify(rho, &basis, tol)?;
        let candidate = BasisCandidate { trial, basis, classification };
        if target.achieved(&candidate.classification) {
            return Ok(SearchOutcome { found: Some(candidate.clone()), best: candidate, trials: trial + 1 });
        }
        let better = match &best {
            None => true,
            Some(b) => target.residual(&candidate.classification) < target.residual(&b.classification),
        };
        if better {
            best = Some(candidate);
        }
    }
    Ok(SearchOutcome { found: None, best: best.expect("trials >= 1"), trials })
}
