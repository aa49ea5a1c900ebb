//! Strong positive partial transpose (SPPT) analysis of bipartite density
//! matrices.
//!
//! A state `ρ` on `C^M ⊗ C^N` is written as an `M × M` block matrix with
//! `N × N` blocks and factorized as `ρ = X†X` with `X` block upper triangular,
//! block `(i, j)` of `X` equal to `S_ij X_i`. From that factor the crate decides
//! whether `ρ` is PPT, SPPT (the partial transpose factorizes as `Y†Y` with
//! every `S_ij` replaced by its adjoint) or super SPPT (the `S_ki` of each row
//! form a commuting normal family), and for super SPPT states it emits an
//! explicit decomposition into weighted pure product states.
//!
//! Modules:
//! - [`linalg`]: complex matrices, Hermitian eigensolver, PSD square root,
//!   pseudoinverse, partial transpose.
//! - [`states`]: Werner, classical-quantum, classical-classical and random
//!   states, and states assembled from a factor.
//! - [`factorization`]: block Cholesky factorization and the `X`/`Y` block
//!   matrices.
//! - [`classification`]: PPT / SPPT / super SPPT verdicts with residuals.
//! - [`decomposition`]: joint eigenbases and separable decompositions.
//! - [`basis`]: local unitaries and randomized search for an SPPT basis.

pub mod basis;
pub mod classification;
pub mod decomposition;
pub mod error;
pub mod factorization;
pub mod linalg;
pub mod states;

pub use basis::{local_unitary_a, local_unitary_b, random_basis_search, SearchOutcome, SearchTarget};
pub use classification::{classify, classify_with_factor, is_ppt, is_sppt, is_super_sppt, Classification};
pub use decomposition::{
    joint_eigenbasis, separable_decomposition, verify_decomposition, JointSpectrum, ProductTerm,
    SeparableDecomposition, VerificationReport,
};
pub use error::{Error, Result};
pub use factorization::{assemble_x, assemble_y, block_cholesky, BlockFactor};
pub use linalg::{ComplexMatrix, EigenSystem, DEFAULT_TOL};
pub use states::BipartiteState;

pub use num_complex::Complex64;
