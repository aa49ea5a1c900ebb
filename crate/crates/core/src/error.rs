use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (asymmetry {asymmetry:.3e} exceeds {bound:.3e})")]
    NotHermitian { asymmetry: f64, bound: f64 },
    #[error("matrix is not positive semidefinite (eigenvalue {min_eigenvalue:.3e} below {bound:.3e})")]
    NotPsd { min_eigenvalue: f64, bound: f64 },
    #[error("matrix is not unitary (defect {defect:.3e})")]
    NotUnitary { defect: f64 },
    #[error("eigenvalue iteration did not converge")]
    ConvergenceFailure,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("invalid probability distribution: {0}")]
    InvalidProbability(String),
    #[error("not a density matrix: {0}")]
    NotDensityMatrix(String),
    #[error("malformed block factor: {0}")]
    MalformedFactor(String),
    #[error("off-diagonal block ({i}, {j}) does not vanish on ker X_{i} from both sides (residual {residual:.3e})")]
    RangeViolation { i: usize, j: usize, residual: f64 },
    #[error("factor is not super SPPT (residual {residual:.3e} exceeds {tol:.3e})")]
    NotSuperSppt { residual: f64, tol: f64 },
    #[error("family is not commuting (residual {residual:.3e} exceeds {tol:.3e})")]
    NotCommutingFamily { residual: f64, tol: f64 },
    #[error("simultaneous diagonalization failed after {attempts} attempts")]
    DiagonalizationFailure { attempts: usize },
    #[error("internal error: {0}")]
    Internal(String),
}
