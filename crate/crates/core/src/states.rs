//! Bipartite density operators and the generators used as fixtures and test
//! corpora.
//!
//! States need not be normalized: `from_factor` returns `X†X` as is and the
//! caller rescales with [`BipartiteState::normalized`] when needed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::factorization::BlockFactor;
use crate::linalg::{self, ComplexMatrix, HERMITIAN_TOL};
use crate::Complex64;

/// Relative bound on negative eigenvalues accepted for a state.
pub const PSD_TOL: f64 = 1e-9;

/// Trace tolerance for normalized states and probability vectors.
pub const TRACE_TOL: f64 = 1e-10;

/// Density operator on `C^dim_a ⊗ C^dim_b`, block `(i, j)` occupying rows
/// `i·dim_b..(i+1)·dim_b` and columns `j·dim_b..(j+1)·dim_b`.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteState {
    dim_a: usize,
    dim_b: usize,
    matrix: ComplexMatrix,
    normalized: bool,
}

impl BipartiteState {
    pub fn new(dim_a: usize, dim_b: usize, matrix: ComplexMatrix, normalized: bool) -> Result<Self> {
        let d = dim_a * dim_b;
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::DimensionMismatch("subsystem dimensions must be positive".into()));
        }
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a {dim_a}x{dim_b} system",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let norm = matrix.frobenius_norm();
        let asymmetry = matrix.hermitian_defect();
        if asymmetry > HERMITIAN_TOL * norm {
            return Err(Error::NotHermitian { asymmetry, bound: HERMITIAN_TOL * norm });
        }
        let eig = linalg::hermitian_eig(&matrix)?;
        if eig.min() < -PSD_TOL * norm {
            return Err(Error::NotPsd { min_eigenvalue: eig.min(), bound: -PSD_TOL * norm });
        }
        if normalized {
            let tr = matrix.trace();
            if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
                return Err(Error::NotDensityMatrix(format!("trace {tr} but state flagged normalized")));
            }
        }
        Ok(Self { dim_a, dim_b, matrix, normalized })
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    /// Block `ρ_ij` (0-based).
    pub fn block(&self, i: usize, j: usize) -> ComplexMatrix {
        self.matrix.block(i, j, self.dim_b)
    }

    /// Copy rescaled to unit trace.
    pub fn normalized(&self) -> Result<Self> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::NotDensityMatrix("cannot normalize a state with zero trace".into()));
        }
        Ok(Self {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            matrix: self.matrix.scale(1.0 / tr),
            normalized: true,
        })
    }

    /// Copy multiplied by `c > 0`; the result is flagged unnormalized.
    pub fn scaled(&self, c: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::OutOfRange(format!("scale factor {c} must be positive")));
        }
        Ok(Self { dim_a: self.dim_a, dim_b: self.dim_b, matrix: self.matrix.scale(c), normalized: false })
    }

    /// Replaces the matrix with one obtained from a transformation that
    /// preserves Hermiticity, positivity and trace.
    pub(crate) fn with_matrix(&self, matrix: ComplexMatrix) -> Self {
        Self { dim_a: self.dim_a, dim_b: self.dim_b, matrix: matrix.hermitian_part(), normalized: self.normalized }
    }
}

/// Two-qubit Werner state `W_p`, `0 ≤ p ≤ 1`, in the computational basis.
pub fn werner(p: f64) -> Result<BipartiteState> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfRange(format!("Werner parameter {p} outside [0, 1]")));
    }
    let d = 2.0 * p / 6.0;
    let m = (3.0 - 2.0 * p) / 6.0;
    let off = (4.0 * p - 3.0) / 6.0;
    #[rustfmt::skip]
    let entries = [
        d,   0.0, 0.0, 0.0,
        0.0, m,   off, 0.0,
        0.0, off, m,   0.0,
        0.0, 0.0, 0.0, d,
    ];
    BipartiteState::new(2, 2, ComplexMatrix::from_real(4, 4, &entries)?, true)
}

fn check_distribution(probs: &[f64]) -> Result<()> {
    if probs.iter().any(|&p| !p.is_finite() || p < 0.0) {
        return Err(Error::InvalidProbability("entries must be finite and non-negative".into()));
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > TRACE_TOL {
        return Err(Error::InvalidProbability(format!("entries sum to {total}")));
    }
    Ok(())
}

fn check_density(sigma: &ComplexMatrix, n: usize) -> Result<()> {
    if sigma.rows() != n || sigma.cols() != n {
        return Err(Error::NotDensityMatrix(format!("expected {n}x{n}, got {}x{}", sigma.rows(), sigma.cols())));
    }
    let norm = sigma.frobenius_norm();
    if sigma.hermitian_defect() > HERMITIAN_TOL * norm {
        return Err(Error::NotDensityMatrix("not Hermitian".into()));
    }
    let eig = linalg::hermitian_eig(sigma)?;
    if eig.min() < -PSD_TOL * norm {
        return Err(Error::NotDensityMatrix(format!("negative eigenvalue {}", eig.min())));
    }
    let tr = sigma.trace();
    if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
        return Err(Error::NotDensityMatrix(format!("trace {tr}")));
    }
    Ok(())
}

fn basis_projector(basis: &ComplexMatrix, n: usize) -> ComplexMatrix {
    let e = basis.column(n);
    ComplexMatrix::outer(&e, &e)
}

/// Classical-quantum state `Σ_n p_n |e_n⟩⟨e_n| ⊗ σ_n`, where `|e_n⟩` is column
/// `n` of `basis_a`.
pub fn cq_state(probs: &[f64], sigmas: &[ComplexMatrix], basis_a: &ComplexMatrix) -> Result<BipartiteState> {
    check_distribution(probs)?;
    basis_a.check_unitary()?;
    let m = basis_a.rows();
    if probs.len() != m || sigmas.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities and {} local states for a {m}-dimensional basis",
            probs.len(),
            sigmas.len()
        )));
    }
    let n = sigmas[0].rows();
    for sigma in sigmas {
        check_density(sigma, n)?;
    }
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    for (k, (&p, sigma)) in probs.iter().zip(sigmas).enumerate() {
        if p == 0.0 {
            continue;
        }
        rho = &rho + &basis_projector(basis_a, k).kron(sigma).scale(p);
    }
    BipartiteState::new(m, n, rho.hermitian_part(), true)
}

/// Classical-classical state `Σ_{n,m} p_nm |e_n⟩⟨e_n| ⊗ |f_m⟩⟨f_m|`.
///
/// `joint` holds one row per basis vector of `A`.
pub fn cc_state(joint: &[Vec<f64>], basis_a: &ComplexMatrix, basis_b: &ComplexMatrix) -> Result<BipartiteState> {
    basis_a.check_unitary()?;
    basis_b.check_unitary()?;
    let (m, n) = (basis_a.rows(), basis_b.rows());
    if joint.len() != m || joint.iter().any(|row| row.len() != n) {
        return Err(Error::DimensionMismatch(format!("joint distribution must be {m}x{n}")));
    }
    let flat: Vec<f64> = joint.iter().flatten().copied().collect();
    check_distribution(&flat)?;
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    for (a, row) in joint.iter().enumerate() {
        let pa = basis_projector(basis_a, a);
        for (b, &p) in row.iter().enumerate() {
            if p == 0.0 {
                continue;
            }
            rho = &rho + &pa.kron(&basis_projector(basis_b, b)).scale(p);
        }
    }
    BipartiteState::new(m, n, rho.hermitian_part(), true)
}

/// `ρ = X†X` with blocks `ρ_ij = Σ_{k ≤ i} X_k† S_ki† S_kj X_k` for `i ≤ j`.
pub fn from_factor(factor: &BlockFactor) -> Result<BipartiteState> {
    factor.validate()?;
    let (m, n) = (factor.dim_a(), factor.dim_b());
    // T_ki = S_ki X_k is block (k, i) of X.
    let t: Vec<Vec<ComplexMatrix>> =
        (0..m).map(|k| (0..m).map(|i| factor.x_block(k, i)).collect()).collect();
    let mut rho = ComplexMatrix::zeros(m * n, m * n);
    for i in 0..m {
        for j in i..m {
            let mut block = ComplexMatrix::zeros(n, n);
            for row in t.iter().take(i + 1) {
                block = &block + &(&row[i].adjoint() * &row[j]);
            }
            if i == j {
                block = block.hermitian_part();
            } else {
                rho.set_block(j, i, &block.adjoint());
            }
            rho.set_block(i, j, &block);
        }
    }
    BipartiteState::new(m, n, rho, false)
}

/// Random super SPPT state with full-rank `X_k`; see [`random_super_sppt_with_ranks`].
pub fn random_super_sppt(m: usize, n: usize, seed: u64) -> Result<(BipartiteState, BlockFactor)> {
    random_super_sppt_with_ranks(m, n, &vec![n; m], seed)
}

/// Random factor satisfying the commuting condition by construction, and its state.
///
/// Row `k` shares one random unitary eigenbasis `V_k`; `S_ki = V_k Λ_ki V_k†`
/// with complex Gaussian diagonal `Λ_ki`. `X_k = (G_k†G_k)^{1/2}` with `G_k` a
/// `ranks[k] × N` complex Gaussian matrix, so `rank X_k = min(ranks[k], N)`.
/// The PRNG is ChaCha8 seeded with `seed`.
pub fn random_super_sppt_with_ranks(
    m: usize,
    n: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<(BipartiteState, BlockFactor)> {
    if m < 2 || n < 1 {
        return Err(Error::DimensionMismatch(format!("need M >= 2 and N >= 1, got {m}x{n}")));
    }
    if ranks.len() != m {
        return Err(Error::DimensionMismatch(format!("{} ranks for M = {m}", ranks.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(m);
    let mut s = std::collections::BTreeMap::new();
    for (k, &rank) in ranks.iter().enumerate() {
        x.push(random_root(rank, n, &mut rng)?);
        let v = linalg::random_unitary(n, &mut rng);
        for i in k + 1..m {
            let lambda: Vec<Complex64> =
                (0..n).map(|_| Complex64::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal))).collect();
            let ski = &(&v * &ComplexMatrix::from_diagonal(&lambda)) * &v.adjoint();
            s.insert((k, i), ski);
        }
    }
    let factor = BlockFactor::new(m, n, x, s, ComplexMatrix::identity(m))?;
    let state = from_factor(&factor)?;
    Ok((state, factor))
}

/// Random factor with unconstrained complex Gaussian `S_ij` and
/// `X_k = (G_k†G_k)^{1/2}`, `G_k` of shape `ranks[k] × N`, and its (unnormalized) state.
///
/// Unlike [`random_density_with_rank`], low-rank states built this way always
/// admit a block Cholesky factor: every off-diagonal block vanishes on `ker X_i`.
pub fn random_factor_with_ranks(
    m: usize,
    n: usize,
    ranks: &[usize],
    seed: u64,
) -> Result<(BipartiteState, BlockFactor)> {
    if m < 1 || n < 1 {
        return Err(Error::DimensionMismatch(format!("need positive dimensions, got {m}x{n}")));
    }
    if ranks.len() != m {
        return Err(Error::DimensionMismatch(format!("{} ranks for M = {m}", ranks.len())));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = Vec::with_capacity(m);
    let mut s = std::collections::BTreeMap::new();
    for (k, &rank) in ranks.iter().enumerate() {
        x.push(random_root(rank, n, &mut rng)?);
        for i in k + 1..m {
            s.insert((k, i), linalg::complex_gaussian(n, n, &mut rng));
        }
    }
    let factor = BlockFactor::new(m, n, x, s, ComplexMatrix::identity(m))?;
    let state = from_factor(&factor)?;
    Ok((state, factor))
}

/// `(G†G)^{1/2}` for a `rank × n` Gaussian `G`, with the round-off
/// eigenvalues of `G†G` set to exactly zero.
fn random_root<R: Rng + ?Sized>(rank: usize, n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if rank == 0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let g = linalg::complex_gaussian(rank, n, rng);
    let eig = linalg::hermitian_eig(&(&g.adjoint() * &g))?;
    let cut = n.saturating_sub(rank);
    let values: Vec<f64> =
        eig.values.iter().enumerate().map(|(i, &v)| if i < cut { 0.0 } else { v.max(0.0).sqrt() }).collect();
    Ok(linalg::EigenSystem { values, vectors: eig.vectors }.reconstruct_with(|v| v))
}

/// `G†G / tr(G†G)` for a square complex Gaussian `G`.
pub fn random_density(m: usize, n: usize, seed: u64) -> Result<BipartiteState> {
    random_density_with_rank(m, n, m * n, seed)
}

/// As [`random_density`] with `G` of shape `rank × MN`.
pub fn random_density_with_rank(m: usize, n: usize, rank: usize, seed: u64) -> Result<BipartiteState> {
    if m == 0 || n == 0 || rank == 0 {
        return Err(Error::DimensionMismatch(format!("need positive dimensions, got {m}x{n} rank {rank}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = linalg::complex_gaussian(rank, m * n, &mut rng);
    let rho = (&g.adjoint() * &g).hermitian_part();
    let tr = rho.trace().re;
    BipartiteState::new(m, n, rho.scale(1.0 / tr), true)
}

/// Random full-rank `n × n` density matrix (Gaussian ensemble).
pub fn random_local_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = linalg::complex_gaussian(n, n, rng);
    let rho = (&g.adjoint() * &g).hermitian_part();
    let tr = rho.trace().re;
    rho.scale(1.0 / tr)
}

/// Random probability vector of length `len` with strictly positive entries.
pub fn random_distribution<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}
