//! Separable decompositions of super SPPT states.
//!
//! For row `k` of a super SPPT factor the matrices `{S_ki : i > k}` are normal
//! and mutually commuting, so they share an orthonormal eigenbasis `{u_l}`
//! with `S_ki = Σ_l λ^(ki)_l u_l u_l†`. Then
//!
//! ```text
//! ρ_k = Σ_{i,j ≥ k} |i⟩⟨j| ⊗ X_k† S_ki† S_kj X_k = Σ_l |ψ_l⟩⟨ψ_l| ⊗ v_l v_l†
//! ```
//!
//! with `ψ_l = |k⟩ + Σ_{i>k} conj(λ^(ki)_l) |i⟩` and `v_l = X_k† u_l`, and
//! `ρ = Σ_k ρ_k`. Every term is a weighted pure product state.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classification;
use crate::error::{Error, Result};
use crate::factorization::BlockFactor;
use crate::linalg::{self, ComplexMatrix};
use crate::states::{self, BipartiteState};
use crate::Complex64;

const MAX_ATTEMPTS: usize = 8;
const MAX_DEPTH: usize = 16;
// Relative gap below which eigenvalues of the random combination are treated
// as one cluster and refined recursively.
const CLUSTER_GAP: f64 = 1e-8;
const COEFFICIENT_SEED: u64 = 0x6a09_e667_f3bc_c908;

/// Simultaneous eigenbasis of a commuting normal family.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    /// Factor row this spectrum belongs to, when built by
    /// [`separable_decomposition`].
    pub row: Option<usize>,
    /// Columns `u_l` are the common eigenvectors.
    pub vectors: ComplexMatrix,
    /// `eigenvalues[i][l] = u_l† F_i u_l` for family member `i`.
    pub eigenvalues: Vec<Vec<Complex64>>,
}

impl JointSpectrum {
    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    /// Rank-one projector `u_l u_l†`.
    pub fn projector(&self, l: usize) -> ComplexMatrix {
        let u = self.vectors.column(l);
        ComplexMatrix::outer(&u, &u)
    }

    pub fn projectors(&self) -> Vec<ComplexMatrix> {
        (0..self.dim()).map(|l| self.projector(l)).collect()
    }

    /// `Σ_l λ_l u_l u_l†` for family member `i`.
    pub fn reconstruct(&self, i: usize) -> ComplexMatrix {
        let d = ComplexMatrix::from_diagonal(&self.eigenvalues[i]);
        &(&self.vectors * &d) * &self.vectors.adjoint()
    }
}

fn relative_scale(a: &ComplexMatrix) -> f64 {
    a.frobenius_norm().max(1.0)
}

/// `‖offdiag(U† F U)‖_F / max(1, ‖F‖_F)`.
fn leakage(f: &ComplexMatrix, u: &ComplexMatrix) -> f64 {
    let d = &(&u.adjoint() * f) * u;
    let mut off = 0.0;
    for r in 0..d.rows() {
        for c in 0..d.cols() {
            if r != c {
                off += d.get(r, c).norm_sqr();
            }
        }
    }
    off.sqrt() / relative_scale(f)
}

fn is_scalar(f: &ComplexMatrix, tol: f64) -> bool {
    let n = f.rows();
    let mean = f.trace() / n as f64;
    (f - &ComplexMatrix::identity(n).scale_complex(mean)).frobenius_norm() <= tol * relative_scale(f)
}

// Unitary diagonalizing every member of `family` (all d×d).
fn refine(family: &[ComplexMatrix], tol: f64, rng: &mut ChaCha8Rng, depth: usize) -> Result<ComplexMatrix> {
    let d = family[0].rows();
    if d == 1 || family.iter().all(|f| is_scalar(f, tol)) {
        return Ok(ComplexMatrix::identity(d));
    }
    if depth > MAX_DEPTH {
        return Err(Error::DiagonalizationFailure { attempts: depth });
    }

    let i_unit = Complex64::new(0.0, 1.0);
    let mut h = ComplexMatrix::zeros(d, d);
    for f in family {
        let scale = 1.0 / relative_scale(f);
        let alpha: f64 = rng.random_range(-1.0..1.0) * scale;
        let beta: f64 = rng.random_range(-1.0..1.0) * scale;
        let fa = f.adjoint();
        h = &h + &(&(f + &fa).scale(alpha) + &(&fa - f).scale_complex(i_unit * beta));
    }
    let eig = linalg::hermitian_eig(&h.hermitian_part())?;
    let spread = eig.values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);

    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for l in 1..=d {
        if l == d || eig.values[l] - eig.values[l - 1] > CLUSTER_GAP * spread {
            clusters.push((start, l));
            start = l;
        }
    }

    let mut out = eig.vectors.clone().into_dmatrix();
    for (lo, hi) in clusters {
        let size = hi - lo;
        if size == 1 {
            continue;
        }
        let q = ComplexMatrix::wrap(eig.vectors.as_dmatrix().columns(lo, size).into_owned());
        let sub: Vec<ComplexMatrix> = family.iter().map(|f| &(&q.adjoint() * f) * &q).collect();
        let inner = refine(&sub, tol, rng, depth + 1)?;
        let rotated = &q * &inner;
        out.columns_mut(lo, size).copy_from(rotated.as_dmatrix());
    }
    Ok(ComplexMatrix::wrap(out))
}

/// Common orthonormal eigenbasis of a family of normal matrices satisfying
/// `F_a F_b† = F_b† F_a` for all pairs (including `a = b`).
///
/// Diagonalizes a random Hermitian combination of the family, refines
/// near-degenerate clusters recursively, and accepts the basis only if every
/// member leaks at most `tol · max(1, ‖F‖_F)` off the diagonal. Up to 8 sets of
/// coefficients are tried; the coefficient stream is seeded deterministically.
pub fn joint_eigenbasis(family: &[ComplexMatrix], tol: f64) -> Result<JointSpectrum> {
    let Some(first) = family.first() else {
        return Err(Error::InvalidShape("empty family".into()));
    };
    let n = first.rows();
    for f in family {
        if !f.is_square() || f.rows() != n {
            return Err(Error::DimensionMismatch(format!("family member is {}x{}, expected {n}x{n}", f.rows(), f.cols())));
        }
    }
    let mut worst = 0.0_f64;
    for a in family {
        for b in family {
            let comm = a.commutator(&b.adjoint()).frobenius_norm();
            worst = worst.max(comm / (a.frobenius_norm() * b.frobenius_norm()).max(1.0));
        }
    }
    if worst > tol {
        return Err(Error::NotCommutingFamily { residual: worst, tol });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(COEFFICIENT_SEED);
    for _ in 0..MAX_ATTEMPTS {
        let Ok(u) = refine(family, tol, &mut rng, 0) else { continue };
        if family.iter().all(|f| leakage(f, &u) <= tol) {
            return Ok(spectrum_in(family, u, None));
        }
    }
    Err(Error::DiagonalizationFailure { attempts: MAX_ATTEMPTS })
}

fn spectrum_in(family: &[ComplexMatrix], vectors: ComplexMatrix, row: Option<usize>) -> JointSpectrum {
    let eigenvalues = family
        .iter()
        .map(|f| {
            let d = &(&vectors.adjoint() * f) * &vectors;
            (0..d.rows()).map(|l| d.get(l, l)).collect()
        })
        .collect();
    JointSpectrum { row, vectors, eigenvalues }
}

/// Within each group of joint-degenerate eigenvectors, rotate to the
/// eigenbasis of the compressed `h`.
fn break_ties(spectrum: JointSpectrum, family: &[ComplexMatrix], h: &ComplexMatrix, tol: f64) -> Result<JointSpectrum> {
    let n = spectrum.dim();
    let scales: Vec<f64> = family.iter().map(relative_scale).collect();
    let same = |a: usize, b: usize| {
        spectrum
            .eigenvalues
            .iter()
            .zip(&scales)
            .all(|(vals, s)| (vals[a] - vals[b]).norm() <= tol.sqrt() * s)
    };
    let mut group_of = vec![usize::MAX; n];
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for l in 0..n {
        if group_of[l] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (l..n).filter(|&m| group_of[m] == usize::MAX && same(l, m)).collect();
        for &m in &members {
            group_of[m] = groups.len();
        }
        groups.push(members);
    }

    let mut out = spectrum.vectors.clone().into_dmatrix();
    for members in groups.iter().filter(|g| g.len() > 1) {
        let cols: Vec<Vec<Complex64>> = members.iter().map(|&l| spectrum.vectors.column(l)).collect();
        let q = ComplexMatrix::wrap(nalgebra::DMatrix::from_fn(n, members.len(), |r, c| cols[c][r]));
        let eig = linalg::hermitian_eig(&(&(&q.adjoint() * h) * &q).hermitian_part())?;
        let rotated = &q * &eig.vectors;
        for (c, &l) in members.iter().enumerate() {
            out.column_mut(l).copy_from(&rotated.as_dmatrix().column(c));
        }
    }
    let vectors = ComplexMatrix::wrap(out);
    // Accept the rotation only if it keeps the family diagonal.
    if family.iter().all(|f| leakage(f, &vectors) <= tol) {
        Ok(spectrum_in(family, vectors, spectrum.row))
    } else {
        Ok(spectrum)
    }
}

/// One weighted pure product term `w · |a⟩⟨a| ⊗ |b⟩⟨b|`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductTerm {
    pub weight: f64,
    pub vec_a: Vec<Complex64>,
    pub vec_b: Vec<Complex64>,
}

impl ProductTerm {
    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.vec_a, &self.vec_a)
            .kron(&ComplexMatrix::outer(&self.vec_b, &self.vec_b))
            .scale(self.weight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparableDecomposition {
    pub dim_a: usize,
    pub dim_b: usize,
    pub terms: Vec<ProductTerm>,
}

impl SeparableDecomposition {
    /// `Σ_t w_t |a_t⟩⟨a_t| ⊗ |b_t⟩⟨b_t|`.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let d = self.dim_a * self.dim_b;
        self.terms.iter().fold(ComplexMatrix::zeros(d, d), |acc, t| &acc + &t.to_matrix())
    }
}

fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Joint spectrum used for row `k` of a factor. Rows with no `S_ki` use the
/// eigenbasis of `X_k X_k†`, which also breaks ties inside degenerate joint
/// eigenspaces so that the resulting `v_l = X_k† u_l` are orthogonal.
pub fn row_spectrum(factor: &BlockFactor, k: usize, tol: f64) -> Result<JointSpectrum> {
    let m = factor.dim_a();
    let xk = factor.x(k);
    let gram = &(xk * &xk.adjoint()).hermitian_part();
    if k + 1 == m {
        let eig = linalg::hermitian_eig(gram)?;
        return Ok(JointSpectrum { row: Some(k), vectors: eig.vectors, eigenvalues: Vec::new() });
    }
    let family: Vec<ComplexMatrix> = (k + 1..m).map(|i| factor.s(k, i).expect("validated").clone()).collect();
    let mut spectrum = joint_eigenbasis(&family, tol)?;
    spectrum.row = Some(k);
    break_ties(spectrum, &family, gram, tol)
}

/// Product terms for row `k`; terms with weight below `prune` are dropped.
pub fn row_terms(factor: &BlockFactor, k: usize, spectrum: &JointSpectrum, prune: f64) -> Vec<ProductTerm> {
    let m = factor.dim_a();
    let xk_adj = factor.x(k).adjoint();
    let mut terms = Vec::new();
    for l in 0..spectrum.dim() {
        let mut psi = vec![Complex64::new(0.0, 0.0); m];
        psi[k] = Complex64::new(1.0, 0.0);
        for i in k + 1..m {
            psi[i] = spectrum.eigenvalues[i - k - 1][l].conj();
        }
        let u = spectrum.vectors.column(l);
        let v: Vec<Complex64> = (0..xk_adj.rows())
            .map(|r| (0..u.len()).map(|c| xk_adj.get(r, c) * u[c]).sum())
            .collect();
        let (na, nb) = (norm(&psi), norm(&v));
        let weight = na * na * nb * nb;
        if weight < prune || nb == 0.0 {
            continue;
        }
        terms.push(ProductTerm {
            weight,
            vec_a: psi.iter().map(|z| z / na).collect(),
            vec_b: v.iter().map(|z| z / nb).collect(),
        });
    }
    terms
}

/// Explicit separable decomposition of a super SPPT factor, terms ordered by
/// row `k` and then by eigenvector index `l`. Terms with weight below
/// `tol · ‖ρ‖_F` are dropped.
pub fn separable_decomposition(factor: &BlockFactor, tol: f64) -> Result<SeparableDecomposition> {
    let (is_super, residual) = classification::is_super_sppt(factor, tol)?;
    if !is_super {
        return Err(Error::NotSuperSppt { residual, tol });
    }
    let rho = states::from_factor(factor)?;
    let prune = tol * rho.frobenius_norm();
    let mut terms = Vec::new();
    for k in 0..factor.dim_a() {
        let spectrum = row_spectrum(factor, k, tol)?;
        terms.extend(row_terms(factor, k, &spectrum, prune));
    }
    Ok(SeparableDecomposition { dim_a: factor.dim_a(), dim_b: factor.dim_b(), terms })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    /// `‖Σ terms − ρ‖_F / ‖ρ‖_F` (absolute when `ρ = 0`).
    pub residual: f64,
    pub min_weight: f64,
    /// Indices of terms with negative weight.
    pub negative_weights: Vec<usize>,
    /// Largest `|‖a‖ − 1|` or `|‖b‖ − 1|` over all terms.
    pub max_norm_defect: f64,
    pub term_count: usize,
    pub tol: f64,
    pub passed: bool,
}

/// Checks `ρ = Σ_t w_t |a_t⟩⟨a_t| ⊗ |b_t⟩⟨b_t|` with `w_t ≥ 0`.
pub fn verify_decomposition(
    decomp: &SeparableDecomposition,
    rho: &BipartiteState,
    tol: f64,
) -> Result<VerificationReport> {
    if decomp.dim_a != rho.dim_a() || decomp.dim_b != rho.dim_b() {
        return Err(Error::DimensionMismatch(format!(
            "decomposition is {}x{}, state is {}x{}",
            decomp.dim_a,
            decomp.dim_b,
            rho.dim_a(),
            rho.dim_b()
        )));
    }
    for (t, term) in decomp.terms.iter().enumerate() {
        if term.vec_a.len() != decomp.dim_a || term.vec_b.len() != decomp.dim_b {
            return Err(Error::DimensionMismatch(format!("term {t} has vectors of the wrong length")));
        }
    }
    let diff = (&decomp.to_matrix() - rho.matrix()).frobenius_norm();
    let scale = rho.frobenius_norm();
    let residual = if scale > 0.0 { diff / scale } else { diff };
    let negative_weights: Vec<usize> =
        decomp.terms.iter().enumerate().filter(|(_, t)| t.weight.is_nan() || t.weight < 0.0).map(|(i, _)| i).collect();
    let min_weight = decomp.terms.iter().map(|t| t.weight).fold(f64::INFINITY, f64::min);
    let max_norm_defect = decomp
        .terms
        .iter()
        .flat_map(|t| [(norm(&t.vec_a) - 1.0).abs(), (norm(&t.vec_b) - 1.0).abs()])
        .fold(0.0, f64::max);
    Ok(VerificationReport {
        residual,
        min_weight,
        passed: residual <= tol && negative_weights.is_empty(),
        negative_weights,
        max_norm_defect,
        term_count: decomp.terms.len(),
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::block_cholesky;
    use crate::states::{random_super_sppt, werner};
    use std::collections::BTreeMap;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn joint_basis_of_identity() {
        let s = joint_eigenbasis(&[ComplexMatrix::identity(3)], 1e-9).unwrap();
        assert!(s.vectors.unitary_defect() < 1e-14);
        assert!(s.eigenvalues[0].iter().all(|&z| (z - c(1.0, 0.0)).norm() < 1e-14));
        let sum = s.projectors().iter().fold(ComplexMatrix::zeros(3, 3), |acc, p| &acc + p);
        assert!((&sum - &ComplexMatrix::identity(3)).max_abs() < 1e-14);
    }

    #[test]
    fn joint_basis_of_diagonal_family() {
        let a = ComplexMatrix::from_real_diagonal(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_diagonal(&[3.0, 3.0]);
        let s = joint_eigenbasis(&[a, b], 1e-9).unwrap();
        // Columns are computational basis vectors up to phase.
        for l in 0..2 {
            let u = s.vectors.column(l);
            assert!(u.iter().filter(|z| z.norm() > 1e-12).count() == 1);
        }
        let mut pairs: Vec<(f64, f64)> = (0..2).map(|l| (s.eigenvalues[0][l].re, s.eigenvalues[1][l].re)).collect();
        pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
        assert!((pairs[0].0 - 1.0).abs() < 1e-14 && (pairs[1].0 - 2.0).abs() < 1e-14);
        assert!((pairs[0].1 - 3.0).abs() < 1e-14 && (pairs[1].1 - 3.0).abs() < 1e-14);
    }

    #[test]
    fn joint_basis_recovers_constructed_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for n in 2..6 {
            let v = linalg::random_unitary(n, &mut rng);
            let lambdas: Vec<Vec<Complex64>> = (0..3)
                .map(|_| (0..n).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect())
                .collect();
            let family: Vec<ComplexMatrix> = lambdas
                .iter()
                .map(|l| &(&v * &ComplexMatrix::from_diagonal(l)) * &v.adjoint())
                .collect();
            let s = joint_eigenbasis(&family, 1e-9).unwrap();
            for (i, l) in lambdas.iter().enumerate() {
                let mut want: Vec<(f64, f64)> = l.iter().map(|z| (z.re, z.im)).collect();
                let mut got: Vec<(f64, f64)> = s.eigenvalues[i].iter().map(|z| (z.re, z.im)).collect();
                want.sort_by(|a, b| a.partial_cmp(b).unwrap());
                got.sort_by(|a, b| a.partial_cmp(b).unwrap());
                for (w, g) in want.iter().zip(&got) {
                    assert!((w.0 - g.0).abs() < 1e-9 && (w.1 - g.1).abs() < 1e-9);
                }
                assert!((&s.reconstruct(i) - &family[i]).frobenius_norm() <= 1e-9 * family[i].frobenius_norm().max(1.0));
            }
            for (a, p) in s.projectors().iter().enumerate() {
                assert!((p.trace() - c(1.0, 0.0)).norm() < 1e-12);
                for (b, q) in s.projectors().iter().enumerate() {
                    let pq = p * q;
                    let want = if a == b { p.clone() } else { ComplexMatrix::zeros(n, n) };
                    assert!((&pq - &want).max_abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn joint_basis_handles_degenerate_family() {
        // Two members that are individually degenerate but jointly resolve the space.
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let v = linalg::random_unitary(4, &mut rng);
        let a = &(&v * &ComplexMatrix::from_real_diagonal(&[1.0, 1.0, 2.0, 2.0])) * &v.adjoint();
        let b = &(&v * &ComplexMatrix::from_real_diagonal(&[0.0, 5.0, 0.0, 5.0])) * &v.adjoint();
        let s = joint_eigenbasis(&[a.clone(), b.clone()], 1e-9).unwrap();
        assert!(leakage(&a, &s.vectors) <= 1e-9 && leakage(&b, &s.vectors) <= 1e-9);
        // Equal-magnitude collisions in a single coefficient draw still resolve.
        let h = &(&v * &ComplexMatrix::from_real_diagonal(&[1.0, -1.0, 1.0, -1.0])) * &v.adjoint();
        let s = joint_eigenbasis(&[h.clone(), a.clone()], 1e-9).unwrap();
        assert!(leakage(&h, &s.vectors) <= 1e-9 && leakage(&a, &s.vectors) <= 1e-9);
    }

    #[test]
    fn joint_basis_rejects_non_commuting() {
        let x = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let z = ComplexMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(joint_eigenbasis(&[x, z], 1e-9), Err(Error::NotCommutingFamily { .. })));
        let nilpotent = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(joint_eigenbasis(&[nilpotent], 1e-9), Err(Error::NotCommutingFamily { .. })));
    }

    #[test]
    fn maximally_mixed_decomposes_into_computational_products() {
        let (m, n) = (2, 3);
        let rho = BipartiteState::new(m, n, ComplexMatrix::identity(6).scale(1.0 / 6.0), true).unwrap();
        let f = block_cholesky(&rho, 1e-9).unwrap();
        let d = separable_decomposition(&f, 1e-9).unwrap();
        assert_eq!(d.terms.len(), m * n);
        for t in &d.terms {
            assert!((t.weight - 1.0 / 6.0).abs() < 1e-14);
            assert_eq!(t.vec_a.iter().filter(|z| z.norm() > 1e-12).count(), 1);
            assert_eq!(t.vec_b.iter().filter(|z| z.norm() > 1e-12).count(), 1);
        }
        let r = verify_decomposition(&d, &rho, 1e-12).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn rotation_factor_terms_follow_eigenvalues_of_s() {
        let f = BlockFactor::new(
            2,
            2,
            vec![ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, -1.0]).unwrap(), ComplexMatrix::identity(2)],
            BTreeMap::from([((0, 1), ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap())]),
            ComplexMatrix::identity(2),
        )
        .unwrap();
        let d = separable_decomposition(&f, 1e-9).unwrap();
        let rho = states::from_factor(&f).unwrap();
        assert!(verify_decomposition(&d, &rho, 1e-12).unwrap().passed);
        // S has eigenvalues ±i, so the row-0 vectors are (|1⟩ ∓ i|2⟩)/√2.
        let row0: Vec<&ProductTerm> = d.terms.iter().filter(|t| t.vec_a[0].norm() > 1e-12).collect();
        assert_eq!(row0.len(), 2);
        let mut seconds: Vec<f64> = row0.iter().map(|t| (t.vec_a[1] / t.vec_a[0]).im).collect();
        seconds.sort_by(f64::total_cmp);
        assert!((seconds[0] + 1.0).abs() < 1e-12 && (seconds[1] - 1.0).abs() < 1e-12);
        for t in &row0 {
            assert!((t.vec_a[1] / t.vec_a[0]).re.abs() < 1e-12);
        }
        // The last row is |2⟩⟨2| ⊗ X_2†X_2 = |2⟩⟨2| ⊗ I.
        let row1: Vec<&ProductTerm> = d.terms.iter().filter(|t| t.vec_a[0].norm() <= 1e-12).collect();
        assert_eq!(row1.len(), 2);
        assert!(row1.iter().all(|t| (t.weight - 1.0).abs() < 1e-12));
    }

    #[test]
    fn random_super_sppt_decomposes() {
        for seed in 0..5 {
            let (rho, f) = random_super_sppt(3, 3, seed).unwrap();
            let d = separable_decomposition(&f, 1e-9).unwrap();
            let r = verify_decomposition(&d, &rho, 1e-8).unwrap();
            assert!(r.passed, "seed {seed}: {r:?}");
            assert!(r.term_count <= 9);
            assert!(r.max_norm_defect < 1e-12);
        }
    }

    #[test]
    fn werner_three_quarters_decomposes() {
        let w = werner(0.75).unwrap();
        let f = block_cholesky(&w, 1e-9).unwrap();
        let d = separable_decomposition(&f, 1e-9).unwrap();
        assert!(verify_decomposition(&d, &w, 1e-12).unwrap().passed);
    }

    #[test]
    fn non_super_factor_is_refused() {
        let f = block_cholesky(&werner(0.6).unwrap(), 1e-9).unwrap();
        assert!(matches!(separable_decomposition(&f, 1e-9), Err(Error::NotSuperSppt { .. })));
    }

    #[test]
    fn corrupted_decomposition_fails_verification() {
        let (rho, f) = random_super_sppt(2, 2, 3).unwrap();
        let mut d = separable_decomposition(&f, 1e-9).unwrap();
        d.terms[0].weight = -d.terms[0].weight;
        let r = verify_decomposition(&d, &rho, 1e-8).unwrap();
        assert!(!r.passed);
        assert_eq!(r.negative_weights, vec![0]);
        assert!(r.min_weight < 0.0);

        let wrong_dims = SeparableDecomposition { dim_a: 3, dim_b: 2, terms: vec![] };
        assert!(matches!(verify_decomposition(&wrong_dims, &rho, 1e-8), Err(Error::DimensionMismatch(_))));
    }
}
