//! Acceptance criteria. Each test prints one `[PASS]`/`[FAIL]` line; run with
//! `cargo test -p sppt-core --test acceptance -- --nocapture --test-threads=1`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sppt_core::classification::{classify, is_ppt, is_sppt, is_super_sppt};
use sppt_core::decomposition::{separable_decomposition, verify_decomposition};
use sppt_core::factorization::{assemble_y, block_cholesky, BlockFactor};
use sppt_core::linalg::{self, partial_transpose, random_unitary, ComplexMatrix};
use sppt_core::states::{self, from_factor, werner, BipartiteState};

const TOL: f64 = 1e-9;

fn report(id: u32, name: &str, ok: bool, detail: String) {
    println!("[{}] AC{id:02} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "AC{id:02} {name} failed: {detail}");
}

fn rotation_factor() -> BlockFactor {
    BlockFactor::new(
        2,
        2,
        vec![ComplexMatrix::from_real(2, 2, &[2.0, 1.0, 1.0, -1.0]).unwrap(), ComplexMatrix::identity(2)],
        BTreeMap::from([((0, 1), ComplexMatrix::from_real(2, 2, &[0.0, 1.0, -1.0, 0.0]).unwrap())]),
        ComplexMatrix::identity(2),
    )
    .unwrap()
}

fn hadamard() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).unwrap().scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// Random super SPPT instance with dimensions in {2,3,4} and mixed ranks.
fn mixed_super_sppt(rng: &mut ChaCha8Rng, index: usize) -> (BipartiteState, BlockFactor) {
    let m = rng.random_range(2..=4);
    let n = rng.random_range(2..=4);
    let ranks: Vec<usize> = (0..m)
        .map(|_| if index % 2 == 0 { n } else { rng.random_range(1..=n) })
        .collect();
    states::random_super_sppt_with_ranks(m, n, &ranks, rng.random()).unwrap()
}

/// Super SPPT instance whose only rank-deficient root is the last one, so
/// that re-factoring the state recovers a factor.
fn last_row_deficient_super_sppt(rng: &mut ChaCha8Rng, index: usize) -> BipartiteState {
    let m = rng.random_range(2..=4);
    let n = rng.random_range(2..=4);
    let mut ranks = vec![n; m];
    if index % 2 == 1 {
        ranks[m - 1] = rng.random_range(1..=n);
    }
    states::random_super_sppt_with_ranks(m, n, &ranks, rng.random()).unwrap().0
}

/// Random state of rank at least `(M−1)N`: generically every Schur complement
/// but the last is nonsingular.
fn random_state_in_factor_domain(rng: &mut ChaCha8Rng, index: usize) -> BipartiteState {
    let m = rng.random_range(2..=4);
    let n = rng.random_range(1..=4);
    match index % 3 {
        0 => states::random_density(m, n, rng.random()).unwrap(),
        1 => states::random_density_with_rank(m, n, rng.random_range((m - 1) * n..m * n), rng.random()).unwrap(),
        _ => {
            let mut ranks = vec![n; m];
            ranks[m - 1] = rng.random_range(0..n);
            states::random_factor_with_ranks(m, n, &ranks, rng.random()).unwrap().0.normalized().unwrap()
        }
    }
}

#[test]
fn ac01_werner_ppt_boundary() {
    // Closed-form spectrum of W_p^Γ: {(2p-1)/2, (3-2p)/6, (3-2p)/6, (3-2p)/6}.
    let mut worst = 0.0_f64;
    let mut boundary_ok = true;
    for p in [0.40, 0.49, 0.50, 0.51, 0.75, 1.00] {
        let w = werner(p).unwrap();
        let pt = partial_transpose(w.matrix(), 2, 2).unwrap();
        let eig = linalg::hermitian_eig(&pt).unwrap();
        let mut expected = [(2.0 * p - 1.0) / 2.0, (3.0 - 2.0 * p) / 6.0, (3.0 - 2.0 * p) / 6.0, (3.0 - 2.0 * p) / 6.0];
        expected.sort_by(f64::total_cmp);
        for (got, want) in eig.values.iter().zip(expected) {
            worst = worst.max((got - want).abs());
        }
        if p <= 0.75 {
            worst = worst.max((eig.min() - (2.0 * p - 1.0) / 2.0).abs());
        }
        let (ppt, _) = is_ppt(&w, TOL).unwrap();
        boundary_ok &= ppt == (p >= 0.5);
    }
    report(
        1,
        "Werner PPT boundary",
        worst <= 1e-12 && boundary_ok,
        format!("max spectrum deviation {worst:.2e} (tol 1e-12), PPT iff p >= 1/2: {boundary_ok}"),
    );
}

#[test]
fn ac02_werner_sppt_point() {
    let mut wrong = Vec::new();
    for p in [0.50, 0.60, 0.70, 0.74, 0.75, 0.76, 0.90, 1.00] {
        let c = classify(&werner(p).unwrap(), &ComplexMatrix::identity(2), TOL).unwrap();
        if c.sppt != (p == 0.75) {
            wrong.push(p);
        }
    }
    report(2, "Werner SPPT only at p = 3/4", wrong.is_empty(), format!("mismatched p: {wrong:?}"));
}

#[test]
fn ac03_werner_factor_forms() {
    let mut worst = 0.0_f64;
    for p in [0.6, 0.9] {
        let f = block_cholesky(&werner(p).unwrap(), TOL).unwrap();
        let x1 = ComplexMatrix::from_real_diagonal(&[(p / 3.0).sqrt(), ((3.0 - 2.0 * p) / 6.0).sqrt()]);
        let s21 = (4.0 * p - 3.0) / (2.0 * p * (3.0 - 2.0 * p)).sqrt();
        let s = ComplexMatrix::from_real(2, 2, &[0.0, 0.0, s21, 0.0]).unwrap();
        let x2 = ComplexMatrix::from_real_diagonal(&[(2.0 * p * (p - 1.0) / (2.0 * p - 3.0)).sqrt(), (p / 3.0).sqrt()]);
        worst = worst
            .max((f.x(0) - &x1).max_abs())
            .max((f.s(0, 1).unwrap() - &s).max_abs())
            .max((f.x(1) - &x2).max_abs());
    }
    report(3, "Werner closed-form factors", worst <= 1e-12, format!("max entry deviation {worst:.2e} (tol 1e-12)"));
}

#[test]
fn ac04_basis_dependence() {
    let rho = from_factor(&rotation_factor()).unwrap();
    let comp = classify(&rho, &ComplexMatrix::identity(2), TOL).unwrap();
    let had = classify(&rho, &hadamard(), TOL).unwrap();
    report(
        4,
        "rotation-factor state SPPT depends on basis",
        comp.sppt && !had.sppt,
        format!(
            "computational sppt={} (res {:.2e}), Hadamard sppt={} (res {:.2e})",
            comp.sppt, comp.sppt_residual, had.sppt, had.sppt_residual
        ),
    );
}

#[test]
fn ac05_separable_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(5005);
    let mut worst = 0.0_f64;
    let mut failures = Vec::new();
    for index in 0..50 {
        let (rho, factor) = mixed_super_sppt(&mut rng, index);
        let (m, n) = (rho.dim_a(), rho.dim_b());
        match separable_decomposition(&factor, TOL).and_then(|d| Ok((verify_decomposition(&d, &rho, 1e-8)?, d))) {
            Ok((r, d)) => {
                worst = worst.max(r.residual);
                let weights_ok = d.terms.iter().all(|t| t.weight >= 0.0);
                if !r.passed || d.terms.len() > m * n || !weights_ok {
                    failures.push(format!("#{index}: {r:?}"));
                }
            }
            Err(e) => failures.push(format!("#{index}: {e}")),
        }
    }
    report(
        5,
        "super SPPT decompositions verify",
        failures.is_empty(),
        format!("50 instances, worst residual {worst:.2e} (tol 1e-8), failures {failures:?}"),
    );
}

#[test]
fn ac06_implication_chain() {
    let mut rng = ChaCha8Rng::seed_from_u64(6006);
    let mut violations = Vec::new();
    let mut counts = [0usize; 3];
    let mut check = |rho: &BipartiteState, label: String| match classify(rho, &ComplexMatrix::identity(rho.dim_a()), TOL) {
        Ok(c) => {
            counts[0] += c.ppt as usize;
            counts[1] += c.sppt as usize;
            counts[2] += c.super_sppt as usize;
            if (c.super_sppt && !c.sppt) || (c.sppt && !c.ppt) {
                violations.push(label);
            }
        }
        Err(e) => violations.push(format!("{label}: {e}")),
    };
    for i in 0..200 {
        let m = rng.random_range(2..=4);
        let n = rng.random_range(2..=4);
        let rho = states::random_density(m, n, rng.random()).unwrap();
        check(&rho, format!("random #{i}"));
    }
    for i in 0..200 {
        let rho = last_row_deficient_super_sppt(&mut rng, i);
        check(&rho, format!("super SPPT #{i}"));
    }
    report(
        6,
        "super_sppt => sppt => ppt",
        violations.is_empty(),
        format!("400 states, counts ppt/sppt/super = {counts:?}, violations {violations:?}"),
    );
}

#[test]
fn ac07_cc_universality() {
    let mut rng = ChaCha8Rng::seed_from_u64(7007);
    let mut failures = 0;
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let m = rng.random_range(2..=4);
        let n = rng.random_range(2..=4);
        let flat = states::random_distribution(m * n, &mut rng);
        let joint: Vec<Vec<f64>> = flat.chunks(n).map(<[f64]>::to_vec).collect();
        let ua = random_unitary(m, &mut rng);
        let ub = random_unitary(n, &mut rng);
        let rho = states::cc_state(&joint, &ua, &ub).unwrap();
        for _ in 0..20 {
            let basis = random_unitary(m, &mut rng);
            let c = classify(&rho, &basis, 1e-8).unwrap();
            worst = worst.max(c.ssppt_residual);
            failures += !c.super_sppt as usize;
        }
    }
    report(
        7,
        "CC states super SPPT in every A-basis",
        failures == 0,
        format!("400 classifications, {failures} failures, worst residual {worst:.2e} (tol 1e-8)"),
    );
}

#[test]
fn ac08_cq_qubit_universality() {
    let mut rng = ChaCha8Rng::seed_from_u64(8008);
    let mut failures = 0;
    let mut worst = 0.0_f64;
    for _ in 0..20 {
        let n = rng.random_range(2..=4);
        let probs = states::random_distribution(2, &mut rng);
        let sigmas: Vec<ComplexMatrix> = (0..2).map(|_| states::random_local_density(n, &mut rng)).collect();
        let ua = random_unitary(2, &mut rng);
        let rho = states::cq_state(&probs, &sigmas, &ua).unwrap();
        for _ in 0..20 {
            let basis = random_unitary(2, &mut rng);
            let c = classify(&rho, &basis, TOL).unwrap();
            worst = worst.max(c.ssppt_residual);
            failures += !c.super_sppt as usize;
        }
    }
    report(
        8,
        "2xN CQ states super SPPT in every qubit basis",
        failures == 0,
        format!("400 classifications, {failures} failures, worst residual {worst:.2e} (tol 1e-9)"),
    );
}

#[test]
fn ac09_gauge_invariance() {
    let mut rng = ChaCha8Rng::seed_from_u64(9009);
    let mut worst = 0.0_f64;
    let mut flips = 0;
    for i in 0..20 {
        let factor = if i % 2 == 0 {
            mixed_super_sppt(&mut rng, i).1
        } else {
            let m = rng.random_range(2..=4);
            let n = rng.random_range(2..=4);
            block_cholesky(&states::random_density(m, n, rng.random()).unwrap(), TOL).unwrap()
        };
        let gauges: Vec<ComplexMatrix> = (0..factor.dim_a()).map(|_| random_unitary(factor.dim_b(), &mut rng)).collect();
        let gauged = factor.gauge(&gauges).unwrap();
        let (a, b) = (is_sppt(&factor, TOL).unwrap(), is_sppt(&gauged, TOL).unwrap());
        let (c, d) = (is_super_sppt(&factor, TOL).unwrap(), is_super_sppt(&gauged, TOL).unwrap());
        worst = worst.max((a.1 - b.1).abs()).max((c.1 - d.1).abs());
        flips += (a.0 != b.0) as usize + (c.0 != d.0) as usize;
    }
    report(
        9,
        "gauge invariance of verdicts",
        worst <= 1e-9 && flips == 0,
        format!("20 factors, max residual shift {worst:.2e} (tol 1e-9), verdict flips {flips}"),
    );
}

#[test]
fn ac10_cholesky_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(10010);
    let mut worst = 0.0_f64;
    let mut errors = Vec::new();
    let mut deficient = 0;
    for i in 0..100 {
        let rho = random_state_in_factor_domain(&mut rng, i);
        let (m, n) = (rho.dim_a(), rho.dim_b());
        let rank = linalg::hermitian_eig(rho.matrix())
            .unwrap()
            .values
            .iter()
            .filter(|&&v| v > 1e-10 * rho.frobenius_norm())
            .count();
        deficient += (rank < m * n) as usize;
        match block_cholesky(&rho, TOL) {
            Ok(f) => {
                let back = from_factor(&f).unwrap();
                worst = worst.max((back.matrix() - rho.matrix()).frobenius_norm() / rho.frobenius_norm());
            }
            Err(e) => errors.push(format!("#{i} ({m}x{n}, rank {rank}): {e}")),
        }
    }
    report(
        10,
        "block Cholesky round trip",
        errors.is_empty() && worst <= 1e-8,
        format!("100 states ({deficient} rank-deficient), worst residual {worst:.2e} (tol 1e-8), errors {errors:?}"),
    );
}

#[test]
fn ac11_partial_transpose_factorizes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11011);
    let mut fixtures: Vec<BlockFactor> = vec![rotation_factor(), block_cholesky(&werner(0.75).unwrap(), TOL).unwrap()];
    for i in 0..30 {
        fixtures.push(mixed_super_sppt(&mut rng, i).1);
    }
    for _ in 0..10 {
        let (m, n) = (rng.random_range(2..=4), rng.random_range(2..=4));
        let flat = states::random_distribution(m * n, &mut rng);
        let joint: Vec<Vec<f64>> = flat.chunks(n).map(<[f64]>::to_vec).collect();
        let rho = states::cc_state(&joint, &random_unitary(m, &mut rng), &random_unitary(n, &mut rng)).unwrap();
        fixtures.push(block_cholesky(&rho, TOL).unwrap());
    }
    let mut worst = 0.0_f64;
    for f in &fixtures {
        assert!(is_super_sppt(f, TOL).unwrap().0);
        let rho = from_factor(f).unwrap();
        let y = assemble_y(f).unwrap();
        let pt = partial_transpose(rho.matrix(), f.dim_a(), f.dim_b()).unwrap();
        worst = worst.max((&(&y.adjoint() * &y) - &pt).frobenius_norm() / rho.frobenius_norm());
    }
    report(
        11,
        "rho^Gamma = Y^dagger Y on super SPPT fixtures",
        worst <= 1e-9,
        format!("{} fixtures, worst relative residual {worst:.2e} (tol 1e-9)", fixtures.len()),
    );
}
