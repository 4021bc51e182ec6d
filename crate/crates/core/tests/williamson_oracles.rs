use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sympmaj::gen::{self, GeneratorConfig, SpectrumMode};
use sympmaj::linalg::{doubled_diagonal, is_orthosymplectic, is_symplectic, symplectic_form};
use sympmaj::williamson::{skew_singular_values, unitarity_residual};
use sympmaj::{
    is_orthosymplectically_diagonalizable, orthosymplectic_from_unitary, spd_inv_sqrt, spd_sqrt,
    symplectic_eigenvalues, williamson_decompose, RealMatrix, SpdMatrix, SymplecticMatrix, Verdict,
};

/// Independent route: moduli of the eigenvalues of the nonsymmetric `JA`
/// come as `±i d_j`; keep every other one after sorting.
fn ja_oracle(a: &SpdMatrix) -> Vec<f64> {
    let ja = symplectic_form(a.n()) * a.as_matrix();
    let mut moduli: Vec<f64> = ja.complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    moduli.iter().step_by(2).copied().collect()
}

fn max_rel(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs() / x.abs().max(y.abs()))
        .fold(0.0, f64::max)
}

#[test]
fn sqrt_defining_identities() {
    for seed in 0..50 {
        let n = 1 + seed as usize % 6;
        let a = gen::random_spd(&GeneratorConfig::new(n, seed)).unwrap();
        let s = spd_sqrt(&a).unwrap();
        let am = a.as_matrix();
        assert!((s.as_matrix() * s.as_matrix() - am).norm() <= 1e-10 * am.norm());

        let r = spd_inv_sqrt(&a).unwrap();
        let sas = r.as_matrix() * am * r.as_matrix();
        assert!((sas - RealMatrix::identity(2 * n, 2 * n)).norm() <= 1e-10 * 2.0 * n as f64);

        // fourth root raised to the fourth power
        let q = spd_sqrt(&s).unwrap();
        let q2 = q.as_matrix() * q.as_matrix();
        let q4 = &q2 * &q2;
        assert!((q4 - am).norm() <= 1e-8 * am.norm());

        let min_eig = am.clone().symmetric_eigenvalues().min();
        assert!(min_eig > 0.0);
    }
}

#[test]
fn group_closure() {
    for seed in 0..30 {
        let n = 1 + seed as usize % 5;
        let m1 = gen::random_symplectic(&GeneratorConfig::new(n, seed)).unwrap();
        let m2 = gen::random_symplectic(&GeneratorConfig::new(n, seed + 1000)).unwrap();
        let prod = m1.compose(&m2).unwrap();
        assert!(
            is_symplectic(
                prod.as_matrix(),
                1e-8 * (1.0 + prod.as_matrix().norm_squared())
            )
            .unwrap()
            .holds
        );
        let t = m1.transpose().unwrap();
        assert!(is_symplectic(t.as_matrix(), 1e-9).unwrap().holds);
    }
}

#[test]
fn spectrum_matches_ja_eigenvalues() {
    for seed in 0..100 {
        let n = 1 + seed as usize % 6;
        let a = gen::random_spd(&GeneratorConfig::new(n, seed)).unwrap();
        let d = symplectic_eigenvalues(&a).unwrap();
        let oracle = ja_oracle(&a);
        assert!(max_rel(d.values(), &oracle) <= 1e-8, "seed {seed}");
    }
}

#[test]
fn singular_values_pair_up() {
    for seed in 0..100 {
        let n = 1 + seed as usize % 6;
        let a = gen::random_spd(&GeneratorConfig::new(n, seed)).unwrap();
        let sv = skew_singular_values(&a).unwrap();
        for pair in sv.chunks_exact(2) {
            assert!(
                (pair[0] - pair[1]).abs() <= 1e-8 * pair[1],
                "seed {seed}: {pair:?}"
            );
        }
    }
}

#[test]
fn orbit_invariance() {
    for seed in 0..100 {
        let n = 1 + seed as usize % 6;
        let a = gen::random_spd(&GeneratorConfig::new(n, seed)).unwrap();
        let m = gen::random_symplectic(&GeneratorConfig::new(n, seed + 7)).unwrap();
        let b = a.congruence(m.as_matrix()).unwrap();
        let da = symplectic_eigenvalues(&a).unwrap();
        let db = symplectic_eigenvalues(&b).unwrap();
        assert!(max_rel(da.values(), db.values()) <= 1e-7, "seed {seed}");
    }
}

#[test]
fn prescribed_spectrum_is_recovered() {
    let cfg = GeneratorConfig::new(2, 11);
    let a = gen::spd_with_spectrum(&[2.0, 3.0], SpectrumMode::Generic, &cfg).unwrap();
    let d = symplectic_eigenvalues(&a).unwrap();
    assert!(max_rel(d.values(), &[2.0, 3.0]) <= 1e-7);

    for seed in 0..100 {
        let n = 1 + seed as usize % 6;
        let cfg = GeneratorConfig::new(n, seed);
        let d = gen::random_spectrum(&cfg).unwrap();
        for mode in [SpectrumMode::Generic, SpectrumMode::Orthosymplectic] {
            let a = gen::spd_with_spectrum(&d, mode, &cfg).unwrap();
            let w = williamson_decompose(&a).unwrap();
            assert!(max_rel(w.d.values(), &d) <= 1e-8, "seed {seed} {mode:?}");
            let s = symplectic_eigenvalues(&a).unwrap();
            assert!(max_rel(s.values(), &d) <= 1e-7);
        }
    }
}

fn check_williamson_contract(a: &SpdMatrix) {
    let w = williamson_decompose(a).unwrap();
    let am = a.as_matrix();
    let m = w.m.as_matrix();
    let direct = (m.transpose() * am * m - doubled_diagonal(w.d.values())).norm();
    assert!(direct <= 1e-8 * am.norm(), "diag residual {direct:e}");
    assert!((direct - w.diag_residual).abs() <= 1e-12 * am.norm());
    let symp = is_symplectic(m, 1e-8).unwrap();
    assert!(symp.holds, "symplectic residual {:e}", symp.residual);
    assert!(w.d.values().windows(2).all(|p| p[0] <= p[1]));
}

#[test]
fn williamson_contract_on_random_inputs() {
    for seed in 0..150 {
        let n = 1 + seed as usize % 6;
        check_williamson_contract(&gen::random_spd(&GeneratorConfig::new(n, seed)).unwrap());
    }
}

#[test]
fn williamson_contract_on_degenerate_spectra() {
    for seed in 0..60 {
        let n = 1 + seed as usize % 6;
        let cfg = GeneratorConfig::new(n, seed);
        let mut d = vec![1.5; n];
        if n > 2 {
            d[n - 1] = 3.0;
        }
        for mode in [SpectrumMode::Generic, SpectrumMode::Orthosymplectic] {
            check_williamson_contract(&gen::spd_with_spectrum(&d, mode, &cfg).unwrap());
        }
        check_williamson_contract(&SpdMatrix::identity(n));
        let mut diag = vec![1.0; n];
        diag.extend(vec![4.0; n]);
        check_williamson_contract(&SpdMatrix::from_diagonal(&diag).unwrap());
    }
}

#[test]
fn orthosymplectic_conjugates_are_certified() {
    for seed in 0..100 {
        let n = 1 + seed as usize % 6;
        let cfg = GeneratorConfig::new(n, seed);
        let d = gen::random_spectrum(&cfg).unwrap();
        let a = gen::spd_with_spectrum(&d, SpectrumMode::Orthosymplectic, &cfg).unwrap();
        assert!((a.trace() - 2.0 * d.iter().sum::<f64>()).abs() <= 1e-9 * a.trace());
        let cert = is_orthosymplectically_diagonalizable(&a, 1e-8).unwrap();
        assert_eq!(cert.verdict, Verdict::True, "seed {seed}: {cert:?}");
        assert!(cert.trace_gap >= -1e-8 * cert.trace);
    }
}

#[test]
fn criteria_agree_on_generic_inputs() {
    let mut checked = 0;
    for seed in 0..150 {
        let n = 1 + seed as usize % 6;
        let cfg = GeneratorConfig::new(n, seed);
        let d = gen::random_spectrum(&cfg).unwrap();
        let a = gen::spd_with_spectrum(&d, SpectrumMode::Generic, &cfg).unwrap();
        let cert = is_orthosymplectically_diagonalizable(&a, 1e-8).unwrap();
        assert!(cert.trace_gap >= -1e-8 * cert.trace);
        // exclude inputs within 10x tol of the decision boundary
        if cert.relative_commutator() < 1e-7 {
            continue;
        }
        assert_eq!(
            cert.trace_test, cert.commutation_test,
            "seed {seed}: {cert:?}"
        );
        assert_eq!(cert.verdict, Verdict::False);
        checked += 1;
    }
    assert!(checked > 100);
}

#[test]
fn unitary_blocks_give_orthosymplectic_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let n = rng.gen_range(1..=6);
        let (p, q) = gen::random_unitary(&mut rng, n);
        assert!(unitarity_residual(&p, &q) <= 1e-12);
        let nmat = orthosymplectic_from_unitary(&p, &q).unwrap();
        assert!(nmat.residual() <= 1e-10);
        assert!(is_orthosymplectic(nmat.as_matrix(), 1e-10).unwrap());

        let ds = p.component_mul(&p) + q.component_mul(&q);
        for i in 0..n {
            assert!((ds.row(i).sum() - 1.0).abs() <= 1e-12);
            assert!((ds.column(i).sum() - 1.0).abs() <= 1e-12);
        }
        assert!(ds.min() >= -1e-14);
    }
}

#[test]
fn symplectic_matrix_rejects_non_members() {
    let m = DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 2.0]);
    assert!(SymplecticMatrix::new(m).is_err());
}
