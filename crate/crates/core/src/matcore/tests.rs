use proptest::prelude::*;

use super::*;
use crate::harness::sampling::Sampler;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn eig_of_diagonal_sorts_ascending() {
    let s = herm_eig(&diag_matrix(&[3.0, 1.0])).unwrap();
    assert_eq!(s.values(), &[1.0, 3.0]);
    // frame is the swap permutation up to phases
    assert!(s.frame()[(1, 0)].norm() > 1.0 - 1e-12);
    assert!(s.frame()[(0, 1)].norm() > 1.0 - 1e-12);
}

#[test]
fn eig_of_identity() {
    let s = herm_eig(&identity(4)).unwrap();
    assert!(s.values().iter().all(|&x| close(x, 1.0, 1e-14)));
    assert!(unitarity_residual(s.frame()) < 1e-12);
}

#[test]
fn eig_two_by_two_closed_form() {
    // [[2,1],[1,2]]: eigenvalues 2 ∓ 1, eigenvectors (1,∓1)/√2
    let m = real_matrix(&[&[2.0, 1.0], &[1.0, 2.0]]);
    let s = herm_eig(&m).unwrap();
    assert!(close(s.values()[0], 1.0, 1e-14) && close(s.values()[1], 3.0, 1e-14));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let expected = [[r, -r], [r, r]];
    for (col, e) in expected.iter().enumerate() {
        // compare up to a global phase: |<v, e>| = 1
        let dot: C64 = (0..2).map(|i| s.frame()[(i, col)].conj() * e[i]).sum();
        assert!(close(dot.norm(), 1.0, 1e-12), "column {col}");
    }
    assert!(rel_diff(&s.reconstruct(), &m) < 1e-14);
}

#[test]
fn eig_rejects_non_hermitian() {
    let m = real_matrix(&[&[1.0, 2.0], &[0.0, 1.0]]);
    assert!(matches!(herm_eig(&m), Err(ConeError::NonHermitian { .. })));
}

#[test]
fn sqrt_and_fourth_root_of_diagonal() {
    let a = PosDefMatrix::diagonal(&[4.0, 9.0]).unwrap();
    let r = mat_fn(&a, f64::sqrt).unwrap();
    assert!(rel_diff(r.matrix(), &diag_matrix(&[2.0, 3.0])) < 1e-14);
    let rr = mat_fn(&validate_posdef(&r).unwrap(), f64::sqrt).unwrap();
    assert!(rel_diff(rr.matrix(), &diag_matrix(&[2f64.sqrt(), 3f64.sqrt()])) < 1e-14);
}

#[test]
fn mat_fn_identity_map_and_domain_error() {
    let a = Sampler::new(3).posdef(5, 1.0);
    assert!(rel_diff(mat_fn(&a, |x| x).unwrap().matrix(), a.matrix()) < 1e-12);
    let shifted = PosDefMatrix::diagonal(&[0.5, 2.0]).unwrap();
    assert!(matches!(
        mat_fn(&shifted, |x| (x - 1.0).ln()),
        Err(ConeError::DomainError { .. })
    ));
}

#[test]
fn exp_of_zero_and_diagonal_logs() {
    assert!(rel_diff(exp_herm(&HermitianMatrix::zeros(3)).matrix(), &identity(3)) < 1e-15);
    let x = HermitianMatrix::diagonal(&[2f64.ln(), -(2f64.ln())]);
    assert!(rel_diff(exp_herm(&x).matrix(), &diag_matrix(&[2.0, 0.5])) < 1e-14);
}

#[test]
fn positivity_floor() {
    let tol = Tolerances::default();
    assert!(validate_posdef(&HermitianMatrix::identity(3)).is_ok());
    assert!(matches!(
        validate_posdef(&HermitianMatrix::diagonal(&[1.0, 0.0])),
        Err(ConeError::NotPositiveDefinite { .. })
    ));
    let below = HermitianMatrix::diagonal(&[1.0, tol.pd_floor / 2.0]);
    match validate_posdef(&below) {
        Err(ConeError::NotPositiveDefinite { min_eigenvalue }) => {
            assert!(close(min_eigenvalue, tol.pd_floor / 2.0, 1e-20))
        }
        other => panic!("expected floor violation, got {other:?}"),
    }
    assert!(validate_posdef(&HermitianMatrix::diagonal(&[1.0, tol.pd_floor * 2.0])).is_ok());
}

#[test]
fn invertible_and_unitary_checks() {
    assert!(InvertibleMatrix::new(diag_matrix(&[1.0, 0.0])).is_err());
    let g = InvertibleMatrix::new(diag_matrix(&[2.0, 0.5])).unwrap();
    assert!(close(g.condition_number(), 4.0, 1e-12));
    assert!(UnitaryMatrix::new(diag_matrix(&[1.0, 2.0])).is_err());
    assert!(UnitaryMatrix::new(real_matrix(&[&[0.0, 1.0], &[-1.0, 0.0]])).is_ok());
}

/// Spectral round trips on 1000 seeded instances for every n in 2..=16.
#[test]
fn spectral_round_trip_sweep() {
    let tol = Tolerances::default();
    for n in 2..=16 {
        for i in 0..1000 {
            let mut s = Sampler::for_instance(11, "matcore.roundtrip", (n * 10_000 + i) as u64);
            let x = s.hermitian(n, 2.0);
            let back = x.exp().log();
            assert!(rel_diff(back.matrix(), x.matrix()) <= tol.recon, "log∘exp n={n} i={i}");
            let a = s.posdef(n, 2.0);
            let again = a.log().exp();
            assert!(rel_diff(again.matrix(), a.matrix()) <= tol.recon, "exp∘log n={n} i={i}");
        }
    }
}

#[test]
fn json_round_trip_and_ragged_rows() {
    let m = Sampler::new(5).gaussian(3);
    let json = MatrixJson::from(&m);
    let text = serde_json::to_string(&json).unwrap();
    assert!(text.starts_with("{\"dim\":3,\"entries\":"));
    let back: MatrixJson = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_matrix().unwrap(), m);
    let ragged: MatrixJson =
        serde_json::from_str(r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0]]]}"#).unwrap();
    assert!(matches!(ragged.to_matrix(), Err(ConeError::Format(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn powers_compose(seed in any::<u64>(), n in 2usize..7, s in -2.0f64..2.0, t in -2.0f64..2.0) {
        let a = Sampler::new(seed).posdef(n, 1.0);
        let lhs = a.pow(t).pow(s);
        let rhs = a.pow(s * t);
        prop_assert!(rel_diff(lhs.matrix(), rhs.matrix()) <= 1e-9);
    }

    #[test]
    fn eigenvalues_are_frame_invariant(seed in any::<u64>(), n in 2usize..9) {
        let mut s = Sampler::new(seed);
        let h = s.hermitian(n, 3.0);
        let u = s.unitary(n);
        let rotated = h.congruence(u.matrix());
        for (x, y) in h.eigenvalues().iter().zip(rotated.eigenvalues()) {
            prop_assert!((x - y).abs() <= 1e-12 * (1.0 + x.abs()));
        }
    }
}
