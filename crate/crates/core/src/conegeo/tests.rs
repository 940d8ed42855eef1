use std::f64::consts::E;

use proptest::prelude::*;

use super::*;
use crate::harness::sampling::Sampler;
use crate::matcore::{diag_matrix, real_matrix, rel_diff, HermitianMatrix, PosDefMatrix};

fn diag(values: &[f64]) -> PosDefMatrix {
    PosDefMatrix::diagonal(values).unwrap()
}

#[test]
fn distances_from_identity_closed_form() {
    let id = PosDefMatrix::identity(2);
    let b = diag(&[E, 1.0 / E]);
    assert!((dist(&id, &b, MetricKind::OperatorNorm).unwrap() - 1.0).abs() < 1e-14);
    assert!((dist(&id, &b, MetricKind::Frobenius).unwrap() - 2f64.sqrt()).abs() < 1e-14);
}

#[test]
fn commuting_distance_matches_scalar_oracle() {
    let mut s = Sampler::new(21);
    for _ in 0..50 {
        let alpha: Vec<f64> = (0..4).map(|_| s.uniform(0.1, 10.0)).collect();
        let beta: Vec<f64> = (0..4).map(|_| s.uniform(0.1, 10.0)).collect();
        let oracle = alpha.iter().zip(&beta).map(|(a, b)| (b / a).ln().abs()).fold(0.0, f64::max);
        let d = dist(&diag(&alpha), &diag(&beta), MetricKind::OperatorNorm).unwrap();
        assert!((d - oracle).abs() < 1e-12);
        let delta = banach_mazur_delta(&diag(&alpha), &diag(&beta)).unwrap();
        assert!((delta - oracle).abs() < 1e-12);
    }
}

#[test]
fn dist_is_symmetric_and_rejects_mismatched_dims() {
    let mut s = Sampler::new(2);
    let (a, b) = (s.posdef(4, 1.5), s.posdef(4, 1.5));
    for m in MetricKind::ALL {
        let (ab, ba) = (dist(&a, &b, m).unwrap(), dist(&b, &a, m).unwrap());
        assert!((ab - ba).abs() < 1e-12);
        assert!(dist(&a, &a, m).unwrap() < 1e-12);
    }
    assert!(dist(&a, &PosDefMatrix::identity(3), MetricKind::Frobenius).is_err());
}

#[test]
fn geodesic_midpoint_of_commuting_pair() {
    let g = Geodesic::new(&PosDefMatrix::identity(2), &diag(&[4.0, 9.0])).unwrap();
    assert!(rel_diff(g.eval(0.5).matrix(), &diag_matrix(&[2.0, 3.0])) < 1e-14);
    assert_eq!(g.eval(0.0), *g.start());
}

#[test]
fn geodesic_proportional_distance_law() {
    let mut s = Sampler::new(4);
    for n in [2, 3, 6] {
        let (a, b) = (s.posdef(n, 1.5), s.posdef(n, 1.5));
        let g = Geodesic::new(&a, &b).unwrap();
        assert!(rel_diff(g.eval(1.0 - 1e-13).matrix(), b.matrix()) < 1e-9);
        for m in MetricKind::ALL {
            let total = dist(&a, &b, m).unwrap();
            assert!((g.length(m) - total).abs() < 1e-10);
            for i in 0..=10 {
                for j in 0..=10 {
                    let (ti, tj) = (i as f64 / 10.0, j as f64 / 10.0 * 1.4 - 0.2);
                    let d = dist(&g.eval(ti), &g.eval(tj), m).unwrap();
                    assert!((d - (ti - tj).abs() * total).abs() < 1e-8, "{m} {ti} {tj}");
                }
            }
        }
    }
}

#[test]
fn action_examples() {
    let mut s = Sampler::new(8);
    let u = s.unitary(3);
    let id = PosDefMatrix::identity(3);
    assert!(rel_diff(act(u.matrix(), &id).unwrap().matrix(), id.matrix()) < 1e-12);
    let two = diag_matrix(&[2.0, 1.0]);
    assert!(rel_diff(act(&two, &PosDefMatrix::identity(2)).unwrap().matrix(), &diag_matrix(&[4.0, 1.0])) < 1e-15);
    assert!(act(&two, &id).is_err());
}

#[test]
fn action_is_isometric() {
    let mut s = Sampler::new(9);
    for n in [2, 5, 8] {
        for _ in 0..20 {
            let g = s.invertible(n, 1.0);
            let (a, b) = (s.posdef(n, 1.0), s.posdef(n, 1.0));
            for m in MetricKind::ALL {
                let before = dist(&a, &b, m).unwrap();
                let after = dist(&act(g.matrix(), &a).unwrap(), &act(g.matrix(), &b).unwrap(), m).unwrap();
                assert!((before - after).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn banach_mazur_trivial_cases() {
    let id = PosDefMatrix::identity(3);
    assert!(banach_mazur_delta(&id, &id).unwrap().abs() < 1e-15);
    let t: f64 = 0.7;
    assert!((banach_mazur_delta(&id.scale(t.exp()), &id).unwrap() - t).abs() < 1e-14);
}

/// Compare both norm conventions with `d` on non-commuting pairs.
///
/// `‖ξ‖_a = ‖aξ‖` gives `δ = d(a², b²)/2`, which dominates `d(a,b)` and is
/// strictly larger on generic non-commuting pairs; `‖ξ‖_a = ⟨aξ,ξ⟩^{1/2}`
/// gives exactly `d(a,b)/2`.
#[test]
fn banach_mazur_conventions_on_noncommuting_pairs() {
    let mut s = Sampler::new(31);
    let mut max_gap = 0.0f64;
    for n in [2, 3, 5] {
        for _ in 0..200 {
            let (a, b) = (s.posdef(n, 1.5), s.posdef(n, 1.5));
            let d = dist(&a, &b, MetricKind::OperatorNorm).unwrap();
            let squared = banach_mazur_delta_with(&a, &b, NormConvention::Squared).unwrap();
            let root = banach_mazur_delta_with(&a, &b, NormConvention::Root).unwrap();
            let d_squares = dist(&a.pow(2.0), &b.pow(2.0), MetricKind::OperatorNorm).unwrap();
            assert!((squared - 0.5 * d_squares).abs() < 1e-8);
            assert!(squared >= d - 1e-8);
            assert!((2.0 * root - d).abs() < 1e-8);
            max_gap = max_gap.max(squared - d);
        }
    }
    assert!(max_gap > 1e-2, "non-commuting pairs should separate the conventions");
}

#[test]
fn segal_examples() {
    let z = HermitianMatrix::zeros(3);
    assert!(segal_residual(&z, &z).unwrap().abs() < 1e-15);
    let x = HermitianMatrix::diagonal(&[0.3, -1.0, 2.0]);
    let y = HermitianMatrix::diagonal(&[1.1, 0.4, -0.2]);
    assert!(segal_residual(&x, &y).unwrap().abs() < 1e-10);
    let mut s = Sampler::new(12);
    let worst = (0..1000)
        .map(|i| {
            let n = 2 + i % 7;
            segal_residual(&s.hermitian(n, 2.0), &s.hermitian(n, 2.0)).unwrap()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(worst >= -1e-10, "{worst}");
}

#[test]
fn emi_examples() {
    let mut s = Sampler::new(13);
    let a = s.posdef(4, 1.0);
    let x = s.hermitian(4, 1.0);
    assert!(emi_residual(&a, &x, &x).unwrap().abs() < 1e-12);
    let id = PosDefMatrix::identity(3);
    let (x, y) = (HermitianMatrix::diagonal(&[0.2, 1.0, -0.5]), HermitianMatrix::diagonal(&[-1.0, 0.3, 0.9]));
    assert!(emi_residual(&id, &x, &y).unwrap().abs() < 1e-10);
    let worst = (0..1000)
        .map(|i| {
            let n = 2 + i % 7;
            emi_residual(&s.posdef(n, 1.0), &s.hermitian(n, 1.5), &s.hermitian(n, 1.5)).unwrap()
        })
        .fold(f64::INFINITY, f64::min);
    assert!(worst >= -1e-10, "{worst}");
}

#[test]
fn exp_and_log_at_are_inverse() {
    let mut s = Sampler::new(14);
    let (a, b) = (s.posdef(4, 1.0), s.posdef(4, 1.0));
    let v = log_at(&a, &b).unwrap();
    assert!(rel_diff(exp_at(&a, &v).unwrap().matrix(), b.matrix()) < 1e-10);
    let g = Geodesic::new(&a, &b).unwrap();
    assert!(rel_diff(exp_at(&a, &v.scale(0.3)).unwrap().matrix(), g.eval(0.3).matrix()) < 1e-10);
}

#[test]
fn metric_kind_parses() {
    assert_eq!("op".parse::<MetricKind>().unwrap(), MetricKind::OperatorNorm);
    assert_eq!("frob".parse::<MetricKind>().unwrap(), MetricKind::Frobenius);
    assert!("l1".parse::<MetricKind>().is_err());
    let _ = real_matrix(&[&[1.0]]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distance_is_jointly_convex_along_geodesics(seed in any::<u64>(), n in 2usize..6) {
        let mut s = Sampler::new(seed);
        let alpha = Geodesic::new(&s.posdef(n, 1.5), &s.posdef(n, 1.5)).unwrap();
        let beta = Geodesic::new(&s.posdef(n, 1.5), &s.posdef(n, 1.5)).unwrap();
        for m in MetricKind::ALL {
            let d0 = dist(alpha.start(), beta.start(), m).unwrap();
            let d1 = dist(alpha.end(), beta.end(), m).unwrap();
            for i in 0..=10 {
                let t = i as f64 / 10.0;
                let dt = dist(&alpha.eval(t), &beta.eval(t), m).unwrap();
                prop_assert!(dt <= t * d1 + (1.0 - t) * d0 + 1e-9);
            }
        }
    }

    #[test]
    fn frobenius_midpoint_satisfies_cat0_inequality(seed in any::<u64>(), n in 2usize..6) {
        let mut s = Sampler::new(seed);
        let (a, b, x) = (s.posdef(n, 1.5), s.posdef(n, 1.5), s.posdef(n, 1.5));
        let m = Geodesic::new(&a, &b).unwrap().eval(0.5);
        let f = MetricKind::Frobenius;
        let lhs = dist(&x, &m, f).unwrap().powi(2);
        let rhs = 0.5 * dist(&x, &a, f).unwrap().powi(2) + 0.5 * dist(&x, &b, f).unwrap().powi(2)
            - 0.25 * dist(&a, &b, f).unwrap().powi(2);
        prop_assert!(lhs <= rhs + 1e-8);
    }

    #[test]
    fn action_composes(seed in any::<u64>(), n in 2usize..7) {
        let mut s = Sampler::new(seed);
        let (g, h, a) = (s.invertible(n, 0.8), s.invertible(n, 0.8), s.posdef(n, 1.0));
        let gh = g.matrix() * h.matrix();
        let lhs = act(&gh, &a).unwrap();
        let rhs = act(g.matrix(), &act(h.matrix(), &a).unwrap()).unwrap();
        prop_assert!(rel_diff(lhs.matrix(), rhs.matrix()) <= 1e-9);
    }
}
