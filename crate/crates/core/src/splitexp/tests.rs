use super::*;
use crate::conegeo::{dist, MetricKind};
use crate::error::ConeError;
use crate::harness::sampling::Sampler;
use crate::matcore::{c64, diag_matrix, direct_sum, identity, op_norm, real_matrix, CMatrix, HermitianMatrix, InvertibleMatrix, PosDefMatrix};
use crate::matgroups::{close_group, commutant_basis, BlockAlgebra, FixedCone, MatrixGroup, Representation, DEFAULT_CLOSURE_CAP};
use crate::tolerance::Tolerances;
use crate::unitarize::dist_to_fixed_cone;

fn rot() -> CMatrix {
    real_matrix(&[&[0.0, -1.0], &[1.0, 0.0]])
}

fn refl() -> CMatrix {
    real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]])
}

fn random_projection(smp: &mut Sampler, n: usize, rank: usize) -> CMatrix {
    let u = smp.unitary(n);
    let d: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    u.matrix() * diag_matrix(&d) * u.adjoint()
}

fn reducible_unitary_group() -> MatrixGroup {
    let one = identity(1);
    close_group(&[direct_sum(&[&rot(), &one, &one]), direct_sum(&[&refl(), &-identity(1), &one])], DEFAULT_CLOSURE_CAP)
        .unwrap()
}

/// Block algebra `M_2 ⊕ M_3`, a rank-one projection per block, the pinching
/// expectation and the C₂ representation through `q = 2p − 1`.
fn block_setup(smp: &mut Sampler) -> (BlockAlgebra, CondExpectation, Representation) {
    let p = direct_sum(&[&random_projection(smp, 2, 1), &random_projection(smp, 3, 1)]);
    let alg = BlockAlgebra::blocks(&[2, 3]);
    let e = CondExpectation::pinching(vec![p.clone(), identity(5) - &p], alg.clone(), &Tolerances::default()).unwrap();
    let q = p * c64(2.0, 0.0) - identity(5);
    let pi0 = Representation::from_group(&close_group(&[q], 10).unwrap()).unwrap();
    (alg, e, pi0)
}

fn block_invertible(smp: &mut Sampler, scale: f64) -> InvertibleMatrix {
    let g = direct_sum(&[&smp.invertible(2, scale).into_matrix(), &smp.invertible(3, scale).into_matrix()]);
    InvertibleMatrix::new(g).unwrap()
}

#[test]
fn pinching_examples() {
    let e = pinching_expectation(&identity(3)).unwrap();
    let mut smp = Sampler::new(1);
    let x = smp.gaussian(3);
    assert!((e.apply(&x) - &x).norm() < 1e-14);

    let e11 = diag_matrix(&[1.0, 0.0]);
    let e = pinching_expectation(&e11).unwrap();
    let x = real_matrix(&[&[1.0, 2.0], &[3.0, 4.0]]);
    assert!((e.apply(&x) - diag_matrix(&[1.0, 4.0])).norm() < 1e-15);
    assert_eq!(e.range_basis().len(), 2);
    assert_eq!(e.kernel_basis().len(), 2);

    assert!(matches!(pinching_expectation(&diag_matrix(&[0.5, 0.0])), Err(ConeError::NotProjection { .. })));
}

#[test]
fn pinching_complement_has_norm_one() {
    let mut smp = Sampler::new(2);
    let p = random_projection(&mut smp, 4, 2);
    let e = pinching_expectation(&p).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let x = smp.hermitian(4, 1.0);
        let r = op_norm(&(x.matrix() - e.apply(x.matrix()))) / x.op_norm();
        assert!(r <= 1.0 + 1e-12);
        worst = worst.max(r);
    }
    // off-block elements attain the bound
    for k in e.kernel_basis() {
        assert!((op_norm(&(k.matrix() - e.apply(k.matrix()))) / k.op_norm() - 1.0).abs() < 1e-12);
    }
    let est = complement_norm(&e, 1000, 3);
    assert_eq!(est.analytic, Some(1.0));
    assert!(est.best_sample <= 1.0 + 1e-12 && est.best_sample > 1.0 - 1e-9);
    assert!(worst > 0.5);
}

#[test]
fn group_average_examples() {
    let triv = close_group(&[identity(3)], 10).unwrap();
    let e = group_average_expectation(&triv).unwrap();
    let mut smp = Sampler::new(4);
    let x = smp.gaussian(3);
    assert!((e.apply(&x) - &x).norm() < 1e-14);

    let d4 = close_group(&[rot(), refl()], 10).unwrap();
    let e = group_average_expectation(&d4).unwrap();
    let x = smp.gaussian(2);
    let want = identity(2) * (x.trace() / c64(2.0, 0.0));
    assert!((e.apply(&x) - want).norm() < 1e-14);

    let h = close_group(&[diag_matrix(&[-1.0, 1.0]) * c64(2.0, 0.0) * c64(0.5, 0.0)], 10).unwrap();
    assert!(group_average_expectation(&h).is_ok());
    let bad = close_group(&[real_matrix(&[&[0.0, 2.0], &[0.5, 0.0]])], 10).unwrap();
    assert!(matches!(group_average_expectation(&bad), Err(ConeError::NotUnitaryGroup { .. })));
}

#[test]
fn expectation_axioms() {
    let mut smp = Sampler::new(5);
    let h = reducible_unitary_group();
    let es = [
        group_average_expectation(&h).unwrap(),
        pinching_expectation(&random_projection(&mut smp, 4, 1)).unwrap(),
        CondExpectation::pinching(
            vec![diag_matrix(&[1.0, 0.0, 0.0, 0.0]), diag_matrix(&[0.0, 1.0, 1.0, 0.0]), diag_matrix(&[0.0, 0.0, 0.0, 1.0])],
            BlockAlgebra::full(4),
            &Tolerances::default(),
        )
        .unwrap(),
    ];
    for e in &es {
        assert!(e.unit_residual() < 1e-12);
        let (cross, deficit) = e.decomposition_residual();
        assert!(cross < 1e-10);
        assert_eq!(deficit, 0);
        for _ in 0..50 {
            let x = smp.gaussian(4);
            assert!(e.idempotence_residual(&x) < 1e-9);
            assert!(e.adjoint_residual(&x) < 1e-12);
            assert!(e.trace_residual(&x) < 1e-12);
            let b1 = e.apply(&smp.gaussian(4));
            let b2 = e.apply(&smp.gaussian(4));
            assert!(e.bimodule_residual(&b1, &x, &b2) < 1e-9);
        }
    }
    // the average lands on the commutant
    let comm = commutant_basis(&h).unwrap();
    let range = FixedCone::from_span(4, BlockAlgebra::full(4), vec![], es[0].range_basis());
    assert!(range.subspace_gap(&FixedCone::from_span(4, BlockAlgebra::full(4), vec![], &comm)) < 1e-9);
}

#[test]
fn positive_split_examples() {
    let mut smp = Sampler::new(6);
    let p = random_projection(&mut smp, 4, 2);
    let e = pinching_expectation(&p).unwrap();

    let inside = PosDefMatrix::new(e.apply_hermitian(&smp.posdef(4, 1.0).hermitian().clone())).unwrap();
    let s = pr_split_positive(&inside, &e).unwrap();
    assert!(s.x.frobenius_norm() < 1e-9);
    assert!((s.y.matrix() - inside.log().scale(0.5).matrix()).norm() < 1e-9);

    let raw = smp.hermitian(4, 1.0);
    let x = e.project_kernel(&raw);
    let a = x.exp();
    let s = pr_split_positive(&a, &e).unwrap();
    assert!(s.y.frobenius_norm() < 1e-9);
    assert!((s.x.matrix() - x.matrix()).norm() < 1e-9);

    for scale in [0.5, 1.5, 3.0] {
        let a = smp.posdef(4, scale);
        let s = pr_split_positive(&a, &e).unwrap();
        assert!((s.reconstruct() - a.matrix()).norm() <= 1e-8 * a.matrix().norm().max(1.0));
        assert!(e.apply_hermitian(&s.x).frobenius_norm() <= 1e-8);
        assert!(e.project_kernel(&s.y).frobenius_norm() <= 1e-8);
    }
}

#[test]
fn invertible_split_examples() {
    let mut smp = Sampler::new(7);
    let h = reducible_unitary_group();
    let e = group_average_expectation(&h).unwrap();

    let g = smp.unitary(4);
    let t = pr_split_invertible(&InvertibleMatrix::new(g.matrix().clone()).unwrap(), &e).unwrap();
    assert!((t.u.matrix() - g.matrix()).norm() < 1e-9);
    assert!(t.z.frobenius_norm() < 1e-9 && t.y.frobenius_norm() < 1e-9);

    let y = e.project_range(&smp.hermitian(4, 1.0));
    let t = pr_split_invertible(&InvertibleMatrix::new(y.exp().into_matrix()).unwrap(), &e).unwrap();
    assert!((t.u.matrix() - identity(4)).norm() < 1e-9);
    assert!(t.z.frobenius_norm() < 1e-9);

    for _ in 0..10 {
        let g = smp.invertible(4, 0.8);
        let t = pr_split_invertible(&g, &e).unwrap();
        assert!((t.u.matrix().adjoint() * t.u.matrix() - identity(4)).norm() <= 1e-8);
        assert!((t.reconstruct() - g.matrix()).norm() <= 1e-8 * g.matrix().norm());
    }
}

#[test]
fn canonical_unitarizer_examples() {
    let mut smp = Sampler::new(8);
    let h = reducible_unitary_group();
    let e = group_average_expectation(&h).unwrap();
    let pi0 = Representation::from_group(&h).unwrap();

    let u = smp.unitary(4);
    let cu = canonical_unitarizer(&InvertibleMatrix::new(u.into_matrix()).unwrap(), &pi0, &e).unwrap();
    assert!(cu.x0.frobenius_norm() < 1e-9);

    let y = e.project_range(&smp.hermitian(4, 1.0));
    let cu = canonical_unitarizer(&InvertibleMatrix::new(y.exp().into_matrix()).unwrap(), &pi0, &e).unwrap();
    assert!(cu.x0.frobenius_norm() < 1e-9);

    for _ in 0..10 {
        let g = smp.invertible(4, 0.8);
        let cu = canonical_unitarizer(&g, &pi0, &e).unwrap();
        assert!(cu.residual <= 1e-7, "{}", cu.residual);
        assert!(cu.kernel_residual <= 1e-8);
        assert!(cu.rho.homomorphism_residual() < 1e-9);
        // E_ρ lands on the commutant of ρ
        assert!(range_gap(&cu.e_rho, &cu.rho.generator_images()).unwrap() < Tolerances::default().fix);
    }

    let wrong = pinching_expectation(&random_projection(&mut smp, 4, 2)).unwrap();
    let g = smp.invertible(4, 0.5);
    assert!(matches!(canonical_unitarizer(&g, &pi0, &wrong), Err(ConeError::RangeMismatch { .. })));
}

#[test]
fn thmacs_examples() {
    let mut smp = Sampler::new(9);
    let (_, e, pi0) = block_setup(&mut smp);

    let u = direct_sum(&[&smp.unitary(2).into_matrix(), &smp.unitary(3).into_matrix()]);
    let r = thmacs_check(&InvertibleMatrix::new(u).unwrap(), &pi0, &e).unwrap();
    assert!((r.lhs - 1.0).abs() < 1e-8 && (r.rhs - 1.0).abs() < 1e-8);

    let x = e.project_kernel(&smp.hermitian(5, 1.0));
    let r = thmacs_check(&InvertibleMatrix::new(x.exp().into_matrix()).unwrap(), &pi0, &e).unwrap();
    assert!((r.lhs - (2.0 * x.op_norm()).exp()).abs() <= 1e-9 * r.lhs);
    assert!((r.rhs / r.lhs - 1.0).abs() <= 1e-4, "{} vs {}", r.rhs, r.lhs);

    for _ in 0..5 {
        let g = block_invertible(&mut smp, 0.7);
        let r = thmacs_check(&g, &pi0, &e).unwrap();
        assert!((r.ratio - 1.0).abs() <= 1e-3, "{r:?}");
        assert!((r.intermediate / r.rhs - 1.0).abs() <= 1e-4);
    }

    let off = InvertibleMatrix::new(smp.invertible(5, 0.5).into_matrix()).unwrap();
    assert!(matches!(thmacs_check(&off, &pi0, &e), Err(ConeError::BadSpec(_))));
}

#[test]
fn splitting_minimality_for_pinching() {
    let mut smp = Sampler::new(10);
    let e = pinching_expectation(&random_projection(&mut smp, 4, 2)).unwrap();
    for _ in 0..10 {
        let y = e.project_range(&smp.hermitian(4, 1.0));
        let x = e.project_kernel(&smp.hermitian(4, 1.0));
        assert!((leaf_distance(&x, &y) - x.op_norm()).abs() <= 1e-8);
        let point = x.exp().congruence(y.exp().matrix());
        for _ in 0..20 {
            let w = e.project_range(&smp.hermitian(4, 1.5));
            assert!(dist(&w.exp(), &point, MetricKind::OperatorNorm).unwrap() >= x.op_norm() - 1e-8);
        }
    }
}

#[test]
fn frobenius_closest_point_is_exp_two_y() {
    let mut smp = Sampler::new(11);
    let h = reducible_unitary_group();
    let e = group_average_expectation(&h).unwrap();
    let cone = FixedCone::from_span(4, BlockAlgebra::full(4), h.generators().to_vec(), e.range_basis());
    for _ in 0..5 {
        let y = e.project_range(&smp.hermitian(4, 1.0));
        let x = e.project_kernel(&smp.hermitian(4, 1.0));
        let point = x.exp().congruence(y.exp().matrix());
        let d = dist_to_fixed_cone(&point, &cone, MetricKind::Frobenius).unwrap();
        assert!(dist(&d.witness, &y.scale(2.0).exp(), MetricKind::Frobenius).unwrap() <= 1e-5);
        assert!((d.value - x.frobenius_norm()).abs() <= 1e-8);
    }
    let _ = HermitianMatrix::zeros(1);
}

#[test]
fn pinching_range_is_exact_across_many_projections() {
    // repeated 0/1 spectra used to trip the SVD into a wrong range vector
    for seed in 0..200 {
        let mut smp = Sampler::new(seed);
        let (_, e, pi0) = block_setup(&mut smp);
        let q = pi0.generator_images()[0].clone();
        for b in e.range_basis() {
            assert!((&q * b.matrix() - b.matrix() * &q).norm() < 1e-12, "seed {seed}");
        }
        for b in e.kernel_basis() {
            assert!(e.apply_hermitian(b).frobenius_norm() < 1e-12, "seed {seed}");
        }
        assert!(range_gap(&e, &pi0.generator_images()).unwrap() < 1e-10, "seed {seed}");
    }
}
