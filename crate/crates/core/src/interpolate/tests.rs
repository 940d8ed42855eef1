use super::*;
use crate::conegeo::{dist, Geodesic, MetricKind};
use crate::error::ConeError;
use crate::harness::sampling::Sampler;
use crate::matcore::{diag_matrix, identity, op_norm, real_matrix, CMatrix, InvertibleMatrix, PosDefMatrix};
use crate::matgroups::{close_group, DEFAULT_CLOSURE_CAP};

fn rot() -> CMatrix {
    real_matrix(&[&[0.0, -1.0], &[1.0, 0.0]])
}

fn refl() -> CMatrix {
    real_matrix(&[&[1.0, 0.0], &[0.0, -1.0]])
}

fn d4() -> MatrixGroup {
    close_group(&[rot(), refl()], DEFAULT_CLOSURE_CAP).unwrap()
}

fn skew(smp: &mut Sampler, cond: f64) -> InvertibleMatrix {
    InvertibleMatrix::new(smp.unitary(2).matrix() * smp.posdef_with_condition(2, cond).matrix()).unwrap()
}

#[test]
fn grid_defaults() {
    let g = default_grid();
    assert_eq!(g.len(), 11);
    assert!((g[1] - 0.1).abs() < 1e-15 && g[10] == 1.0);
    assert!(uniform_grid(0).is_empty());
}

#[test]
fn family_starts_at_r_inverse_h_r() {
    let mut smp = Sampler::new(3);
    let h = d4().conjugated(&skew(&mut smp, 4.0)).unwrap();
    let r2 = smp.posdef(2, 0.7);
    let s2 = smp.posdef(2, 0.7);
    let fam = conjugate_family(&h, &r2, &s2, &[0.0]).unwrap();
    let r = r2.sqrt();
    let rinv = r2.inv_sqrt();
    // every r⁻¹hr lies in H₀ and the orders agree
    for g in h.elements() {
        assert!(fam[0].group_t.find(&(rinv.matrix() * g * r.matrix())).is_some());
    }
    assert!(fam[0].order_ok);
    assert_eq!(fam[0].group_t.order(), 8);
}

#[test]
fn unitary_family_is_constant() {
    let id = PosDefMatrix::identity(2);
    let rep = verify_interpolation(&d4(), &id, &id, &default_grid()).unwrap();
    for (p, m) in rep.points.iter().zip(&rep.margins) {
        assert!((p.size_t - 1.0).abs() < 1e-12);
        assert!((p.sim_t - 1.0).abs() < 1e-6);
        assert!(m.size.abs() < 1e-12 && m.sim.abs() < 1e-6);
    }
    assert!(rep.holds());
}

#[test]
fn random_instance_satisfies_size_bound() {
    for seed in 0..6 {
        let mut smp = Sampler::new(100 + seed);
        let h = d4().conjugated(&skew(&mut smp, 3.0)).unwrap();
        let r2 = smp.posdef(2, 0.8);
        let s2 = smp.posdef(2, 0.8);
        let rep = verify_interpolation(&h, &r2, &s2, &default_grid()).unwrap();
        // oracle: enumerate the endpoint groups directly
        let r = r2.sqrt();
        let rinv = r2.inv_sqrt();
        let s = s2.sqrt();
        let sinv = s2.inv_sqrt();
        let size0 = h.elements().iter().map(|g| op_norm(&(rinv.matrix() * g * r.matrix()))).fold(1.0, f64::max);
        let size1 = h.elements().iter().map(|g| op_norm(&(sinv.matrix() * g * s.matrix()))).fold(1.0, f64::max);
        assert!((rep.size_start - size0).abs() < 1e-10 && (rep.size_end - size1).abs() < 1e-10);
        for p in &rep.points {
            assert!(p.size_t <= size0.powf(1.0 - p.t) * size1.powf(p.t) + 1e-8, "seed {seed} t {}", p.t);
        }
        assert!(rep.size_holds() && rep.sim_holds() && rep.orders_ok(), "seed {seed}");
        assert!(!rep.minimizing);
    }
}

#[test]
fn minimizing_geodesic_gives_equality_curve() {
    // H = sUs⁻¹ with U irreducible: P^H = {c·ss*}, so Sim(H) = cond(s) and
    // along γ_t = (ss*)^t one has Sim(H_t) = cond(s)^{1-t}
    let mut smp = Sampler::new(17);
    let s = skew(&mut smp, 5.0);
    let h = d4().conjugated(&s).unwrap();
    let cond = s.condition_number();
    let ss = PosDefMatrix::from_matrix(s.matrix() * s.matrix().adjoint()).unwrap();
    let s2 = ss.scale(1.0 / (ss.lambda_max() * ss.lambda_min()).sqrt());
    let id = PosDefMatrix::identity(2);
    let rep = verify_interpolation(&h, &id, &s2, &default_grid()).unwrap();
    assert!(rep.minimizing);
    assert!((rep.sim_h / cond - 1.0).abs() < 1e-6);
    for p in &rep.points {
        let want = cond.powf(1.0 - p.t);
        assert!((p.sim_t / want - 1.0).abs() < 1e-4, "t {} got {} want {}", p.t, p.sim_t, want);
    }
    assert!(rep.equality_holds() && rep.corollary_holds());
    // the corollary against a direct enumeration of |H|
    let size_h = h.elements().iter().map(op_norm).fold(1.0, f64::max);
    for p in &rep.points {
        assert!(p.size_t <= size_h.powf(1.0 - p.t) + 1e-8);
    }
    assert!(rep.holds());
}

#[test]
fn sim_minimizer_drives_equality_branch() {
    let mut smp = Sampler::new(29);
    let h = d4().conjugated(&skew(&mut smp, 3.0)).unwrap();
    let s2 = crate::unitarize::similarity_number(&h).unwrap().minimizer;
    let rep = verify_interpolation(&h, &PosDefMatrix::identity(2), &s2, &default_grid()).unwrap();
    assert!(rep.minimizing);
    assert!(rep.holds());
    assert!(rep.size_end < 1.0 + 1e-8);
}

#[test]
fn block_diagonal_family_uses_both_blocks() {
    // a reducible instance: the fixed cone is two-dimensional
    let mut smp = Sampler::new(41);
    let c = crate::matcore::direct_sum(&[&rot(), &rot()]);
    let f = crate::matcore::direct_sum(&[&refl(), &refl()]);
    let s = InvertibleMatrix::new(crate::matcore::direct_sum(&[
        skew(&mut smp, 2.0).matrix(),
        skew(&mut smp, 6.0).matrix(),
    ]))
    .unwrap();
    let h = close_group(&[c, f], DEFAULT_CLOSURE_CAP).unwrap().conjugated(&s).unwrap();
    let s2 = crate::unitarize::similarity_number(&h).unwrap().minimizer;
    let rep = verify_interpolation(&h, &PosDefMatrix::identity(4), &s2, &uniform_grid(5)).unwrap();
    assert!(rep.holds(), "{:?}", rep.margins);
}

#[test]
fn extension_chain_on_dihedral_group() {
    let c = InvertibleMatrix::new(diag_matrix(&[2.0, 0.5]) * real_matrix(&[&[1.0, 0.3], &[0.0, 1.0]])).unwrap();
    let rep = extension_experiment(&[rot()], &[rot(), refl()], Some(&c)).unwrap();
    assert_eq!((rep.order_sigma, rep.order_gamma), (4, 8));
    // recompute every term directly
    let h = d4().conjugated(&c).unwrap();
    let op = MetricKind::OperatorNorm;
    let id = PosDefMatrix::identity(2);
    let mut sum = CMatrix::zeros(2, 2);
    for g in h.elements() {
        sum += g * rep.a.matrix() * g.adjoint();
    }
    let b = PosDefMatrix::from_matrix(sum / crate::matcore::c64(8.0, 0.0)).unwrap();
    let d_ab = dist(&rep.a, &b, op).unwrap();
    let d_ib = dist(&id, &b, op).unwrap();
    let d_ia = dist(&id, &rep.a, op).unwrap();
    let diam_a = h.elements().iter().map(|g| dist(&rep.a, &crate::conegeo::act(g, &rep.a).unwrap(), op).unwrap()).fold(0.0, f64::max);
    assert!((rep.d_a_b - d_ab).abs() < 1e-9 && (rep.d_id_b - d_ib).abs() < 1e-9);
    assert!((rep.dist_sigma - d_ia).abs() < 1e-9 && (rep.diam_gamma_a - diam_a).abs() < 1e-9);
    assert!(rep.dist_gamma <= d_ib + CHAIN_SLACK);
    assert!(d_ib <= d_ia + d_ab + CHAIN_SLACK);
    assert!(d_ab <= diam_a + CHAIN_SLACK);
    // b is fixed by the whole group
    for g in h.generators() {
        assert!((g * b.matrix() * g.adjoint() - b.matrix()).norm() < 1e-9);
    }
    assert!(rep.holds(), "{:?}", rep.chain);
}

#[test]
fn extension_with_sigma_equal_to_gamma_collapses() {
    let mut smp = Sampler::new(5);
    let c = skew(&mut smp, 3.0);
    let rep = extension_experiment(&[rot(), refl()], &[rot(), refl()], Some(&c)).unwrap();
    for name in ["dist_gamma<=d(id,b)", "d(id,b)<=d(id,a)+d(a,b)", "d(a,b)<=D_gamma(a)", "D_sigma(id)<=D_gamma(id)"] {
        assert!(rep.term(name).unwrap().slack.abs() < 1e-6, "{name}: {:?}", rep.term(name));
    }
    assert!(rep.d_a_b < 1e-6 && rep.diam_gamma_a < 1e-6);
    assert!(rep.holds());
}

#[test]
fn extension_with_trivial_sigma() {
    let mut smp = Sampler::new(6);
    let c = skew(&mut smp, 3.0);
    let rep = extension_experiment(&[identity(2)], &[rot(), refl()], Some(&c)).unwrap();
    assert_eq!(rep.order_sigma, 1);
    assert!(rep.dist_sigma.abs() < 1e-9);
    assert!(rep.holds(), "{:?}", rep.chain);
}

#[test]
fn extension_rejects_non_normal_subgroup() {
    // ⟨f⟩ is not normal in D4: r f r⁻¹ = r² f
    let err = extension_experiment(&[refl()], &[rot(), refl()], None).unwrap_err();
    assert!(matches!(err, ConeError::NotNormal { generator: 0 }));
    let err = extension_experiment(&[diag_matrix(&[1.0, -1.0]) * crate::matcore::c64(0.0, 1.0)], &[rot(), refl()], None)
        .unwrap_err();
    assert!(matches!(err, ConeError::BadSpec(_)));
}

#[test]
fn diameter_profile_is_convex_and_two_lipschitz() {
    for seed in 0..8 {
        let mut smp = Sampler::new(500 + seed);
        let h = d4().conjugated(&skew(&mut smp, 3.0)).unwrap();
        let a = smp.posdef(2, 1.0);
        let b = smp.posdef(2, 1.0);
        let gamma = Geodesic::new(&a, &b).unwrap();
        let grid = default_grid();
        for m in MetricKind::ALL {
            let prof = diameter_profile(&h, &gamma, &grid, m).unwrap();
            for w in prof.windows(3) {
                assert!(w[0] + w[2] - 2.0 * w[1] >= -1e-8, "seed {seed}");
            }
            for i in 1..grid.len() {
                let step = dist(&gamma.eval(grid[i - 1]), &gamma.eval(grid[i]), m).unwrap();
                assert!((prof[i] - prof[i - 1]).abs() <= 2.0 * step + 1e-8);
            }
        }
    }
}
