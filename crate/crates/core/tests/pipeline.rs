//! End-to-end use of the public API: build a bounded representation, find
//! its unitarizers, interpolate toward the unitary end, split a conjugator.

use conegeo::conegeo::{dist_from_identity, MetricKind};
use conegeo::harness::{gen_bounded_rep, GroupSpec};
use conegeo::interpolate::{default_grid, verify_interpolation};
use conegeo::matcore::{read_matrix, unitarity_residual, write_matrix};
use conegeo::matgroups::{group_size_norm, orbit_diameter, MatrixGroup, DEFAULT_CLOSURE_CAP};
use conegeo::splitexp::{group_average_expectation, pr_split_invertible};
use conegeo::unitarize::{average_unitarizer, circumcenter_unitarizer, similarity_number};
use conegeo::{ConeError, InvertibleMatrix, PosDefMatrix, Tolerances};

fn group(spec: &str, cond: f64, seed: u64) -> MatrixGroup {
    let rep = gen_bounded_rep(&spec.parse::<GroupSpec>().unwrap(), cond, seed).unwrap();
    MatrixGroup::close(&rep.generator_images(), DEFAULT_CLOSURE_CAP, &Tolerances::default()).unwrap()
}

#[test]
fn unitarizers_agree_on_the_unitary_picture() {
    for (spec, seed) in [("dihedral:3/std", 1), ("quaternion/std+std", 2), ("cyclic:4/reg", 3)] {
        let h = group(spec, 3.0, seed);
        for u in [average_unitarizer(&h).unwrap(), circumcenter_unitarizer(&h).unwrap()] {
            let s_inv = u.s.inverse();
            for g in h.elements() {
                assert!(unitarity_residual(&(s_inv.matrix() * g * u.s.matrix())) < 1e-7, "{spec}");
            }
        }
        let sim = similarity_number(&h).unwrap();
        let size = group_size_norm(&h);
        // |H| ≤ Sim(H) ≤ |H|², and D_H(id) = 2 log|H|
        assert!(sim.sim_value >= size * (1.0 - 1e-6) && sim.sim_value <= size * size * (1.0 + 1e-6), "{spec}");
        let diam = orbit_diameter(&h, &PosDefMatrix::identity(h.dim()), MetricKind::OperatorNorm).unwrap();
        assert!((diam - 2.0 * size.ln()).abs() < 1e-8);
    }
}

#[test]
fn interpolation_from_the_sim_minimizer() {
    let h = group("dihedral:4/std+reg", 2.5, 7);
    let sim = similarity_number(&h).unwrap();
    assert!((dist_from_identity(&sim.minimizer, MetricKind::OperatorNorm) - sim.sim_value.ln()).abs() < 1e-6);
    let report = verify_interpolation(&h, &PosDefMatrix::identity(h.dim()), &sim.minimizer, &default_grid()).unwrap();
    assert!(report.minimizing && report.holds());
    let last = report.points.last().unwrap();
    assert!((last.sim_t - 1.0).abs() < 1e-4);
}

#[test]
fn splitting_a_conjugator_against_the_group_average() {
    let h = group("dihedral:3/std", 1.0, 0);
    let e = group_average_expectation(&h).unwrap();
    let mut smp = conegeo::harness::sampling::Sampler::new(11);
    let g: InvertibleMatrix = smp.invertible(2, 0.6);
    let t = pr_split_invertible(&g, &e).unwrap();
    assert!((t.reconstruct() - g.matrix()).norm() <= 1e-8 * g.matrix().norm());
    assert!(e.apply_hermitian(&t.z).frobenius_norm() <= 1e-8);
}

#[test]
fn matrices_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let h = group("quaternion/std", 2.0, 4);
    for (i, g) in h.generators().iter().enumerate() {
        let path = dir.path().join(format!("g{i}.json"));
        write_matrix(&path, g).unwrap();
        assert_eq!(&read_matrix(&path).unwrap(), g);
    }
    match read_matrix(dir.path().join("absent.json")) {
        Err(ConeError::Io { path, .. }) => assert!(path.ends_with("absent.json")),
        other => panic!("expected an I/O error, got {other:?}"),
    }
}
