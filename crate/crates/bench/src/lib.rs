//! Shared fixtures for the criterion benchmarks.

use conegeo::harness::sampling::Sampler;
use conegeo::harness::{gen_bounded_rep, GroupSpec};
use conegeo::matgroups::{MatrixGroup, DEFAULT_CLOSURE_CAP};
use conegeo::{PosDefMatrix, Tolerances};

pub const SEED: u64 = 0xbe_4c;

pub fn posdef_pair(n: usize) -> (PosDefMatrix, PosDefMatrix) {
    let mut smp = Sampler::new(SEED ^ n as u64);
    (smp.posdef(n, 1.0), smp.posdef(n, 1.0))
}

/// A bounded, non-unitary copy of a catalog group.
pub fn bounded_group(spec: &str, cond: f64) -> MatrixGroup {
    let spec: GroupSpec = spec.parse().expect("valid group spec");
    let rep = gen_bounded_rep(&spec, cond, SEED).expect("representation builds");
    MatrixGroup::close(&rep.generator_images(), DEFAULT_CLOSURE_CAP, &Tolerances::default()).expect("group closes")
}
