//! The registry of verification checks. Each check draws its instances from
//! its own seeded streams and reports a margin per instance: nonnegative
//! means the property held at its tolerance.

use serde::Serialize;

use crate::conegeo::{
    act, banach_mazur_delta_with, dist, dist_from_identity, emi_residual, segal_residual, Geodesic, MetricKind,
    NormConvention,
};
use crate::error::Result;
use crate::interpolate::{diameter_profile, extension_experiment, uniform_grid, verify_interpolation_with};
use crate::matcore::{c64, diag_matrix, direct_sum, identity, CMatrix, InvertibleMatrix, PosDefMatrix};
use crate::matgroups::{
    fixed_cone, fixed_cone_in, group_size_norm, orbit, orbit_diameter, BlockAlgebra, FixedCone, MatrixGroup,
    DEFAULT_CLOSURE_CAP,
};
use crate::splitexp::{
    group_average_expectation, leaf_distance, pinching_expectation, pr_split_invertible, pr_split_positive,
    thmacs_check, CondExpectation,
};
use crate::tolerance::Tolerances;
use crate::unitarize::{
    average_unitarizer, circumcenter_unitarizer, circumcenter_with, dist_to_fixed_cone, hs_bound, similarity_number,
    similarity_number_of_cone,
};

use super::catalog::{gen_bounded_rep, GroupFamily, GroupSpec};
use super::sampling::Sampler;
use super::{ExperimentConfig, Suite};

pub(crate) struct Ctx<'a> {
    pub cfg: &'a ExperimentConfig,
    pub tol: Tolerances,
}

/// Margin of one instance, and optionally a `(log|H|, log Sim)` pair for the
/// scatter export.
pub(crate) struct Outcome {
    pub margin: f64,
    pub point: Option<(f64, f64)>,
}

impl From<f64> for Outcome {
    fn from(margin: f64) -> Self {
        Self { margin, point: None }
    }
}

type Runner = fn(&Ctx, &mut Sampler, usize) -> Result<Outcome>;

pub(crate) struct Check {
    pub id: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
    pub count: fn(&ExperimentConfig) -> usize,
    pub run: Runner,
}

/// Public view of a registry entry.
#[derive(Clone, Debug, Serialize)]
pub struct CheckInfo {
    pub id: &'static str,
    pub anchor: &'static str,
    pub suite: Suite,
}

pub fn registry() -> Vec<CheckInfo> {
    checks().iter().map(|c| CheckInfo { id: c.id, anchor: c.anchor, suite: c.suite }).collect()
}

fn per_dim(cfg: &ExperimentConfig) -> usize {
    cfg.trials * cfg.dims.len()
}

fn fraction(trials: usize, k: usize) -> usize {
    trials.div_ceil(k)
}

fn all(cfg: &ExperimentConfig) -> usize {
    cfg.trials
}
fn fifth(cfg: &ExperimentConfig) -> usize {
    fraction(cfg.trials, 5)
}
fn tenth(cfg: &ExperimentConfig) -> usize {
    fraction(cfg.trials, 10)
}
fn twentieth(cfg: &ExperimentConfig) -> usize {
    fraction(cfg.trials, 20)
}
fn fiftieth(cfg: &ExperimentConfig) -> usize {
    fraction(cfg.trials, 50)
}

fn dim_at(cfg: &ExperimentConfig, idx: usize) -> usize {
    cfg.dims[idx % cfg.dims.len()]
}

fn rel(x: &CMatrix, y: &CMatrix) -> f64 {
    (x - y).norm() / y.norm().max(1.0)
}

/// A random catalog group conjugated by a positive matrix of condition in
/// `[1.2, 5]`.
fn random_group(ctx: &Ctx, smp: &mut Sampler) -> Result<MatrixGroup> {
    let spec = &ctx.cfg.catalog[smp.index(ctx.cfg.catalog.len())];
    let cond = smp.uniform(1.2, 5.0);
    gen_bounded_rep(spec, cond, smp.next_u64())?.image_group(DEFAULT_CLOSURE_CAP, &ctx.tol)
}

fn unitary_group(ctx: &Ctx, smp: &mut Sampler) -> Result<MatrixGroup> {
    let spec = &ctx.cfg.catalog[smp.index(ctx.cfg.catalog.len())];
    spec.unitary_rep()?.image_group(DEFAULT_CLOSURE_CAP, &ctx.tol)
}

fn fixed_residual(h: &MatrixGroup, a: &CMatrix) -> f64 {
    h.generators().iter().map(|g| (g * a * g.adjoint() - a).norm()).fold(0.0, f64::max) / a.norm()
}

// ---------------------------------------------------------------- geometry

fn geodesic_endpoints(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let (a, b) = (smp.posdef(n, 1.0), smp.posdef(n, 1.0));
    let t = smp.uniform(0.0, 1.0);
    let forward = Geodesic::new(&a, &b)?;
    let backward = Geodesic::new(&b, &a)?;
    // the closed form at t = 1 and the reversal symmetry γ_{a,b}(t) = γ_{b,a}(1 − t)
    let end = a.inv_sqrt().matrix() * b.matrix() * a.inv_sqrt().matrix();
    let end = a.sqrt().matrix() * end * a.sqrt().matrix();
    let r = rel(&end, b.matrix())
        .max(rel(forward.eval(t).matrix(), backward.eval(1.0 - t).matrix()))
        .max(rel(forward.eval(1e-300).matrix(), a.matrix()));
    Ok((1e-9 - r).into())
}

fn geodesic_proportional(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let (a, b) = (smp.posdef(n, 1.0), smp.posdef(n, 1.0));
    let t = smp.uniform(0.0, 1.0);
    let g = Geodesic::new(&a, &b)?.eval(t);
    let mut worst = 0.0f64;
    for m in MetricKind::ALL {
        let d = dist(&a, &b, m)?;
        worst = worst.max((dist(&a, &g, m)? - t * d).abs()).max((dist(&g, &b, m)? - (1.0 - t) * d).abs());
    }
    Ok((1e-9 - worst).into())
}

fn action_isometry(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let (a, b) = (smp.posdef(n, 1.0), smp.posdef(n, 1.0));
    let g = smp.invertible(n, 0.5);
    let mut worst = 0.0f64;
    for m in MetricKind::ALL {
        let moved = dist(&act(g.matrix(), &a)?, &act(g.matrix(), &b)?, m)?;
        worst = worst.max((moved - dist(&a, &b, m)?).abs());
    }
    Ok((1e-9 - worst).into())
}

fn action_law(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let a = smp.posdef(n, 1.0);
    let (g, h) = (smp.invertible(n, 0.5), smp.invertible(n, 0.5));
    let gh = g.matrix() * h.matrix();
    let r = rel(act(&gh, &a)?.matrix(), act(g.matrix(), &act(h.matrix(), &a)?)?.matrix())
        .max(rel(act(&identity(n), &a)?.matrix(), a.matrix()));
    Ok((1e-9 - r).into())
}

fn exp_log_roundtrip(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let x = smp.hermitian(n, 2.0);
    let r = rel(x.exp().log().matrix(), x.matrix());
    Ok((ctx.tol.recon - r).into())
}

fn banach_mazur(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let (a, b) = (smp.posdef(n, 1.0), smp.posdef(n, 1.0));
    let d = dist(&a, &b, MetricKind::OperatorNorm)?;
    let root = banach_mazur_delta_with(&a, &b, NormConvention::Root)?;
    let squared = banach_mazur_delta_with(&a, &b, NormConvention::Squared)?;
    let d_sq = dist(&a.pow(2.0), &b.pow(2.0), MetricKind::OperatorNorm)?;
    let r = (2.0 * root - d).abs().max((2.0 * squared - d_sq).abs());
    Ok((1e-9 - r).into())
}

fn segal(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let (x, y) = (smp.hermitian(n, 1.0), smp.hermitian(n, 1.0));
    Ok((segal_residual(&x, &y)? + 1e-10).into())
}

fn exponential_metric_increasing(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let a = smp.posdef(n, 1.0);
    let (x, y) = (smp.hermitian(n, 1.0), smp.hermitian(n, 1.0));
    Ok((emi_residual(&a, &x, &y)? + 1e-10).into())
}

/// Second differences of `t ↦ d(γ₁(t), γ₂(t))` on an 11-point grid.
fn joint_convexity(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = dim_at(ctx.cfg, idx);
    let g1 = Geodesic::new(&smp.posdef(n, 1.0), &smp.posdef(n, 1.0))?;
    let g2 = Geodesic::new(&smp.posdef(n, 1.0), &smp.posdef(n, 1.0))?;
    let grid = uniform_grid(11);
    let mut worst = f64::INFINITY;
    for m in MetricKind::ALL {
        let vals = grid.iter().map(|&t| dist(&g1.eval(t), &g2.eval(t), m)).collect::<Result<Vec<_>>>()?;
        for w in vals.windows(3) {
            worst = worst.min(w[0] + w[2] - 2.0 * w[1]);
        }
    }
    Ok((worst + 1e-8).into())
}

// ------------------------------------------------------------------ groups

/// `log Sim(H)` against `dist(id, P^H)`, the latter computed from an orbit
/// point `hh*` (same distance by invariance, different optimization problem).
fn distdiam_sim(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let sim = similarity_number(&h)?;
    let g = &h.elements()[smp.index(h.order())];
    let start = PosDefMatrix::from_matrix(g * g.adjoint())?;
    let d = dist_to_fixed_cone(&start, &fixed_cone(h.generators())?, MetricKind::OperatorNorm)?;
    let margin = ctx.tol.sim - (sim.sim_value.ln() - d.value).abs();
    Ok(Outcome { margin, point: Some((group_size_norm(&h).ln(), sim.sim_value.ln())) })
}

fn distdiam_size(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let id = PosDefMatrix::identity(h.dim());
    let diam = orbit_diameter(&h, &id, MetricKind::OperatorNorm)?;
    Ok((1e-8 - (diam - 2.0 * group_size_norm(&h).ln()).abs()).into())
}

/// `s U s⁻¹` with `U` irreducible and `s = diag(2, 1/2)`: `Sim = 4`.
fn squeeze_sim(_ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let families = [GroupFamily::Dihedral(3), GroupFamily::Dihedral(4), GroupFamily::Dihedral(6), GroupFamily::Quaternion];
    let family = families[smp.index(families.len())];
    let u = smp.unitary(2);
    let gens: Vec<CMatrix> = family.standard_generators().iter().map(|g| u.matrix() * g * u.adjoint()).collect();
    let s = diag_matrix(&[2.0, 0.5]);
    let s_inv = diag_matrix(&[0.5, 2.0]);
    let conj: Vec<CMatrix> = gens.iter().map(|g| &s * g * &s_inv).collect();
    let sim = similarity_number(&MatrixGroup::close(&conj, DEFAULT_CLOSURE_CAP, &Tolerances::default())?)?;
    Ok((1e-4 - (sim.sim_value / 4.0 - 1.0).abs()).into())
}

/// `s^{-1}Hs` is unitary for `s² ∈ P^H`, and for unitary `H` the exponential
/// of a Hermitian commutant element is fixed.
fn fixed_point_unitarizer(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let a = similarity_number(&h)?.minimizer;
    let s = a.sqrt();
    let s_inv = a.inv_sqrt();
    let unit = h
        .generators()
        .iter()
        .map(|g| crate::matcore::unitarity_residual(&(s_inv.matrix() * g * s.matrix())))
        .fold(0.0, f64::max);
    let u = unitary_group(ctx, smp)?;
    let cone = fixed_cone(u.generators())?;
    let coeffs: Vec<f64> = (0..cone.real_dim()).map(|_| smp.normal()).collect();
    let x = cone.combine(&coeffs);
    let r = fixed_residual(&u, x.exp().matrix());
    Ok((ctx.tol.unitarize - unit).min(1e-9 - r).into())
}

/// `D_{f⁻¹Hf}(b) = D_H(fbf*)` and `dist(b, P^{f⁻¹Hf}) = dist(fbf*, P^H)`.
fn translation(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let n = h.dim();
    let f = smp.invertible(n, 0.4);
    let f_inv = InvertibleMatrix::new(f.inverse().clone())?;
    let moved = h.conjugated(&f_inv)?;
    let b = smp.posdef(n, 0.8);
    let fb = act(f.matrix(), &b)?;
    let op = MetricKind::OperatorNorm;
    let r_diam = (orbit_diameter(&moved, &b, op)? - orbit_diameter(&h, &fb, op)?).abs();
    let d1 = dist_to_fixed_cone(&b, &fixed_cone(moved.generators())?, op)?.value;
    let d2 = dist_to_fixed_cone(&fb, &fixed_cone(h.generators())?, op)?.value;
    Ok((1e-8 - r_diam).min(ctx.tol.sim - (d1 - d2).abs()).into())
}

fn random_fixed_point(cone: &FixedCone, base: &PosDefMatrix, smp: &mut Sampler) -> Result<PosDefMatrix> {
    // a small fixed perturbation of a fixed point stays positive
    let coeffs: Vec<f64> = (0..cone.real_dim()).map(|_| smp.normal()).collect();
    let x = cone.combine(&coeffs);
    let scale = 0.5 * base.lambda_min() / x.op_norm().max(1e-300);
    PosDefMatrix::from_matrix(base.matrix() + x.matrix() * c64(scale, 0.0))
}

/// Geodesics between fixed points stay in the fixed span.
fn totally_geodesic(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let cone = fixed_cone(h.generators())?;
    let base = similarity_number_of_cone(&cone)?.minimizer;
    let a = random_fixed_point(&cone, &base, smp)?;
    let b = random_fixed_point(&cone, &base, smp)?;
    let gamma = Geodesic::new(&a, &b)?;
    let worst = uniform_grid(6)
        .iter()
        .map(|&t| {
            let p = gamma.eval(t);
            cone.distance_to_span(p.hermitian()) / p.hermitian().frobenius_norm()
        })
        .fold(0.0, f64::max);
    Ok((1e-8 - worst).into())
}

/// The distance to the fixed cone is attained at a fixed point and is no
/// larger than the distance to other fixed points.
fn minimizer_attained(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let cone = fixed_cone(h.generators())?;
    let b = smp.posdef(h.dim(), 0.8);
    let op = MetricKind::OperatorNorm;
    let d = dist_to_fixed_cone(&b, &cone, op)?;
    let attained = (dist(&b, &d.witness, op)? - d.value).abs();
    let fixed = fixed_residual(&h, d.witness.matrix());
    let base = similarity_number_of_cone(&cone)?.minimizer;
    let mut beaten = 0.0f64;
    for _ in 0..5 {
        let other = random_fixed_point(&cone, &base, smp)?;
        beaten = beaten.max(d.value - dist(&b, &other, op)?);
    }
    Ok((1e-9 - attained).min(ctx.tol.fix - fixed).min(ctx.tol.sim - beaten).into())
}

/// The reported minimizer has symmetric spectrum at distance `log Sim`.
fn symmetric_spectrum(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let r = similarity_number(&h)?;
    let a = &r.minimizer;
    let sym = (a.lambda_max().ln() + a.lambda_min().ln()).abs();
    let d = (dist_from_identity(a, MetricKind::OperatorNorm) - r.sim_value.ln()).abs();
    let fixed = fixed_residual(&h, a.matrix());
    Ok((1e-12 - sym).min(1e-12 - d).min(ctx.tol.fix - fixed).into())
}

// --------------------------------------------------------------- unitarize

/// Averaging unitarizer: unitarizes, and `(Σ hh*/|H|)^{1/2}` lies in
/// `[|H|⁻¹, |H|]`.
fn average(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let u = average_unitarizer(&h)?;
    let n = h.dim();
    let mut sum = CMatrix::zeros(n, n);
    for g in h.elements() {
        sum += g * g.adjoint();
    }
    let s = PosDefMatrix::from_matrix(sum / c64(h.order() as f64, 0.0))?.sqrt();
    let size = group_size_norm(&h);
    let interval = (s.lambda_max() - size).max(1.0 / size - s.lambda_min()) / size;
    Ok((ctx.tol.unitarize - u.residual).min(1e-12 - interval).into())
}

fn circumcenter_unitarizes(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let u = circumcenter_unitarizer(&h)?;
    Ok((ctx.tol.unitarize - u.residual).into())
}

fn orbit_circumcenter_fixed(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let a = smp.posdef(h.dim(), 1.0);
    let c = circumcenter_with(&orbit(&h, &a)?, 500)?;
    let mut worst = 0.0f64;
    for g in h.generators() {
        worst = worst.max(dist(&c.center.congruence(g), &c.center, MetricKind::Frobenius)?);
    }
    Ok((1e-5 - worst).into())
}

/// For unitary `H` and `a = e^Y e^X e^Y` with `Y` in the commutant and `X`
/// orthogonal to it, the circumcenter of the orbit of `a` is `e^{2Y}`.
fn leaf_circumcenter(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = unitary_group(ctx, smp)?;
    let n = h.dim();
    let cone = fixed_cone(h.generators())?;
    let y = cone.project(&smp.hermitian(n, 0.8));
    let raw = smp.hermitian(n, 0.8);
    let x = &raw - &cone.project(&raw);
    let point = x.exp().congruence(y.exp().matrix());
    let c = circumcenter_with(&orbit(&h, &point)?, 500)?;
    let err = dist(&c.center, &y.scale(2.0).exp(), MetricKind::Frobenius)?;
    Ok((1e-5 - err).into())
}

fn hs_unitarizable(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let b = hs_bound(&h)?;
    Ok((b.rhs - b.lhs + 1e-12).into())
}

/// Block-diagonal groups: `Sim` inside the block algebra equals the largest
/// block similarity number and the similarity number in the full algebra.
fn diagonal_similarity(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let spec = GroupSpec::standard(GroupFamily::Dihedral(3 + smp.index(3)));
    let r1 = gen_bounded_rep(&spec, smp.uniform(1.5, 5.0), smp.next_u64())?;
    let r2 = gen_bounded_rep(&spec, smp.uniform(1.5, 5.0), smp.next_u64())?;
    let sum = r1.direct_sum(&r2)?;
    let gens = sum.generator_images();
    let s1 = similarity_number_of_cone(&fixed_cone(&r1.generator_images())?)?.sim_value;
    let s2 = similarity_number_of_cone(&fixed_cone(&r2.generator_images())?)?.sim_value;
    let block = similarity_number_of_cone(&fixed_cone_in(&gens, &BlockAlgebra::blocks(&[2, 2]), &ctx.tol)?)?.sim_value;
    let full = similarity_number_of_cone(&fixed_cone(&gens)?)?.sim_value;
    let want = s1.max(s2);
    let r = ((block - want).abs()).max((full - want).abs()) / want;
    Ok((ctx.tol.sim - r).into())
}

// ------------------------------------------------------------- interpolate

fn interpolation_bounds(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let n = h.dim();
    let (r2, s2) = (smp.posdef(n, 0.6), smp.posdef(n, 0.6));
    let rep = verify_interpolation_with(&h, &r2, &s2, &uniform_grid(11), &ctx.tol)?;
    if !rep.orders_ok() {
        return Ok((-1.0).into());
    }
    let worst = rep.margins.iter().map(|m| m.size.min(m.sim)).fold(f64::INFINITY, f64::min);
    Ok((worst + 1e-6).into())
}

/// `r² = id` and `s²` the minimizer from the similarity number: the
/// similarity numbers follow `Sim(H)^{1-t}` and sizes stay below `|H|^{1-t}`.
fn interpolation_equality(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let s2 = similarity_number(&h)?.minimizer;
    let rep = verify_interpolation_with(&h, &PosDefMatrix::identity(h.dim()), &s2, &uniform_grid(11), &ctx.tol)?;
    if !rep.minimizing || !rep.orders_ok() {
        return Ok((-1.0).into());
    }
    let eq = rep.margins.iter().filter_map(|m| m.equality).map(f64::abs).fold(0.0, f64::max);
    let cor = rep.margins.iter().filter_map(|m| m.corollary).fold(f64::INFINITY, f64::min);
    Ok((1e-4 - eq).min(cor + 1e-8).into())
}

/// `D_H` along a random geodesic: convex and 2-Lipschitz.
fn diameter_convexity(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let n = h.dim();
    let gamma = Geodesic::new(&smp.posdef(n, 1.0), &smp.posdef(n, 1.0))?;
    let grid = uniform_grid(11);
    let mut worst = f64::INFINITY;
    for m in MetricKind::ALL {
        let prof = diameter_profile(&h, &gamma, &grid, m)?;
        for w in prof.windows(3) {
            worst = worst.min(w[0] + w[2] - 2.0 * w[1] + 1e-8);
        }
        for i in 1..grid.len() {
            let step = dist(&gamma.eval(grid[i - 1]), &gamma.eval(grid[i]), m)?;
            worst = worst.min(2.0 * step - (prof[i] - prof[i - 1]).abs() + 1e-8);
        }
    }
    Ok(worst.into())
}

/// `t ↦ dist(γ(t), P^H)` is convex along geodesics.
fn distance_convexity(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let n = h.dim();
    let cone = fixed_cone(h.generators())?;
    let gamma = Geodesic::new(&smp.posdef(n, 1.0), &smp.posdef(n, 1.0))?;
    let vals = uniform_grid(5)
        .iter()
        .map(|&t| dist_to_fixed_cone(&gamma.eval(t), &cone, MetricKind::OperatorNorm).map(|d| d.value))
        .collect::<Result<Vec<_>>>()?;
    let worst = vals.windows(3).map(|w| w[0] + w[2] - 2.0 * w[1]).fold(f64::INFINITY, f64::min);
    Ok((worst + ctx.tol.sim).into())
}

fn extension_chain(_ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    // Σ = rotations, normal of index 2 in the dihedral group
    let n = 3 + smp.index(4);
    let gens = GroupFamily::Dihedral(n).standard_generators();
    let c = smp.invertible(2, 0.6);
    let rep = extension_experiment(&gens[..1], &gens, Some(&c))?;
    let worst = rep.chain.iter().map(|t| t.slack).fold(f64::INFINITY, f64::min);
    Ok((worst + crate::interpolate::CHAIN_SLACK).into())
}

/// `dist(a, P^H) ≤ D_H(a)` for finite (hence amenable) groups.
fn amenable_bound(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let a = smp.posdef(h.dim(), 1.0);
    let op = MetricKind::OperatorNorm;
    let d = dist_to_fixed_cone(&a, &fixed_cone(h.generators())?, op)?.value;
    Ok((orbit_diameter(&h, &a, op)? - d + 1e-8).into())
}

/// The envelope `Sim ≤ K|H|^α` with `(K, α) = (1, 2)`, recorded for the
/// scatter export.
fn constants_envelope(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = random_group(ctx, smp)?;
    let log_sim = similarity_number(&h)?.sim_value.ln();
    let log_size = group_size_norm(&h).ln();
    // the reverse direction |H| ≤ Sim is logged through the same margin
    let margin = (2.0 * log_size - log_sim + 1e-8).min(log_sim - log_size + 1e-8);
    Ok(Outcome { margin, point: Some((log_size, log_sim)) })
}

// ------------------------------------------------------------------- split

fn random_pinching(smp: &mut Sampler, n: usize) -> Result<CondExpectation> {
    let u = smp.unitary(n);
    let rank = 1 + smp.index(n - 1);
    let d: Vec<f64> = (0..n).map(|i| if i < rank { 1.0 } else { 0.0 }).collect();
    pinching_expectation(&(u.matrix() * diag_matrix(&d) * u.adjoint()))
}

fn split_dim(ctx: &Ctx, idx: usize) -> usize {
    dim_at(ctx.cfg, idx).clamp(2, 8)
}

fn positive_split_residual(a: &PosDefMatrix, e: &CondExpectation) -> Result<f64> {
    let s = pr_split_positive(a, e)?;
    let recon = (s.reconstruct() - a.matrix()).norm() / a.matrix().norm().max(1.0);
    let kernel = e.apply_hermitian(&s.x).frobenius_norm();
    let range = e.project_kernel(&s.y).frobenius_norm();
    Ok(recon.max(kernel).max(range))
}

fn split_pinching(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = split_dim(ctx, idx);
    let e = random_pinching(smp, n)?;
    let scale = smp.uniform(0.3, 2.0);
    let a = smp.posdef(n, scale);
    Ok((ctx.tol.split - positive_split_residual(&a, &e)?).into())
}

fn split_average(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = unitary_group(ctx, smp)?;
    let e = group_average_expectation(&h)?;
    let scale = smp.uniform(0.3, 2.0);
    let a = smp.posdef(h.dim(), scale);
    Ok((ctx.tol.split - positive_split_residual(&a, &e)?).into())
}

/// `g = u e^Z e^Y` for both expectation kinds.
fn split_invertible(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let e = if idx.is_multiple_of(2) {
        random_pinching(smp, split_dim(ctx, idx))?
    } else {
        group_average_expectation(&unitary_group(ctx, smp)?)?
    };
    let n = e.dim();
    let g = smp.invertible(n, 0.8);
    let t = pr_split_invertible(&g, &e)?;
    let unit = crate::matcore::unitarity_residual(t.u.matrix());
    let recon = (t.reconstruct() - g.matrix()).norm() / g.matrix().norm();
    let kernel = e.apply_hermitian(&t.z).frobenius_norm();
    let range = e.project_kernel(&t.y).frobenius_norm();
    Ok((ctx.tol.split - unit.max(recon).max(kernel).max(range)).into())
}

/// `d(e^{2Y}, e^Y e^X e^Y) = ‖X‖` and no point `e^W` of the range is closer.
fn minexp(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let n = split_dim(ctx, idx);
    let e = random_pinching(smp, n)?;
    let y = e.project_range(&smp.hermitian(n, 1.0));
    let x = e.project_kernel(&smp.hermitian(n, 1.0));
    let ident = (leaf_distance(&x, &y) - x.op_norm()).abs();
    let point = x.exp().congruence(y.exp().matrix());
    let mut beaten = f64::NEG_INFINITY;
    for _ in 0..10 {
        let w = e.project_range(&smp.hermitian(n, 1.5));
        beaten = beaten.max(x.op_norm() - dist(&w.exp(), &point, MetricKind::OperatorNorm)?);
    }
    Ok((1e-8 - ident).min(1e-8 - beaten).into())
}

/// Frobenius closest fixed point to `e^Y e^X e^Y` is `e^{2Y}`.
fn minprop(ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let h = unitary_group(ctx, smp)?;
    let n = h.dim();
    let e = group_average_expectation(&h)?;
    let cone = FixedCone::from_span(n, BlockAlgebra::full(n), h.generators().to_vec(), e.range_basis());
    let y = e.project_range(&smp.hermitian(n, 1.0));
    let x = e.project_kernel(&smp.hermitian(n, 1.0));
    let point = x.exp().congruence(y.exp().matrix());
    let d = dist_to_fixed_cone(&point, &cone, MetricKind::Frobenius)?;
    let err = dist(&d.witness, &y.scale(2.0).exp(), MetricKind::Frobenius)?;
    Ok((1e-5 - err).min(1e-8 - (d.value - x.frobenius_norm()).abs()).into())
}

fn expectation_axioms(ctx: &Ctx, smp: &mut Sampler, idx: usize) -> Result<Outcome> {
    let e = if idx.is_multiple_of(2) {
        random_pinching(smp, split_dim(ctx, idx))?
    } else {
        group_average_expectation(&unitary_group(ctx, smp)?)?
    };
    let n = e.dim();
    let x = smp.gaussian(n);
    let b1 = e.apply(&smp.gaussian(n));
    let b2 = e.apply(&smp.gaussian(n));
    let scale = x.norm() * b1.norm() * b2.norm();
    let (cross, deficit) = e.decomposition_residual();
    let worst = (e.idempotence_residual(&x) / x.norm())
        .max(e.unit_residual())
        .max(e.bimodule_residual(&b1, &x, &b2) / scale)
        .max(e.adjoint_residual(&x) / x.norm())
        .max(e.trace_residual(&x) / x.norm())
        .max(cross);
    Ok(if deficit > 0 { (-1.0).into() } else { (1e-9 - worst).into() })
}

/// Block algebra `M₂ ⊕ M₃`, rank-one projections `p`, the pinching by
/// `{p, 1 − p}`, `π₀` through `q = 2p − 1` and a block-diagonal `g`:
/// `‖e^{X₀}‖‖e^{−X₀}‖ = ‖π₁‖_cb` and `‖(I − E)|_{A_s}‖ = 1`.
fn thmacs(_ctx: &Ctx, smp: &mut Sampler, _idx: usize) -> Result<Outcome> {
    let proj = |smp: &mut Sampler, n: usize| {
        let u = smp.unitary(n);
        let mut d = vec![0.0; n];
        d[0] = 1.0;
        u.matrix() * diag_matrix(&d) * u.adjoint()
    };
    let p = direct_sum(&[&proj(smp, 2), &proj(smp, 3)]);
    let alg = BlockAlgebra::blocks(&[2, 3]);
    let e = CondExpectation::pinching(vec![p.clone(), identity(5) - &p], alg, &Tolerances::default())?;
    let q = p * c64(2.0, 0.0) - identity(5);
    let pi0 = crate::matgroups::Representation::from_group(&MatrixGroup::close(&[q], 10, &Tolerances::default())?)?;
    let scale = smp.uniform(0.3, 1.0);
    let g = direct_sum(&[&smp.invertible(2, scale).into_matrix(), &smp.invertible(3, scale).into_matrix()]);
    let r = thmacs_check(&InvertibleMatrix::new(g)?, &pi0, &e)?;
    let norm_one = (r.complement_norm.analytic.unwrap_or(f64::NAN) - 1.0).abs()
        .max((r.complement_norm.best_sample - 1.0).max(0.0));
    Ok((1e-3 - (r.ratio - 1.0).abs()).min(1e-9 - norm_one).into())
}

pub(crate) fn checks() -> Vec<Check> {
    use Suite::*;
    vec![
        Check { id: "geometry.geodesic_endpoints", anchor: "γ_{a,b}(t)=a^{1/2}(a^{-1/2}ba^{-1/2})^t a^{1/2}", suite: Geometry, count: per_dim, run: geodesic_endpoints },
        Check { id: "geometry.geodesic_proportional", anchor: "geodesics realize the distance d(a,b)=‖log(a^{-1/2}ba^{-1/2})‖", suite: Geometry, count: per_dim, run: geodesic_proportional },
        Check { id: "geometry.action_isometry", anchor: "the action g·a=gag* is isometric", suite: Geometry, count: per_dim, run: action_isometry },
        Check { id: "geometry.action_law", anchor: "for a subgroup H<G we define the action", suite: Geometry, count: per_dim, run: action_law },
        Check { id: "geometry.exp_log", anchor: "exponential map with inverse log:P→A_s", suite: Geometry, count: per_dim, run: exp_log_roundtrip },
        Check { id: "geometry.banach_mazur", anchor: "d(a,b)=δ(‖·‖_a,‖·‖_b)", suite: Geometry, count: all, run: banach_mazur },
        Check { id: "geometry.segal", anchor: "‖e^{X+Y}‖≤‖e^{X/2}e^Ye^{X/2}‖", suite: Geometry, count: all, run: segal },
        Check { id: "geometry.exp_metric_increasing", anchor: "exponential metric increasing property", suite: Geometry, count: all, run: exponential_metric_increasing },
        Check { id: "geometry.joint_convexity", anchor: "convexity of the distance along geodesics", suite: Geometry, count: fifth, run: joint_convexity },
        Check { id: "groups.distdiam_sim", anchor: "dist(id,P^H)=log(Sim(H))", suite: Groups, count: twentieth, run: distdiam_sim },
        Check { id: "groups.distdiam_size", anchor: "diam(O_H(id))=2log(|H|)", suite: Groups, count: twentieth, run: distdiam_size },
        Check { id: "groups.squeeze_sim", anchor: "Sim(H)=inf{‖s‖‖s^{-1}‖}", suite: Groups, count: fiftieth, run: squeeze_sim },
        Check { id: "groups.fixed_point_unitarizer", anchor: "s^{-1}Hs unitary iff s^2 is a fixed point; P∩H'=exp(H'∩A_s)", suite: Groups, count: twentieth, run: fixed_point_unitarizer },
        Check { id: "groups.translation", anchor: "translation of orbits and fixed point sets", suite: Groups, count: fiftieth, run: translation },
        Check { id: "groups.totally_geodesic", anchor: "fixed point sets are totally geodesic", suite: Groups, count: fiftieth, run: totally_geodesic },
        Check { id: "groups.minimizer_attained", anchor: "there is a∈P^H such that dist(b,P^H)=d(b,a)", suite: Groups, count: fiftieth, run: minimizer_attained },
        Check { id: "groups.symmetric_spectrum", anchor: "log(max σ(a))=-log(min σ(a))", suite: Groups, count: fiftieth, run: symmetric_spectrum },
        Check { id: "unitarize.average", anchor: "finite von Neumann algebra: unitarizer in [|H|^{-1},|H|]", suite: Unitarize, count: twentieth, run: average },
        Check { id: "unitarize.circumcenter", anchor: "the circumcenter of the orbit is a fixed point", suite: Unitarize, count: twentieth, run: circumcenter_unitarizes },
        Check { id: "unitarize.orbit_circumcenter_fixed", anchor: "circumcenter fixed by isometries preserving the set", suite: Unitarize, count: fiftieth, run: orbit_circumcenter_fixed },
        Check { id: "unitarize.leaf_circumcenter", anchor: "(X,Y)↦e^Ye^Xe^Y is a diffeomorphism; circumcenter e^{2Y}", suite: Unitarize, count: fiftieth, run: leaf_circumcenter },
        Check { id: "unitarize.hs_bound", anchor: "sup_h‖hh*-id‖_2=C<∞ then H is unitarizable", suite: Unitarize, count: twentieth, run: hs_unitarizable },
        Check { id: "unitarize.diagonal_similarity", anchor: "Sim_A(H)=sup_n Sim(H_n)=Sim_{B(h)}(H)", suite: Unitarize, count: fiftieth, run: diagonal_similarity },
        Check { id: "interpolate.bounds", anchor: "|H_t|≤|r^{-1}Hr|^{1-t}|s^{-1}Hs|^t and Sim(H_t)≤Sim(r^{-1}Hr)^{1-t}Sim(s^{-1}Hs)^t", suite: Interpolate, count: twentieth, run: interpolation_bounds },
        Check { id: "interpolate.equality", anchor: "Sim(H_t)=Sim(H)^{1-t} and |H_t|≤|H|^{1-t}", suite: Interpolate, count: twentieth, run: interpolation_equality },
        Check { id: "interpolate.diameter_convexity", anchor: "orbit diameter function D_H is convex and 2-Lipschitz", suite: Interpolate, count: twentieth, run: diameter_convexity },
        Check { id: "interpolate.distance_convexity", anchor: "dist(·,P^H) is convex along geodesics", suite: Interpolate, count: fiftieth, run: distance_convexity },
        Check { id: "interpolate.extension_chain", anchor: "unitarizable with constants (K^3,3α+2)", suite: Interpolate, count: fiftieth, run: extension_chain },
        Check { id: "interpolate.amenable_bound", anchor: "dist(a,P^{π(Γ)})≤D_{π(Γ)}(a)", suite: Interpolate, count: fifth, run: amenable_bound },
        Check { id: "interpolate.constants_envelope", anchor: "Sim(π(Γ))≤K|π(Γ)|^α", suite: Interpolate, count: tenth, run: constants_envelope },
        Check { id: "split.positive_pinching", anchor: "Porta–Recht splitting a=e^Ye^Xe^Y (pinching)", suite: Split, count: fifth, run: split_pinching },
        Check { id: "split.positive_average", anchor: "conditional expectation onto H'∩A compatible with the trace", suite: Split, count: fifth, run: split_average },
        Check { id: "split.invertible", anchor: "g=ue^{Z_0}e^{Y_0}", suite: Split, count: tenth, run: split_invertible },
        Check { id: "split.minexp", anchor: "leaf distance d(e^{2Y},e^Ye^Xe^Y)=‖X‖ is minimal", suite: Split, count: tenth, run: minexp },
        Check { id: "split.minprop", anchor: "closest fixed point in the Hilbert–Schmidt metric is e^{2Y}", suite: Split, count: fiftieth, run: minprop },
        Check { id: "split.expectation_axioms", anchor: "is called a conditional expectation", suite: Split, count: twentieth, run: expectation_axioms },
        Check { id: "split.thmacs", anchor: "‖e^{X_0}‖‖e^{-X_0}‖=‖π_1‖_cb; ‖(I-E)|_{A_s}‖=1; q=2p-id", suite: Split, count: fiftieth, run: thmacs },
    ]
}
