//! One-parameter families `H_t = γ_t^{-1/2} H γ_t^{1/2}` along geodesics of
//! the cone, the size and similarity interpolation bounds, and the distance
//! chain behind the extension bound `(K³, 3α + 2)`.

use rayon::prelude::*;
use serde::Serialize;

use crate::conegeo::{dist, dist_from_identity, Geodesic, MetricKind};
use crate::error::{ConeError, Result};
use crate::matcore::{identity, CMatrix, InvertibleMatrix, MatrixJson, PosDefMatrix};
use crate::matgroups::{group_size_norm, orbit_diameter, MatrixGroup, DEFAULT_CLOSURE_CAP};
use crate::tolerance::Tolerances;
use crate::unitarize::similarity_number;

/// Absolute slack for inequalities between enumerated group sizes.
pub const SIZE_SLACK: f64 = 1e-8;
/// Absolute slack for each term of the extension chain.
pub const CHAIN_SLACK: f64 = 1e-6;

/// `t ∈ {0, 1/(n-1), …, 1}`.
pub fn uniform_grid(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

pub fn default_grid() -> Vec<f64> {
    uniform_grid(11)
}

#[derive(Clone, Debug)]
pub struct FamilyPoint {
    pub t: f64,
    pub gamma_t: PosDefMatrix,
    pub group_t: MatrixGroup,
    pub size_t: f64,
    pub sim_t: f64,
    /// Re-closed order agrees with the order of `H`.
    pub order_ok: bool,
}

#[derive(Serialize)]
pub struct FamilyPointJson {
    pub t: f64,
    pub size: f64,
    pub sim: f64,
    pub order: usize,
    pub order_ok: bool,
    pub gamma: MatrixJson,
}

impl FamilyPoint {
    pub fn to_json(&self) -> FamilyPointJson {
        FamilyPointJson {
            t: self.t,
            size: self.size_t,
            sim: self.sim_t,
            order: self.group_t.order(),
            order_ok: self.order_ok,
            gamma: MatrixJson::from(self.gamma_t.matrix()),
        }
    }
}

/// `γ^{-1/2} H γ^{1/2}`, re-closed from the conjugated generators.
pub fn conjugate_by_inverse_root(h: &MatrixGroup, gamma: &PosDefMatrix) -> Result<MatrixGroup> {
    let s = InvertibleMatrix::new(gamma.inv_sqrt().into_matrix())?;
    h.conjugated(&s)
}

fn family_point(h: &MatrixGroup, gamma: &Geodesic, t: f64) -> Result<FamilyPoint> {
    let gamma_t = gamma.eval(t);
    let group_t = conjugate_by_inverse_root(h, &gamma_t)?;
    let size_t = group_size_norm(&group_t);
    let sim_t = similarity_number(&group_t)?.sim_value;
    let order_ok = group_t.order() == h.order();
    Ok(FamilyPoint { t, gamma_t, group_t, size_t, sim_t, order_ok })
}

pub fn conjugate_family(h: &MatrixGroup, r2: &PosDefMatrix, s2: &PosDefMatrix, grid: &[f64]) -> Result<Vec<FamilyPoint>> {
    let gamma = Geodesic::new(r2, s2)?;
    crate::error::check_dim(h.dim(), r2.dim())?;
    grid.par_iter().map(|&t| family_point(h, &gamma, t)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct InterpolationMargins {
    pub t: f64,
    /// `|H₀|^{1-t}|H₁|^t − |H_t|`.
    pub size: f64,
    /// `Sim(H₀)^{1-t}Sim(H₁)^t − Sim(H_t)`.
    pub sim: f64,
    /// `Sim(H_t)/Sim(H)^{1-t} − 1`, on the minimizing geodesic only.
    pub equality: Option<f64>,
    /// `|H|^{1-t} − |H_t|`, when the family starts at `id` and ends in `P^H`.
    pub corollary: Option<f64>,
}

#[derive(Clone, Debug)]
pub struct InterpolationReport {
    pub points: Vec<FamilyPoint>,
    pub margins: Vec<InterpolationMargins>,
    pub size_start: f64,
    pub size_end: f64,
    pub sim_start: f64,
    pub sim_end: f64,
    pub sim_h: f64,
    /// `r2 = id` and `s2` is a distance-minimizing fixed point of `H`.
    pub minimizing: bool,
    pub sim_rel_tol: f64,
}

#[derive(Serialize)]
pub struct InterpolationJson {
    pub points: Vec<FamilyPointJson>,
    pub margins: Vec<InterpolationMargins>,
    pub sim_h: f64,
    pub minimizing: bool,
    pub holds: bool,
}

impl InterpolationReport {
    pub fn size_holds(&self) -> bool {
        self.margins.iter().all(|m| m.size >= -SIZE_SLACK)
    }

    pub fn sim_holds(&self) -> bool {
        self.margins.iter().zip(&self.points).all(|(m, p)| m.sim >= -self.sim_rel_tol * p.sim_t)
    }

    pub fn equality_holds(&self) -> bool {
        self.margins.iter().all(|m| m.equality.is_none_or(|e| e.abs() <= 3.0 * self.sim_rel_tol))
    }

    pub fn corollary_holds(&self) -> bool {
        self.margins.iter().all(|m| m.corollary.is_none_or(|c| c >= -SIZE_SLACK))
    }

    pub fn orders_ok(&self) -> bool {
        self.points.iter().all(|p| p.order_ok)
    }

    pub fn holds(&self) -> bool {
        self.size_holds() && self.sim_holds() && self.equality_holds() && self.corollary_holds() && self.orders_ok()
    }

    pub fn to_json(&self) -> InterpolationJson {
        InterpolationJson {
            points: self.points.iter().map(FamilyPoint::to_json).collect(),
            margins: self.margins.clone(),
            sim_h: self.sim_h,
            minimizing: self.minimizing,
            holds: self.holds(),
        }
    }
}

/// Is `s2` a fixed point of `H` at distance `log Sim(H)` from the identity?
fn is_minimizing_endpoint(h: &MatrixGroup, r2: &PosDefMatrix, s2: &PosDefMatrix, sim_h: f64, tol: &Tolerances) -> bool {
    let n = h.dim();
    let r_is_id = (r2.matrix() - identity(n)).norm() <= tol.recon * (n as f64).sqrt();
    let fixed = h
        .generators()
        .iter()
        .all(|g| (g * s2.matrix() * g.adjoint() - s2.matrix()).norm() <= tol.fix.max(1e-7) * s2.matrix().norm());
    let d = dist_from_identity(s2, MetricKind::OperatorNorm);
    r_is_id && fixed && (d - sim_h.ln()).abs() <= 3.0 * tol.sim * d.max(1.0)
}

pub fn verify_interpolation(h: &MatrixGroup, r2: &PosDefMatrix, s2: &PosDefMatrix, grid: &[f64]) -> Result<InterpolationReport> {
    verify_interpolation_with(h, r2, s2, grid, &Tolerances::default())
}

pub fn verify_interpolation_with(
    h: &MatrixGroup,
    r2: &PosDefMatrix,
    s2: &PosDefMatrix,
    grid: &[f64],
    tol: &Tolerances,
) -> Result<InterpolationReport> {
    let gamma = Geodesic::new(r2, s2)?;
    let start = family_point(h, &gamma, 0.0)?;
    let end = family_point(h, &gamma, 1.0)?;
    let points = conjugate_family(h, r2, s2, grid)?;
    let sim_h = similarity_number(h)?.sim_value;
    let size_h = group_size_norm(h);
    let minimizing = is_minimizing_endpoint(h, r2, s2, sim_h, tol);
    let margins = points
        .iter()
        .map(|p| {
            let t = p.t;
            let size_bound = start.size_t.powf(1.0 - t) * end.size_t.powf(t);
            let sim_bound = start.sim_t.powf(1.0 - t) * end.sim_t.powf(t);
            InterpolationMargins {
                t,
                size: size_bound - p.size_t,
                sim: sim_bound - p.sim_t,
                equality: minimizing.then(|| p.sim_t / sim_h.powf(1.0 - t) - 1.0),
                corollary: minimizing.then(|| size_h.powf(1.0 - t) - p.size_t),
            }
        })
        .collect();
    Ok(InterpolationReport {
        points,
        margins,
        size_start: start.size_t,
        size_end: end.size_t,
        sim_start: start.sim_t,
        sim_end: end.sim_t,
        sim_h,
        minimizing,
        sim_rel_tol: tol.sim,
    })
}

/// `D_H(γ(t))` on a grid.
pub fn diameter_profile(h: &MatrixGroup, gamma: &Geodesic, grid: &[f64], m: MetricKind) -> Result<Vec<f64>> {
    grid.iter().map(|&t| orbit_diameter(h, &gamma.eval(t), m)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ChainTerm {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

impl ChainTerm {
    fn new(name: &'static str, lhs: f64, rhs: f64) -> Self {
        let slack = rhs - lhs;
        Self { name, lhs, rhs, slack, holds: slack >= -CHAIN_SLACK }
    }
}

/// Quantities of the extension argument for `π(Σ) ⊴ π(Γ)`. Every distance
/// is in the operator-norm metric.
#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub order_sigma: usize,
    pub order_gamma: usize,
    /// `dist(id, P^{π(Σ)})`, attained at `a`.
    pub dist_sigma: f64,
    pub a: PosDefMatrix,
    /// Fixed point of `π(Γ)`: the orbit average of `a`.
    pub b: PosDefMatrix,
    pub dist_gamma: f64,
    pub d_id_b: f64,
    pub d_a_b: f64,
    /// `D_{π(Γ)}(a)`.
    pub diam_gamma_a: f64,
    pub diam_gamma_id: f64,
    pub diam_sigma_id: f64,
    pub chain: Vec<ChainTerm>,
}

#[derive(Serialize)]
pub struct ExtensionJson {
    pub order_sigma: usize,
    pub order_gamma: usize,
    pub dist_sigma: f64,
    pub dist_gamma: f64,
    pub d_id_b: f64,
    pub d_a_b: f64,
    pub diam_gamma_a: f64,
    pub diam_gamma_id: f64,
    pub diam_sigma_id: f64,
    pub chain: Vec<ChainTerm>,
    pub holds: bool,
}

impl ExtensionReport {
    pub fn holds(&self) -> bool {
        self.chain.iter().all(|c| c.holds)
    }

    pub fn term(&self, name: &str) -> Option<&ChainTerm> {
        self.chain.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> ExtensionJson {
        ExtensionJson {
            order_sigma: self.order_sigma,
            order_gamma: self.order_gamma,
            dist_sigma: self.dist_sigma,
            dist_gamma: self.dist_gamma,
            d_id_b: self.d_id_b,
            d_a_b: self.d_a_b,
            diam_gamma_a: self.diam_gamma_a,
            diam_gamma_id: self.diam_gamma_id,
            diam_sigma_id: self.diam_sigma_id,
            chain: self.chain.clone(),
            holds: self.holds(),
        }
    }
}

/// Checks `Σ ⊆ Γ` and `γσγ⁻¹ ∈ Σ` for every pair of generators.
fn check_normal(sigma: &MatrixGroup, gamma: &MatrixGroup) -> Result<()> {
    for (i, s) in sigma.generators().iter().enumerate() {
        if gamma.find(s).is_none() {
            return Err(ConeError::BadSpec(format!("generator {i} of the subgroup is not in the group")));
        }
        for g in gamma.generators() {
            let g_inv = InvertibleMatrix::new(g.clone())?.inverse().clone();
            if sigma.find(&(g * s * g_inv)).is_none() {
                return Err(ConeError::NotNormal { generator: i });
            }
        }
    }
    Ok(())
}

/// Runs the extension chain on `π = Ad_c` restricted to `Σ ⊴ Γ`.
///
/// Σ is finite, so its constants are `(K, α) = (1, 2)` and the bound being
/// exercised reads `dist(id, P^{π(Γ)}) ≤ 4 D_{π(Γ)}(id)`.
pub fn extension_experiment(
    sigma_gens: &[CMatrix],
    gamma_gens: &[CMatrix],
    conjugator: Option<&InvertibleMatrix>,
) -> Result<ExtensionReport> {
    let tol = Tolerances::default();
    let sigma = MatrixGroup::close(sigma_gens, DEFAULT_CLOSURE_CAP, &tol)?;
    let gamma = MatrixGroup::close(gamma_gens, DEFAULT_CLOSURE_CAP, &tol)?;
    crate::error::check_dim(gamma.dim(), sigma.dim())?;
    check_normal(&sigma, &gamma)?;
    let (sigma, gamma) = match conjugator {
        Some(c) => (sigma.conjugated(c)?, gamma.conjugated(c)?),
        None => (sigma, gamma),
    };
    let n = gamma.dim();
    let id = PosDefMatrix::identity(n);
    let op = MetricKind::OperatorNorm;

    let sim_sigma = similarity_number(&sigma)?;
    let a = sim_sigma.minimizer.clone();
    let dist_sigma = dist_from_identity(&a, op);
    let dist_gamma = similarity_number(&gamma)?.sim_value.ln();

    // the orbit of a lies in the order interval [e^{-D} a, e^{D} a], which is
    // convex, so its average is a fixed point within D of a
    let mut sum = CMatrix::zeros(n, n);
    for g in gamma.elements() {
        sum += g * a.matrix() * g.adjoint();
    }
    let b = PosDefMatrix::from_matrix(sum / crate::matcore::c64(gamma.order() as f64, 0.0))?;
    let d_id_b = dist_from_identity(&b, op);
    let d_a_b = dist(&a, &b, op)?;
    let diam_gamma_a = orbit_diameter(&gamma, &a, op)?;
    let diam_gamma_id = orbit_diameter(&gamma, &id, op)?;
    let diam_sigma_id = orbit_diameter(&sigma, &id, op)?;

    let (log_k, alpha) = (0.0, 2.0);
    let chain = vec![
        ChainTerm::new("dist_gamma<=d(id,b)", dist_gamma, d_id_b),
        ChainTerm::new("d(id,b)<=d(id,a)+d(a,b)", d_id_b, dist_sigma + d_a_b),
        ChainTerm::new("d(a,b)<=D_gamma(a)", d_a_b, diam_gamma_a),
        ChainTerm::new("D_gamma(a)<=2d(id,a)+D_gamma(id)", diam_gamma_a, 2.0 * dist_sigma + diam_gamma_id),
        ChainTerm::new("dist_sigma<=logK+alpha/2*D_sigma(id)", dist_sigma, log_k + 0.5 * alpha * diam_sigma_id),
        ChainTerm::new("D_sigma(id)<=D_gamma(id)", diam_sigma_id, diam_gamma_id),
        ChainTerm::new(
            "dist_gamma<=3logK+(3alpha+2)/2*D_gamma(id)",
            dist_gamma,
            3.0 * log_k + 0.5 * (3.0 * alpha + 2.0) * diam_gamma_id,
        ),
    ];
    Ok(ExtensionReport {
        order_sigma: sigma.order(),
        order_gamma: gamma.order(),
        dist_sigma,
        a,
        b,
        dist_gamma,
        d_id_b,
        d_a_b,
        diam_gamma_a,
        diam_gamma_id,
        diam_sigma_id,
        chain,
    })
}

#[cfg(test)]
mod tests;
