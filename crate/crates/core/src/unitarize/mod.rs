//! Unitarizers of finite groups: averaging, CAT(0) circumcenters and the
//! similarity-number optimizer over the fixed cone.

mod barrier;
mod circumcenter;
mod sim;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::conegeo::MetricKind;
use crate::error::{ConeError, Result};
use crate::matcore::{c64, identity, CMatrix, PosDefMatrix};
use crate::matgroups::{group_size_norm, orbit, orbit_diameter, MatrixGroup};
use crate::tolerance::Tolerances;

pub use circumcenter::{circumcenter, circumcenter_farthest_point, circumcenter_with, Circumcenter};
pub use sim::{
    dist_to_fixed_cone, feasible_point, frobenius_projection_of_identity, similarity_number,
    similarity_number_of_cone, similarity_number_of_generators, similarity_number_subgradient, ConeDistance,
    SimJson, SimMethod, SimReport,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnitarizeMethod {
    Average,
    Circumcenter,
    SimOptimizer,
}

impl fmt::Display for UnitarizeMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Average => "avg",
            Self::Circumcenter => "cc",
            Self::SimOptimizer => "sim",
        })
    }
}

impl FromStr for UnitarizeMethod {
    type Err = ConeError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "avg" | "average" => Ok(Self::Average),
            "cc" | "circumcenter" => Ok(Self::Circumcenter),
            "sim" => Ok(Self::SimOptimizer),
            other => Err(ConeError::BadSpec(format!("unknown unitarize method `{other}` (avg|cc|sim)"))),
        }
    }
}

/// A positive `s` with `s⁻¹Hs` unitary.
#[derive(Clone, Debug)]
pub struct Unitarizer {
    pub s: PosDefMatrix,
    pub method: UnitarizeMethod,
    pub residual: f64,
}

impl Unitarizer {
    fn new(s: PosDefMatrix, method: UnitarizeMethod, generators: &[CMatrix]) -> Self {
        let s = symmetric_rescale(&s);
        let residual = unitarizer_residual(&s, generators);
        Self { s, method, residual }
    }
}

/// `max_h ‖(s⁻¹hs)(s⁻¹hs)* − id‖_F` over the given matrices.
pub fn unitarizer_residual(s: &PosDefMatrix, generators: &[CMatrix]) -> f64 {
    let inv = s.inverse();
    generators
        .iter()
        .map(|h| {
            let u = inv.matrix() * h * s.matrix();
            (&u * u.adjoint() - identity(s.dim())).norm()
        })
        .fold(0.0, f64::max)
}

/// `αs` with `α = (λ_max λ_min)^{-1/2}`, so that `‖αs‖ = ‖(αs)⁻¹‖`.
pub fn symmetric_rescale(s: &PosDefMatrix) -> PosDefMatrix {
    s.scale(1.0 / (s.lambda_max() * s.lambda_min()).sqrt())
}

/// `s = (|H|⁻¹ Σ_h hh*)^{1/2}`.
pub fn average_unitarizer(h: &MatrixGroup) -> Result<Unitarizer> {
    let n = h.dim();
    // products in parallel, summed in a fixed order so the result does not
    // depend on the thread count
    let terms: Vec<CMatrix> = h.elements().par_iter().map(|g| g * g.adjoint()).collect();
    let sum = terms.iter().fold(CMatrix::zeros(n, n), |a, b| a + b);
    let a = PosDefMatrix::from_matrix(sum / c64(h.order() as f64, 0.0))?;
    Ok(Unitarizer::new(a.sqrt(), UnitarizeMethod::Average, h.generators()))
}

/// Square root of the circumcenter of the orbit of `id`.
pub fn circumcenter_unitarizer(h: &MatrixGroup) -> Result<Unitarizer> {
    let pts = orbit(h, &PosDefMatrix::identity(h.dim()))?;
    let c = circumcenter_with(&pts, 500)?;
    Ok(Unitarizer::new(c.center.sqrt(), UnitarizeMethod::Circumcenter, h.generators()))
}

pub fn sim_unitarizer(h: &MatrixGroup) -> Result<Unitarizer> {
    let report = similarity_number(h)?;
    Ok(Unitarizer::new(report.minimizer.sqrt(), UnitarizeMethod::SimOptimizer, h.generators()))
}

pub fn unitarize(h: &MatrixGroup, method: UnitarizeMethod) -> Result<Unitarizer> {
    match method {
        UnitarizeMethod::Average => average_unitarizer(h),
        UnitarizeMethod::Circumcenter => circumcenter_unitarizer(h),
        UnitarizeMethod::SimOptimizer => sim_unitarizer(h),
    }
}

pub fn is_unitarized(u: &Unitarizer, tol: &Tolerances) -> bool {
    u.residual <= tol.unitarize
}

/// Both sides of the Hilbert–Schmidt orbit bound: with
/// `C = max_h ‖hh* − id‖_F` the spectra of `hh*` lie in `[1/(1+C), 1+C]`,
/// where `|log s| ≤ D|s − 1|` for `D = (1+C)log(1+C)/C`, hence
/// `sup_h ‖log hh*‖_F² ≤ D²C²`.
#[derive(Clone, Debug, Serialize)]
pub struct HsBound {
    pub c: f64,
    pub d: f64,
    /// `sup_h ‖log hh*‖_F²`, also the squared Frobenius diameter of the orbit of `id`.
    pub lhs: f64,
    pub rhs: f64,
}

pub fn hs_bound(h: &MatrixGroup) -> Result<HsBound> {
    let n = h.dim();
    let c = h
        .elements()
        .par_iter()
        .map(|g| (g * g.adjoint() - identity(n)).norm())
        .reduce(|| 0.0, f64::max);
    let d = if c > 1e-300 { (1.0 + c) * c.ln_1p() / c } else { 1.0 };
    let diam = orbit_diameter(h, &PosDefMatrix::identity(n), MetricKind::Frobenius)?;
    Ok(HsBound { c, d, lhs: diam * diam, rhs: d * d * c * c })
}

/// Envelope `log Sim ≤ log K + α log|H|` over a sweep.
#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    pub k: f64,
    pub alpha: f64,
    /// `(log|H|, log Sim(H))` per trial.
    pub pairs: Vec<(f64, f64)>,
    /// `max (log Sim − log K − α log|H|)`; non-positive when the envelope holds.
    pub worst_margin: f64,
    /// Smallest `α` that works with the given `K`.
    pub fitted_alpha: f64,
}

impl ConstantsReport {
    pub fn new(k: f64, alpha: f64, pairs: Vec<(f64, f64)>) -> Self {
        let worst_margin =
            pairs.iter().map(|(s, l)| l - k.ln() - alpha * s).fold(f64::NEG_INFINITY, f64::max);
        let fitted_alpha = pairs
            .iter()
            .filter(|(s, _)| *s > 1e-9)
            .map(|(s, l)| (l - k.ln()) / s)
            .fold(0.0, f64::max);
        Self { k, alpha, pairs, worst_margin, fitted_alpha }
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.pairs.is_empty() || self.worst_margin <= tol
    }
}

/// `(log|H|, log Sim(H))` for one group.
pub fn size_sim_pair(h: &MatrixGroup) -> Result<(f64, f64)> {
    Ok((group_size_norm(h).ln(), similarity_number(h)?.sim_value.ln()))
}
