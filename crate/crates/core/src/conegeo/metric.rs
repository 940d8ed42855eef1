use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, ConeError, Result};
use crate::matcore::{CMatrix, HermitianMatrix, PosDefMatrix};

/// Which norm measures `log(a^{-1/2} b a^{-1/2})`.
///
/// `OperatorNorm` gives the Finsler (Thompson-type) metric; `Frobenius`
/// gives the Riemannian trace metric, which is CAT(0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MetricKind {
    #[serde(rename = "op")]
    OperatorNorm,
    #[serde(rename = "frob")]
    Frobenius,
}

impl MetricKind {
    pub const ALL: [MetricKind; 2] = [MetricKind::OperatorNorm, MetricKind::Frobenius];

    /// Norm of a Hermitian matrix given its eigenvalues.
    pub fn norm_of_spectrum<'a>(self, values: impl IntoIterator<Item = &'a f64>) -> f64 {
        match self {
            MetricKind::OperatorNorm => values.into_iter().fold(0.0, |m, x| m.max(x.abs())),
            MetricKind::Frobenius => values.into_iter().map(|x| x * x).sum::<f64>().sqrt(),
        }
    }

    pub fn norm(self, x: &HermitianMatrix) -> f64 {
        match self {
            MetricKind::OperatorNorm => x.op_norm(),
            MetricKind::Frobenius => x.frobenius_norm(),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MetricKind::OperatorNorm => "op",
            MetricKind::Frobenius => "frob",
        })
    }
}

impl FromStr for MetricKind {
    type Err = ConeError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op" | "operator" => Ok(MetricKind::OperatorNorm),
            "frob" | "frobenius" | "hs" => Ok(MetricKind::Frobenius),
            other => Err(ConeError::BadSpec(format!("unknown metric `{other}` (expected op|frob)"))),
        }
    }
}

/// Eigenvalues of `a^{-1/2} b a^{-1/2}` (ascending).
pub fn relative_spectrum(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<Vec<f64>> {
    check_dim(a.dim(), b.dim())?;
    let w = a.inv_sqrt();
    Ok(b.hermitian().congruence(w.matrix()).eigenvalues())
}

pub fn dist(a: &PosDefMatrix, b: &PosDefMatrix, metric: MetricKind) -> Result<f64> {
    let logs: Vec<f64> = relative_spectrum(a, b)?.into_iter().map(f64::ln).collect();
    Ok(metric.norm_of_spectrum(&logs))
}

/// `d(id, a) = ‖log a‖`.
pub fn dist_from_identity(a: &PosDefMatrix, metric: MetricKind) -> f64 {
    let logs: Vec<f64> = a.spectrum().values().iter().map(|x| x.ln()).collect();
    metric.norm_of_spectrum(&logs)
}

/// The isometric action `g · a = g a g*`.
pub fn act(g: &CMatrix, a: &PosDefMatrix) -> Result<PosDefMatrix> {
    check_dim(a.dim(), g.nrows())?;
    check_dim(a.dim(), g.ncols())?;
    Ok(a.congruence(g))
}

/// How a positive `a` induces a Hilbertian norm on vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormConvention {
    /// `‖ξ‖_a = ‖aξ‖ = ⟨a²ξ, ξ⟩^{1/2}`.
    Squared,
    /// `‖ξ‖_a = ‖a^{1/2}ξ‖ = ⟨aξ, ξ⟩^{1/2}`.
    Root,
}

/// Banach–Mazur distance `sup_ξ |log(‖ξ‖_a / ‖ξ‖_b)|` between the norms
/// induced by `a` and `b` under the `‖aξ‖` convention.
pub fn banach_mazur_delta(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<f64> {
    banach_mazur_delta_with(a, b, NormConvention::Squared)
}

/// The supremum is half the largest `|log μ|` over generalized eigenvalues
/// `μ` of the pencil `(A, B)` of Gram operators, computed as the ordinary
/// spectrum of `B^{-1/2} A B^{-1/2}`.
pub fn banach_mazur_delta_with(a: &PosDefMatrix, b: &PosDefMatrix, convention: NormConvention) -> Result<f64> {
    check_dim(a.dim(), b.dim())?;
    let spectrum = match convention {
        NormConvention::Squared => {
            // b^{-1} a² b^{-1}
            let a2 = a.pow(2.0);
            a2.hermitian().congruence(b.inverse().matrix()).eigenvalues()
        }
        NormConvention::Root => relative_spectrum(b, a)?,
    };
    Ok(0.5 * spectrum.iter().fold(0.0f64, |m, x| m.max(x.ln().abs())))
}
