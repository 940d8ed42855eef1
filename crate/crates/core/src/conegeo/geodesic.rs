use crate::error::{check_dim, Result};
use crate::matcore::{CMatrix, HermitianMatrix, PosDefMatrix, Spectrum};

use super::metric::MetricKind;

/// `γ(t) = a^{1/2} (a^{-1/2} b a^{-1/2})^t a^{1/2}`.
///
/// The square roots of `a` and the spectrum of the inner factor are cached,
/// so each evaluation is one spectral power and two products.
#[derive(Clone, Debug)]
pub struct Geodesic {
    a: PosDefMatrix,
    b: PosDefMatrix,
    a_half: CMatrix,
    inner: Spectrum,
}

impl Geodesic {
    pub fn new(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<Self> {
        check_dim(a.dim(), b.dim())?;
        let a_half = a.sqrt().matrix().clone();
        let inner = b.hermitian().congruence(a.inv_sqrt().matrix()).spectrum();
        Ok(Self { a: a.clone(), b: b.clone(), a_half, inner })
    }

    pub fn start(&self) -> &PosDefMatrix {
        &self.a
    }

    pub fn end(&self) -> &PosDefMatrix {
        &self.b
    }

    /// Any real `t`; values outside `[0, 1]` extend the geodesic line.
    pub fn eval(&self, t: f64) -> PosDefMatrix {
        if t == 0.0 {
            return self.a.clone();
        }
        if t == 1.0 {
            return self.b.clone();
        }
        let power = self.inner.apply(|x| x.powf(t));
        PosDefMatrix::from_trusted_matrix(&(&self.a_half * power * &self.a_half))
    }

    pub fn length(&self, metric: MetricKind) -> f64 {
        let logs: Vec<f64> = self.inner.values().iter().map(|x| x.ln()).collect();
        metric.norm_of_spectrum(&logs)
    }
}

pub fn geodesic_eval(gamma: &Geodesic, t: f64) -> PosDefMatrix {
    gamma.eval(t)
}

/// Riemannian exponential at `a`: `a^{1/2} exp(a^{-1/2} Z a^{-1/2}) a^{1/2}`.
pub fn exp_at(a: &PosDefMatrix, z: &HermitianMatrix) -> Result<PosDefMatrix> {
    check_dim(a.dim(), z.dim())?;
    let inner = z.congruence(a.inv_sqrt().matrix()).exp();
    Ok(inner.congruence(a.sqrt().matrix()))
}

/// Riemannian logarithm at `a`: `a^{1/2} log(a^{-1/2} b a^{-1/2}) a^{1/2}`.
pub fn log_at(a: &PosDefMatrix, b: &PosDefMatrix) -> Result<HermitianMatrix> {
    check_dim(a.dim(), b.dim())?;
    let inner = b.hermitian().congruence(a.inv_sqrt().matrix());
    let log = PosDefMatrix::from_trusted(inner).log();
    Ok(log.congruence(a.sqrt().matrix()))
}
