use std::sync::OnceLock;

use super::{CMatrix, HermitianMatrix, Spectrum};
use crate::error::{ConeError, Result};
use crate::tolerance::Tolerances;

/// A point of the cone: Hermitian with strictly positive spectrum.
///
/// Spectral data is computed at most once and cached; values built by
/// validation carry it from the start, values built by trusted internal
/// constructions (congruences, geodesic points) compute it on first use.
#[derive(Clone, Debug)]
pub struct PosDefMatrix {
    base: HermitianMatrix,
    spectrum: OnceLock<Spectrum>,
}

impl PartialEq for PosDefMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.base == other.base
    }
}

impl PosDefMatrix {
    pub fn new(h: HermitianMatrix) -> Result<Self> {
        Self::new_with(h, &Tolerances::default())
    }

    pub fn new_with(h: HermitianMatrix, tol: &Tolerances) -> Result<Self> {
        let spectrum = h.spectrum();
        let (lo, hi) = (spectrum.min(), spectrum.max());
        if !(hi > 0.0 && lo > tol.pd_floor * hi) {
            return Err(ConeError::NotPositiveDefinite { min_eigenvalue: lo });
        }
        Ok(Self { base: h, spectrum: OnceLock::from(spectrum) })
    }

    /// Hermiticity check followed by the positivity floor.
    pub fn from_matrix(m: CMatrix) -> Result<Self> {
        Self::new(HermitianMatrix::new(m)?)
    }

    pub fn diagonal(values: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diagonal(values))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_spectrum(Spectrum::from_parts(vec![1.0; n], CMatrix::identity(n, n)))
    }

    pub(crate) fn from_trusted(h: HermitianMatrix) -> Self {
        Self { base: h, spectrum: OnceLock::new() }
    }

    pub(crate) fn from_trusted_matrix(m: &CMatrix) -> Self {
        Self::from_trusted(HermitianMatrix::hermitian_part(m))
    }

    pub(crate) fn from_spectrum(spectrum: Spectrum) -> Self {
        let base = HermitianMatrix::hermitian_part(&spectrum.reconstruct());
        Self { base, spectrum: OnceLock::from(spectrum) }
    }

    pub fn spectrum(&self) -> &Spectrum {
        self.spectrum.get_or_init(|| self.base.spectrum())
    }

    pub fn hermitian(&self) -> &HermitianMatrix {
        &self.base
    }

    pub fn matrix(&self) -> &CMatrix {
        self.base.matrix()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.base.into_matrix()
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn lambda_min(&self) -> f64 {
        self.spectrum().min()
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum().max()
    }

    /// `λ_max / λ_min`.
    pub fn condition_number(&self) -> f64 {
        self.lambda_max() / self.lambda_min()
    }

    /// Spectral calculus; fails if `f` is not finite at some eigenvalue.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let s = self.spectrum();
        if let Some(&bad) = s.values().iter().find(|&&x| !f(x).is_finite()) {
            return Err(ConeError::DomainError { eigenvalue: bad });
        }
        Ok(HermitianMatrix::hermitian_part(&s.apply(f)))
    }

    /// Real power `a^t`; stays in the cone for every real `t`.
    pub fn pow(&self, t: f64) -> PosDefMatrix {
        Self::from_spectrum(self.spectrum().mapped(|x| x.powf(t)))
    }

    pub fn sqrt(&self) -> PosDefMatrix {
        Self::from_spectrum(self.spectrum().mapped(f64::sqrt))
    }

    pub fn inv_sqrt(&self) -> PosDefMatrix {
        Self::from_spectrum(self.spectrum().mapped(|x| x.sqrt().recip()))
    }

    pub fn inverse(&self) -> PosDefMatrix {
        Self::from_spectrum(self.spectrum().mapped(f64::recip))
    }

    pub fn log(&self) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.spectrum().apply(f64::ln))
    }

    pub fn scale(&self, alpha: f64) -> PosDefMatrix {
        assert!(alpha > 0.0, "cone is closed under positive scaling only");
        Self::from_spectrum(self.spectrum().mapped(|x| alpha * x))
    }

    /// `g a g*` for a matrix the caller knows is invertible.
    pub fn congruence(&self, g: &CMatrix) -> PosDefMatrix {
        Self::from_trusted(self.base.congruence(g))
    }
}
