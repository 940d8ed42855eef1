use std::ops::{Add, Mul, Neg, Sub};

use super::{c64, congruence, require_square, CMatrix, PosDefMatrix, Spectrum};
use crate::error::{ConeError, Result};
use crate::tolerance::Tolerances;

/// A self-adjoint matrix; tangent vectors of the cone live here.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianMatrix(CMatrix);

impl HermitianMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::new_with(m, &Tolerances::default())
    }

    /// Check hermiticity (relative to the largest entry) and store the
    /// exactly symmetrized matrix.
    pub fn new_with(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        let n = require_square(&m)?;
        let mut deviation = 0.0f64;
        let mut scale = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                deviation = deviation.max((m[(i, j)] - m[(j, i)].conj()).norm());
                scale = scale.max(m[(i, j)].norm());
            }
        }
        if deviation > tol.herm * scale.max(f64::MIN_POSITIVE) && deviation > 0.0 {
            return Err(ConeError::NonHermitian { deviation });
        }
        Ok(Self::hermitian_part(&m))
    }

    /// `(m + m*)/2` without any check.
    pub fn hermitian_part(m: &CMatrix) -> Self {
        Self((m + m.adjoint()) * c64(0.5, 0.0))
    }

    pub fn zeros(n: usize) -> Self {
        Self(CMatrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(CMatrix::identity(n, n))
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Self(super::diag_matrix(values))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn spectrum(&self) -> Spectrum {
        Spectrum::of_hermitian(&self.0)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.spectrum().values().to_vec()
    }

    pub fn exp(&self) -> PosDefMatrix {
        PosDefMatrix::from_spectrum(self.spectrum().mapped(f64::exp))
    }

    /// Operator norm, `max |λ|`.
    pub fn op_norm(&self) -> f64 {
        let s = self.spectrum();
        s.min().abs().max(s.max().abs())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// Real trace inner product `Re tr(XY)`.
    pub fn inner(&self, other: &Self) -> f64 {
        self.0.iter().zip(other.0.iter()).map(|(x, y)| (x.conj() * y).re).sum()
    }

    pub fn scale(&self, alpha: f64) -> Self {
        Self(&self.0 * c64(alpha, 0.0))
    }

    /// `g X g*`.
    pub fn congruence(&self, g: &CMatrix) -> Self {
        Self::hermitian_part(&congruence(g, &self.0))
    }

    pub fn commutes_with(&self, other: &CMatrix) -> f64 {
        (&self.0 * other - other * &self.0).norm()
    }
}

impl Add for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn add(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 + &rhs.0)
    }
}

impl Sub for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn sub(self, rhs: Self) -> HermitianMatrix {
        HermitianMatrix(&self.0 - &rhs.0)
    }
}

impl Mul<f64> for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn mul(self, rhs: f64) -> HermitianMatrix {
        self.scale(rhs)
    }
}

impl Neg for &HermitianMatrix {
    type Output = HermitianMatrix;
    fn neg(self) -> HermitianMatrix {
        HermitianMatrix(-&self.0)
    }
}

impl From<HermitianMatrix> for CMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}
