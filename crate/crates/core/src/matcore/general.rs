use super::{require_square, CMatrix};
use crate::error::{ConeError, Result};
use crate::tolerance::Tolerances;

/// An invertible matrix together with its inverse and condition number.
#[derive(Clone, Debug)]
pub struct InvertibleMatrix {
    mat: CMatrix,
    inverse: CMatrix,
    cond: f64,
}

impl InvertibleMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::new_with(m, &Tolerances::default())
    }

    pub fn new_with(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        require_square(&m)?;
        let sv = m.clone().singular_values();
        let (lo, hi) = (sv.min(), sv.max());
        if !(lo > tol.inv_floor) {
            return Err(ConeError::NotInvertible { min_singular: lo });
        }
        let inverse = m
            .clone()
            .try_inverse()
            .ok_or(ConeError::NotInvertible { min_singular: lo })?;
        Ok(Self { mat: m, inverse, cond: hi / lo })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn inverse(&self) -> &CMatrix {
        &self.inverse
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    /// Ratio of extreme singular values.
    pub fn condition_number(&self) -> f64 {
        self.cond
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }
}

/// `‖u u* − id‖_F`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u * u.adjoint() - CMatrix::identity(n, n)).norm()
}

#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        Self::new_with(m, &Tolerances::default())
    }

    pub fn new_with(m: CMatrix, tol: &Tolerances) -> Result<Self> {
        require_square(&m)?;
        let residual = unitarity_residual(&m);
        if residual > tol.unitary * (m.nrows() as f64).sqrt() {
            return Err(ConeError::NotUnitary { residual });
        }
        Ok(Self(m))
    }

    pub(crate) fn trusted(m: CMatrix) -> Self {
        Self(m)
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn adjoint(&self) -> CMatrix {
        self.0.adjoint()
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }
}
