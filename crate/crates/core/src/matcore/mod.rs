//! Hermitian and positive-definite matrix types and the spectral
//! matrix-function kernel every other module builds on.
//!
//! One Hermitian eigendecomposition is the only numerical primitive: square
//! roots, logarithms, exponentials and real powers are all evaluated by
//! mapping eigenvalues through a scalar function.

mod general;
mod hermitian;
mod json;
mod posdef;
mod spectrum;

use nalgebra::DMatrix;
use num_complex::Complex;

pub use general::{unitarity_residual, InvertibleMatrix, UnitaryMatrix};
pub use hermitian::HermitianMatrix;
pub use json::{read_matrix, write_matrix, MatrixJson};
pub use posdef::PosDefMatrix;
pub use spectrum::Spectrum;

use crate::error::{ConeError, Result};
use crate::tolerance::Tolerances;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;

#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Build a complex matrix from real row-major data.
pub fn real_matrix(rows: &[&[f64]]) -> CMatrix {
    let n = rows.len();
    let m = rows.first().map_or(0, |r| r.len());
    CMatrix::from_fn(n, m, |i, j| c64(rows[i][j], 0.0))
}

pub fn diag_matrix(values: &[f64]) -> CMatrix {
    let n = values.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c64(values[i], 0.0) } else { C64::default() })
}

/// Block-diagonal direct sum.
pub fn direct_sum(blocks: &[&CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut out = CMatrix::zeros(n, n);
    let mut offset = 0;
    for b in blocks {
        let k = b.nrows();
        out.view_mut((offset, offset), (k, k)).copy_from(b);
        offset += k;
    }
    out
}

/// Largest singular value.
pub fn op_norm(m: &CMatrix) -> f64 {
    m.clone().singular_values().max()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// `g · a · g*`.
pub fn congruence(g: &CMatrix, a: &CMatrix) -> CMatrix {
    g * a * g.adjoint()
}

/// Relative Frobenius difference `‖x − y‖ / max(1, ‖y‖)`.
pub fn rel_diff(x: &CMatrix, y: &CMatrix) -> f64 {
    (x - y).norm() / y.norm().max(1.0)
}

pub(crate) fn require_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() == m.ncols() && m.nrows() > 0 {
        Ok(m.nrows())
    } else {
        Err(ConeError::NotSquare { rows: m.nrows(), cols: m.ncols() })
    }
}

/// Eigendecomposition of a Hermitian matrix, after checking hermiticity.
pub fn herm_eig(m: &CMatrix) -> Result<Spectrum> {
    Ok(HermitianMatrix::new(m.clone())?.spectrum())
}

/// Apply a scalar map to the spectrum of `a`.
pub fn mat_fn(a: &PosDefMatrix, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    a.map(f)
}

pub fn exp_herm(x: &HermitianMatrix) -> PosDefMatrix {
    x.exp()
}

pub fn validate_posdef(h: &HermitianMatrix) -> Result<PosDefMatrix> {
    PosDefMatrix::new(h.clone())
}

pub fn validate_posdef_with(h: &HermitianMatrix, tol: &Tolerances) -> Result<PosDefMatrix> {
    PosDefMatrix::new_with(h.clone(), tol)
}

#[cfg(test)]
mod tests;
