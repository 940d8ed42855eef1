use crate::error::{check_dim, ConeError, Result};
use crate::matcore::{op_norm, CMatrix, HermitianMatrix};
use crate::tolerance::Tolerances;

use super::algebra::{combine, linear_null_space, BlockAlgebra};
use super::closure::MatrixGroup;

/// The linear span `V` of the fixed-point cone `P^H = V ∩ P`, with an
/// orthonormal basis under `Re tr(XY)`.
#[derive(Clone, Debug)]
pub struct FixedCone {
    dim: usize,
    algebra: BlockAlgebra,
    generators: Vec<CMatrix>,
    basis: Vec<HermitianMatrix>,
}

pub fn fixed_cone(generators: &[CMatrix]) -> Result<FixedCone> {
    let n = generators.first().ok_or(ConeError::EmptyInput)?.nrows();
    fixed_cone_in(generators, &BlockAlgebra::full(n), &Tolerances::default())
}

/// Fixed points of `a ↦ h a h*` inside the Hermitian part of `algebra`.
pub fn fixed_cone_in(generators: &[CMatrix], algebra: &BlockAlgebra, tol: &Tolerances) -> Result<FixedCone> {
    let n = algebra.dim();
    for g in generators {
        check_dim(n, g.nrows())?;
        check_dim(n, g.ncols())?;
    }
    let ambient = algebra.hermitian_basis();
    let basis = if generators.is_empty() {
        ambient
    } else {
        linear_null_space(
            &ambient,
            |b| generators.iter().map(|h| h * b.matrix() * h.adjoint() - b.matrix()).collect(),
            tol.null_space,
            generators.iter().map(|h| op_norm(h).powi(2) + 1.0).fold(0.0, f64::max),
        )
    };
    Ok(FixedCone { dim: n, algebra: algebra.clone(), generators: generators.to_vec(), basis })
}

impl FixedCone {
    /// Build from an explicit spanning set, orthonormalizing it.
    pub fn from_span(dim: usize, algebra: BlockAlgebra, generators: Vec<CMatrix>, span: &[HermitianMatrix]) -> Self {
        let basis = orthonormalize(span, 1e-9);
        Self { dim, algebra, generators, basis }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn basis(&self) -> &[HermitianMatrix] {
        &self.basis
    }

    pub fn real_dim(&self) -> usize {
        self.basis.len()
    }

    pub fn coordinates(&self, x: &HermitianMatrix) -> Vec<f64> {
        self.basis.iter().map(|b| b.inner(x)).collect()
    }

    pub fn combine(&self, coeffs: &[f64]) -> HermitianMatrix {
        if self.basis.is_empty() {
            return HermitianMatrix::zeros(self.dim);
        }
        combine(&self.basis, coeffs)
    }

    /// Orthogonal projection onto `V` in the trace inner product.
    pub fn project(&self, x: &HermitianMatrix) -> HermitianMatrix {
        self.combine(&self.coordinates(x))
    }

    /// `‖x − proj(x)‖_F`.
    pub fn distance_to_span(&self, x: &HermitianMatrix) -> f64 {
        (x - &self.project(x)).frobenius_norm()
    }

    /// `max_h ‖h x h* − x‖_F` over generators.
    pub fn fixed_residual(&self, x: &HermitianMatrix) -> f64 {
        self.generators
            .iter()
            .map(|h| (h * x.matrix() * h.adjoint() - x.matrix()).norm())
            .fold(0.0, f64::max)
    }

    /// `f · V = {f x f*}`, re-orthonormalized; this is the span for the
    /// conjugated generators `f h f⁻¹`.
    pub fn translate(&self, f: &CMatrix, f_inv: &CMatrix) -> Result<FixedCone> {
        check_dim(self.dim, f.nrows())?;
        let span: Vec<HermitianMatrix> = self.basis.iter().map(|b| b.congruence(f)).collect();
        let gens = self.generators.iter().map(|h| f * h * f_inv).collect();
        Ok(Self::from_span(self.dim, BlockAlgebra::full(self.dim), gens, &span))
    }

    /// Largest distance from a unit vector of one span to the other span,
    /// symmetrized; zero iff the spans agree.
    pub fn subspace_gap(&self, other: &FixedCone) -> f64 {
        if self.real_dim() != other.real_dim() {
            return f64::INFINITY;
        }
        let one = self.basis.iter().map(|b| other.distance_to_span(b)).fold(0.0, f64::max);
        let two = other.basis.iter().map(|b| self.distance_to_span(b)).fold(0.0, f64::max);
        one.max(two)
    }
}

/// Orthonormal basis of the real span of Hermitian matrices.
pub(crate) fn orthonormalize(span: &[HermitianMatrix], rel_threshold: f64) -> Vec<HermitianMatrix> {
    let mut out: Vec<HermitianMatrix> = Vec::new();
    let scale = span.iter().map(|s| s.frobenius_norm()).fold(0.0, f64::max);
    // two Gram-Schmidt passes keep the basis orthonormal to roundoff
    for s in span {
        let mut v = s.clone();
        for _ in 0..2 {
            for b in &out {
                v = &v - &b.scale(b.inner(&v));
            }
        }
        let norm = v.frobenius_norm();
        if norm > rel_threshold * scale.max(1e-300) {
            out.push(v.scale(1.0 / norm));
        }
    }
    out
}

pub fn commutant_basis(h: &MatrixGroup) -> Result<Vec<HermitianMatrix>> {
    commutant_in(h, &BlockAlgebra::full(h.dim()), &Tolerances::default())
}

/// `{X Hermitian in algebra : hX = Xh}` for a unitary group.
pub fn commutant_in(h: &MatrixGroup, algebra: &BlockAlgebra, tol: &Tolerances) -> Result<Vec<HermitianMatrix>> {
    check_dim(h.dim(), algebra.dim())?;
    let residual = h.unitarity_residual();
    if residual > tol.unitary * (h.dim() as f64).sqrt() * 10.0 {
        return Err(ConeError::NotUnitaryGroup { residual });
    }
    let ambient = algebra.hermitian_basis();
    Ok(linear_null_space(
        &ambient,
        |b| h.generators().iter().map(|g| g * b.matrix() - b.matrix() * g).collect(),
        tol.null_space,
        2.0,
    ))
}
