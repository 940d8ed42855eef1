use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{check_dim, ConeError, Result};
use crate::harness::sampling::Sampler;
use crate::matcore::{c64, identity, op_norm, CMatrix, HermitianMatrix};
use crate::matgroups::{combine_all, BlockAlgebra, MatrixGroup};
use crate::tolerance::Tolerances;

#[derive(Clone, Debug)]
pub enum ExpectationKind {
    /// `X ↦ Σ p_j X p_j` for orthogonal projections summing to `id`.
    Pinching(Vec<CMatrix>),
    /// `X ↦ |H|⁻¹ Σ_h h X h*` over a finite unitary group.
    GroupAverage(Vec<CMatrix>),
}

/// A conditional expectation on a block-diagonal algebra `B ⊆ M_n`, with
/// trace-orthonormal bases of its Hermitian range and kernel.
#[derive(Clone, Debug)]
pub struct CondExpectation {
    dim: usize,
    kind: ExpectationKind,
    algebra: BlockAlgebra,
    range_basis: Vec<HermitianMatrix>,
    kernel_basis: Vec<HermitianMatrix>,
}

fn projection_residual(p: &CMatrix) -> f64 {
    (p * p - p).norm().max((p - p.adjoint()).norm())
}

pub fn pinching_expectation(p: &CMatrix) -> Result<CondExpectation> {
    let n = crate::matcore::require_square(p)?;
    CondExpectation::pinching(vec![p.clone(), identity(n) - p], BlockAlgebra::full(n), &Tolerances::default())
}

pub fn group_average_expectation(h: &MatrixGroup) -> Result<CondExpectation> {
    CondExpectation::group_average(h, BlockAlgebra::full(h.dim()), &Tolerances::default())
}

impl CondExpectation {
    pub fn pinching(projections: Vec<CMatrix>, algebra: BlockAlgebra, tol: &Tolerances) -> Result<Self> {
        let n = algebra.dim();
        let first = projections.first().ok_or(ConeError::EmptyInput)?;
        check_dim(n, first.nrows())?;
        let mut total = CMatrix::zeros(n, n);
        let floor = tol.herm * (n as f64).max(1.0);
        for p in &projections {
            check_dim(n, p.nrows())?;
            let residual = projection_residual(p).max(algebra.leakage(p));
            if residual > floor {
                return Err(ConeError::NotProjection { residual });
            }
            total += p;
        }
        let residual = (total - identity(n)).norm();
        if residual > floor {
            return Err(ConeError::NotProjection { residual });
        }
        Ok(Self::build(ExpectationKind::Pinching(projections), algebra))
    }

    pub fn group_average(h: &MatrixGroup, algebra: BlockAlgebra, tol: &Tolerances) -> Result<Self> {
        check_dim(h.dim(), algebra.dim())?;
        let residual = h.unitarity_residual();
        if residual > tol.unitary * (h.dim() as f64).sqrt() * 10.0 {
            return Err(ConeError::NotUnitaryGroup { residual });
        }
        for g in h.elements() {
            if algebra.leakage(g) > tol.herm {
                return Err(ConeError::BadSpec("group elements must lie in the algebra".into()));
            }
        }
        Ok(Self::build(ExpectationKind::GroupAverage(h.elements().to_vec()), algebra))
    }

    fn build(kind: ExpectationKind, algebra: BlockAlgebra) -> Self {
        let mut e = Self { dim: algebra.dim(), kind, algebra, range_basis: Vec::new(), kernel_basis: Vec::new() };
        let basis = e.algebra.hermitian_basis();
        let k = basis.len();
        let images: Vec<HermitianMatrix> = basis.iter().map(|b| e.apply_hermitian(b)).collect();
        // coordinates of E on the Hermitian part; symmetric for trace-compatible E
        // coordinates of E on the Hermitian part: a symmetric idempotent for
        // trace-compatible E, so eigenvalues sit at 0 and 1. The SVD in nalgebra
        // can return a wrong singular triplet on such matrices, hence the eigen split.
        let coords = DMatrix::from_fn(k, k, |i, j| basis[i].inner(&images[j]));
        let eig = ((&coords + coords.transpose()) * 0.5).symmetric_eigen();
        let column = |i: usize| eig.eigenvectors.column(i).iter().copied().collect::<Vec<f64>>();
        let range: Vec<Vec<f64>> = (0..k).filter(|&i| eig.eigenvalues[i] > 0.5).map(column).collect();
        let kernel: Vec<Vec<f64>> = (0..k).filter(|&i| eig.eigenvalues[i] <= 0.5).map(column).collect();
        e.range_basis = combine_all(&basis, &range);
        e.kernel_basis = combine_all(&basis, &kernel);
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &ExpectationKind {
        &self.kind
    }

    pub fn kind_name(&self) -> &'static str {
        match self.kind {
            ExpectationKind::Pinching(_) => "pinching",
            ExpectationKind::GroupAverage(_) => "average",
        }
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn range_basis(&self) -> &[HermitianMatrix] {
        &self.range_basis
    }

    pub fn kernel_basis(&self) -> &[HermitianMatrix] {
        &self.kernel_basis
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        match &self.kind {
            ExpectationKind::Pinching(ps) => ps.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, p| acc + p * x * p),
            ExpectationKind::GroupAverage(hs) => {
                let sum = hs.iter().fold(CMatrix::zeros(self.dim, self.dim), |acc, h| acc + h * x * h.adjoint());
                sum / c64(hs.len() as f64, 0.0)
            }
        }
    }

    pub fn apply_hermitian(&self, x: &HermitianMatrix) -> HermitianMatrix {
        HermitianMatrix::hermitian_part(&self.apply(x.matrix()))
    }

    /// `Ad_u ∘ E ∘ Ad_{u*}`.
    pub fn conjugate(&self, u: &CMatrix) -> Result<Self> {
        check_dim(self.dim, u.nrows())?;
        let moved = |ms: &[CMatrix]| ms.iter().map(|m| u * m * u.adjoint()).collect::<Vec<_>>();
        let kind = match &self.kind {
            ExpectationKind::Pinching(ps) => ExpectationKind::Pinching(moved(ps)),
            ExpectationKind::GroupAverage(hs) => ExpectationKind::GroupAverage(moved(hs)),
        };
        Ok(Self::build(kind, self.algebra.clone()))
    }

    /// Orthogonal projection onto the Hermitian range.
    pub fn project_range(&self, x: &HermitianMatrix) -> HermitianMatrix {
        project(&self.range_basis, x, self.dim)
    }

    pub fn project_kernel(&self, x: &HermitianMatrix) -> HermitianMatrix {
        project(&self.kernel_basis, x, self.dim)
    }

    pub fn idempotence_residual(&self, x: &CMatrix) -> f64 {
        let e = self.apply(x);
        (self.apply(&e) - e).norm()
    }

    pub fn unit_residual(&self) -> f64 {
        (self.apply(&identity(self.dim)) - identity(self.dim)).norm()
    }

    /// `‖E(b₁ x b₂) − b₁E(x)b₂‖` for `b₁, b₂` in the range.
    pub fn bimodule_residual(&self, b1: &CMatrix, x: &CMatrix, b2: &CMatrix) -> f64 {
        (self.apply(&(b1 * x * b2)) - b1 * self.apply(x) * b2).norm()
    }

    pub fn adjoint_residual(&self, x: &CMatrix) -> f64 {
        (self.apply(&x.adjoint()) - self.apply(x).adjoint()).norm()
    }

    pub fn trace_residual(&self, x: &CMatrix) -> f64 {
        (self.apply(x).trace() - x.trace()).norm()
    }

    /// Largest `|Re tr(RK)|` over range and kernel basis pairs, plus the
    /// dimension deficit against the algebra's Hermitian part.
    pub fn decomposition_residual(&self) -> (f64, usize) {
        let cross = self
            .range_basis
            .iter()
            .flat_map(|r| self.kernel_basis.iter().map(move |k| r.inner(k).abs()))
            .fold(0.0, f64::max);
        let deficit = self.algebra.hermitian_dim().abs_diff(self.range_basis.len() + self.kernel_basis.len());
        (cross, deficit)
    }
}

fn project(basis: &[HermitianMatrix], x: &HermitianMatrix, n: usize) -> HermitianMatrix {
    let mut out = CMatrix::zeros(n, n);
    for b in basis {
        out += b.matrix() * c64(b.inner(x), 0.0);
    }
    HermitianMatrix::hermitian_part(&out)
}

/// Estimate of `‖(I − E)|_{A_s}‖` in the operator norm: the best ratio found
/// by sampling and local refinement, with the analytic value when known.
#[derive(Clone, Debug, Serialize)]
pub struct ComplementNorm {
    pub best_sample: f64,
    pub analytic: Option<f64>,
}

pub fn complement_norm(e: &CondExpectation, samples: usize, seed: u64) -> ComplementNorm {
    let mut smp = Sampler::new(seed);
    let basis = e.algebra.hermitian_basis();
    let ratio = |x: &HermitianMatrix| {
        let nx = x.op_norm();
        if nx <= 1e-300 {
            return 0.0;
        }
        op_norm(&(x.matrix() - e.apply(x.matrix()))) / nx
    };
    let random_in_algebra = |smp: &mut Sampler| {
        let coeffs: Vec<f64> = (0..basis.len()).map(|_| smp.normal()).collect();
        crate::matgroups::combine(&basis, &coeffs)
    };
    let mut best = (0.0, HermitianMatrix::zeros(e.dim));
    for _ in 0..samples {
        let x = random_in_algebra(&mut smp);
        let r = ratio(&x);
        if r > best.0 {
            best = (r, x);
        }
    }
    // kernel elements are natural maximizers
    for k in &e.kernel_basis {
        let r = ratio(k);
        if r > best.0 {
            best = (r, k.clone());
        }
    }
    let mut step = 0.3;
    for _ in 0..2000 {
        let dir = random_in_algebra(&mut smp);
        let trial = &best.1 + &dir.scale(step * best.1.op_norm().max(1e-12) / dir.op_norm().max(1e-300));
        let r = ratio(&trial);
        if r > best.0 {
            best = (r, trial);
        } else {
            step *= 0.995;
        }
    }
    let analytic = match &e.kind {
        _ if e.kernel_basis.is_empty() => Some(0.0),
        // X − E(X) = ½(X − qXq) for the self-adjoint unitary q = 2p − 1
        ExpectationKind::Pinching(ps) if ps.len() == 2 => Some(1.0),
        _ => None,
    };
    ComplementNorm { best_sample: best.0, analytic }
}
