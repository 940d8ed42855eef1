use serde::Serialize;

use crate::conegeo::{dist, MetricKind};
use crate::error::{check_dim, ConeError, Result};
use crate::matcore::{CMatrix, HermitianMatrix, InvertibleMatrix, PosDefMatrix, UnitaryMatrix};
use crate::matgroups::{commutant_in, fixed_cone_in, FixedCone, Representation};
use crate::tolerance::Tolerances;
use crate::unitarize::{dist_to_fixed_cone, similarity_number_of_cone, unitarizer_residual};

use super::expectation::{complement_norm, CondExpectation, ComplementNorm};

pub const SPLIT_BUDGET: usize = 10_000;

/// `a = e^Y e^X e^Y` with `E(X) = 0` and `Y` in the range.
#[derive(Clone, Debug)]
pub struct PositiveSplit {
    pub x: HermitianMatrix,
    pub y: HermitianMatrix,
    pub iterations: usize,
    /// `‖E(X)‖_F` at exit.
    pub residual: f64,
}

impl PositiveSplit {
    pub fn reconstruct(&self) -> CMatrix {
        let ey = self.y.exp();
        crate::matcore::congruence(ey.matrix(), self.x.exp().matrix())
    }
}

/// Fixed-point iteration `Y ← Y + c·E(log(e^{−Y} a e^{−Y}))` from
/// `Y₀ = ½E(log a)`, with `c = ½` halved on residual increase.
pub fn pr_split_positive(a: &PosDefMatrix, e: &CondExpectation) -> Result<PositiveSplit> {
    check_dim(e.dim(), a.dim())?;
    let mut y = e.apply_hermitian(&a.log()).scale(0.5);
    let mut gain: f64 = 0.5;
    let mut prev = f64::INFINITY;
    for k in 0..SPLIT_BUDGET {
        let emy = y.scale(-1.0).exp();
        let x = a.congruence(emy.matrix()).log();
        let ex = e.apply_hermitian(&x);
        let residual = ex.frobenius_norm();
        if residual <= 1e-11 {
            return Ok(PositiveSplit { x, y, iterations: k, residual });
        }
        if residual > prev {
            gain = (gain * 0.5).max(1.0 / 64.0);
        }
        prev = residual;
        y = &y + &ex.scale(gain);
    }
    let emy = y.scale(-1.0).exp();
    let residual = e.apply_hermitian(&a.congruence(emy.matrix()).log()).frobenius_norm();
    Err(ConeError::NoConvergence { iterations: SPLIT_BUDGET, residual })
}

/// `g = u e^Z e^Y`.
#[derive(Clone, Debug)]
pub struct SplitTriple {
    pub u: UnitaryMatrix,
    pub z: HermitianMatrix,
    pub y: HermitianMatrix,
    pub iterations: usize,
}

impl SplitTriple {
    pub fn reconstruct(&self) -> CMatrix {
        self.u.matrix() * self.z.exp().matrix() * self.y.exp().matrix()
    }
}

pub fn pr_split_invertible(g: &InvertibleMatrix, e: &CondExpectation) -> Result<SplitTriple> {
    check_dim(e.dim(), g.dim())?;
    let a = PosDefMatrix::from_matrix(g.matrix().adjoint() * g.matrix())?;
    let split = pr_split_positive(&a, e)?;
    let z = split.x.scale(0.5);
    let u = g.matrix() * split.y.scale(-1.0).exp().matrix() * z.scale(-1.0).exp().matrix();
    let tol = Tolerances { unitary: 1e-8, ..Tolerances::default() };
    let u = UnitaryMatrix::new_with(u, &tol)?;
    Ok(SplitTriple { u, z, y: split.y, iterations: split.iterations })
}

/// The canonical positive `e^{−X₀}` with `Ad_{e^{−X₀}} ∘ π₁ = ρ`.
#[derive(Clone, Debug)]
pub struct CanonicalUnitarizer {
    pub x0: HermitianMatrix,
    pub rho: Representation,
    pub split: SplitTriple,
    /// Unitarity residual of `e^{−X₀} π₁(x) e^{X₀}` over generators.
    pub residual: f64,
    /// `‖E_ρ(X₀)‖_F`.
    pub kernel_residual: f64,
    pub e_rho: CondExpectation,
}

/// Subspace gap between the range of `E` and the commutant of the images.
pub fn range_gap(e: &CondExpectation, images: &[CMatrix]) -> Result<f64> {
    let group = crate::matgroups::MatrixGroup::close(images, crate::matgroups::DEFAULT_CLOSURE_CAP, &Tolerances::default())?;
    let comm = commutant_in(&group, e.algebra(), &Tolerances::default())?;
    let n = e.dim();
    let a = FixedCone::from_span(n, e.algebra().clone(), Vec::new(), e.range_basis());
    let b = FixedCone::from_span(n, e.algebra().clone(), Vec::new(), &comm);
    Ok(a.subspace_gap(&b))
}

pub fn canonical_unitarizer(g: &InvertibleMatrix, pi0: &Representation, e: &CondExpectation) -> Result<CanonicalUnitarizer> {
    check_dim(e.dim(), g.dim())?;
    check_dim(e.dim(), pi0.dim())?;
    let tol = Tolerances::default();
    let gap = range_gap(e, &pi0.generator_images())?;
    if gap > tol.fix {
        return Err(ConeError::RangeMismatch { gap });
    }
    let split = pr_split_invertible(g, e)?;
    let u = split.u.matrix().clone();
    let x0 = split.z.congruence(&u);
    let rho = pi0.with_images(pi0.images().iter().map(|m| &u * m * u.adjoint()).collect())?;
    let e_rho = e.conjugate(&u)?;
    let pi1: Vec<CMatrix> = pi0.generator_images().iter().map(|m| g.matrix() * m * g.inverse()).collect();
    let residual = unitarizer_residual(&x0.exp(), &pi1);
    let kernel_residual = e_rho.apply_hermitian(&x0).frobenius_norm();
    Ok(CanonicalUnitarizer { x0, rho, split, residual, kernel_residual, e_rho })
}

#[derive(Clone, Debug, Serialize)]
pub struct ThmacsReport {
    /// `‖e^{X₀}‖·‖e^{−X₀}‖`.
    pub lhs: f64,
    /// `Sim_B` of the group generated by the `π₁` images.
    pub rhs: f64,
    pub ratio: f64,
    /// `exp(dist(e^{−2X₀}, P_B^{ρ}))` in the operator-norm metric.
    pub intermediate: f64,
    pub unitarity_residual: f64,
    pub kernel_residual: f64,
    pub reconstruction_residual: f64,
    pub complement_norm: ComplementNorm,
}

pub fn thmacs_check(g: &InvertibleMatrix, pi0: &Representation, e: &CondExpectation) -> Result<ThmacsReport> {
    let leak = e.algebra().leakage(g.matrix());
    if leak > Tolerances::default().herm * g.matrix().norm().max(1.0) {
        return Err(ConeError::BadSpec(format!("g leaves the block-diagonal algebra (off-block norm {leak:.3e})")));
    }
    let cu = canonical_unitarizer(g, pi0, e)?;
    let tol = Tolerances::default();
    let e_x0 = cu.x0.exp();
    let lhs = e_x0.lambda_max() / e_x0.lambda_min();
    let pi1: Vec<CMatrix> = pi0.generator_images().iter().map(|m| g.matrix() * m * g.inverse()).collect();
    let rhs = similarity_number_of_cone(&fixed_cone_in(&pi1, e.algebra(), &tol)?)?.sim_value;
    let rho_cone = fixed_cone_in(&cu.rho.generator_images(), e.algebra(), &tol)?;
    let start = cu.x0.scale(-2.0).exp();
    let intermediate = dist_to_fixed_cone(&start, &rho_cone, MetricKind::OperatorNorm)?.value.exp();
    let reconstruction_residual = (cu.split.reconstruct() - g.matrix()).norm();
    Ok(ThmacsReport {
        lhs,
        rhs,
        ratio: lhs / rhs,
        intermediate,
        unitarity_residual: cu.residual,
        kernel_residual: cu.kernel_residual,
        reconstruction_residual,
        complement_norm: complement_norm(e, 2000, 0x7e57),
    })
}

/// `d(e^{2Y}, e^Y e^X e^Y)` in the operator-norm metric, which equals `‖X‖`.
pub fn leaf_distance(x: &HermitianMatrix, y: &HermitianMatrix) -> f64 {
    let ey = y.exp();
    let point = x.exp().congruence(ey.matrix());
    dist(&y.scale(2.0).exp(), &point, MetricKind::OperatorNorm).expect("same dimension")
}
