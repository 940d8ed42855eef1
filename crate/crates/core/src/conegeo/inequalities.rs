use crate::error::{check_dim, Result};
use crate::matcore::{HermitianMatrix, PosDefMatrix};

use super::geodesic::exp_at;
use super::metric::{dist, MetricKind};

/// `‖e^{X/2} e^Y e^{X/2}‖ − ‖e^{X+Y}‖`; nonnegative by Segal's inequality.
pub fn segal_residual(x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    check_dim(x.dim(), y.dim())?;
    let half = x.scale(0.5).exp();
    let sandwiched = y.exp().congruence(half.matrix());
    let combined = (x + y).eigenvalues();
    Ok(sandwiched.lambda_max() - combined[combined.len() - 1].exp())
}

/// `d(exp_a X, exp_a Y) − ‖a^{-1/2}(X − Y)a^{-1/2}‖` in the operator norm;
/// nonnegative by the exponential metric increasing property.
pub fn emi_residual(a: &PosDefMatrix, x: &HermitianMatrix, y: &HermitianMatrix) -> Result<f64> {
    check_dim(a.dim(), x.dim())?;
    check_dim(a.dim(), y.dim())?;
    let ex = exp_at(a, x)?;
    let ey = exp_at(a, y)?;
    let tangent = (x - y).congruence(a.inv_sqrt().matrix()).op_norm();
    Ok(dist(&ex, &ey, MetricKind::OperatorNorm)? - tangent)
}
