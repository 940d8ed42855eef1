use nalgebra::{Cholesky, DMatrix, DVector};
use serde::Serialize;

use crate::conegeo::{dist_from_identity, MetricKind};
use crate::error::{check_dim, ConeError, Result};
use crate::matcore::{c64, identity, CMatrix, HermitianMatrix, PosDefMatrix};
use crate::matgroups::{fixed_cone, FixedCone, MatrixGroup};

use super::barrier::{Linear, Lmi, Problem};
use super::symmetric_rescale;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SimMethod {
    Barrier,
    Subgradient,
}

/// Result of minimizing `λ_max(a)/λ_min(a)` over the positive part of a
/// fixed cone.
#[derive(Clone, Debug)]
pub struct SimReport {
    pub sim_value: f64,
    /// Symmetric-spectrum minimizer; not unique in general.
    pub minimizer: PosDefMatrix,
    pub dist_to_fixed: f64,
    pub iterations: usize,
    pub converged: bool,
    pub method: SimMethod,
}

#[derive(Serialize)]
pub struct SimJson {
    pub sim: f64,
    pub dist: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl SimReport {
    pub fn to_json(&self) -> SimJson {
        SimJson { sim: self.sim_value, dist: self.dist_to_fixed, converged: self.converged, iterations: self.iterations }
    }

    fn from_point(a: &PosDefMatrix, iterations: usize, converged: bool, method: SimMethod) -> Self {
        let minimizer = symmetric_rescale(a);
        let dist_to_fixed = dist_from_identity(&minimizer, MetricKind::OperatorNorm);
        Self { sim_value: a.condition_number().sqrt(), minimizer, dist_to_fixed, iterations, converged, method }
    }
}

pub fn similarity_number(h: &MatrixGroup) -> Result<SimReport> {
    similarity_number_of_cone(&fixed_cone(h.generators())?)
}

pub fn similarity_number_of_generators(generators: &[CMatrix]) -> Result<SimReport> {
    similarity_number_of_cone(&fixed_cone(generators)?)
}

fn point_of(cone: &FixedCone, coeffs: &[f64]) -> HermitianMatrix {
    cone.combine(coeffs)
}

/// A positive point of the cone, maximizing `λ_min` over a coefficient box
/// until it turns positive.
pub fn feasible_point(cone: &FixedCone) -> Result<PosDefMatrix> {
    let k = cone.real_dim();
    if k == 0 {
        return Err(ConeError::NotUnitarizable);
    }
    let n = cone.dim();
    let bound = n as f64 + 1.0;
    // a fast path: the projection of id is often already positive
    let id_coords = cone.coordinates(&HermitianMatrix::identity(n));
    if let Ok(p) = PosDefMatrix::new(point_of(cone, &id_coords)) {
        return Ok(p);
    }
    let mut coeffs: Vec<CMatrix> = cone.basis().iter().map(|b| b.matrix().clone()).collect();
    coeffs.push(-identity(n));
    let mut linear = Vec::with_capacity(2 * k);
    for i in 0..k {
        for sign in [1.0, -1.0] {
            let mut a = vec![0.0; k + 1];
            a[i] = -sign;
            linear.push(Linear { a, b: bound });
        }
    }
    let mut objective = vec![0.0; k + 1];
    objective[k] = -1.0;
    let problem = Problem { objective, lmis: vec![Lmi { constant: CMatrix::zeros(n, n), coeffs }], linear };
    let mut x0 = vec![0.0; k + 1];
    x0[k] = -1.0;
    let out = problem.solve(x0, 1e-12, |x| x[k] > 1e-6);
    if out.x[k] <= 1e-6 {
        return Err(ConeError::NotUnitarizable);
    }
    PosDefMatrix::new(point_of(cone, &out.x[..k])).map_err(|_| ConeError::NotUnitarizable)
}

/// Interior-point solution of `min t` s.t. `id ≤ a ≤ t·id`, `a` in the cone.
pub fn similarity_number_of_cone(cone: &FixedCone) -> Result<SimReport> {
    let start = feasible_point(cone)?;
    let n = cone.dim();
    let k = cone.real_dim();
    let scale = 2.0 / start.lambda_min();
    let mut x0: Vec<f64> = cone.coordinates(start.hermitian()).iter().map(|c| c * scale).collect();
    x0.push(2.0 * scale * start.lambda_max() + 1.0);

    let zero = CMatrix::zeros(n, n);
    let mut lower: Vec<CMatrix> = cone.basis().iter().map(|b| b.matrix().clone()).collect();
    lower.push(zero.clone());
    let mut upper: Vec<CMatrix> = cone.basis().iter().map(|b| -b.matrix()).collect();
    upper.push(identity(n));
    let mut objective = vec![0.0; k + 1];
    objective[k] = 1.0;
    let problem = Problem {
        objective,
        lmis: vec![Lmi { constant: -identity(n), coeffs: lower }, Lmi { constant: zero, coeffs: upper }],
        linear: Vec::new(),
    };
    let out = problem.solve(x0, 1e-11, |_| false);
    let a = PosDefMatrix::new(point_of(cone, &out.x[..k]))?;
    Ok(SimReport::from_point(&a, out.newton_steps, out.converged, SimMethod::Barrier))
}

fn extreme_subgradient(frame: &CMatrix, values: &[f64], target: f64, basis: &[HermitianMatrix]) -> Vec<f64> {
    // mean of the eigenprojector gradients over a (near-)repeated extreme eigenvalue
    let cols: Vec<usize> =
        (0..values.len()).filter(|&i| (values[i] - target).abs() <= 1e-12 * target.abs().max(1.0)).collect();
    let m = cols.len() as f64;
    basis
        .iter()
        .map(|b| {
            cols.iter()
                .map(|&i| {
                    let v = frame.column(i);
                    (v.adjoint() * b.matrix() * v)[(0, 0)].re
                })
                .sum::<f64>()
                / m
        })
        .collect()
}

/// The plain projected-subgradient scheme on `log λ_max − log λ_min`, with
/// diminishing steps and trace renormalization. Slower and less accurate
/// than [`similarity_number_of_cone`]; kept as an independent cross-check.
pub fn similarity_number_subgradient(cone: &FixedCone, max_iter: usize) -> Result<SimReport> {
    let n = cone.dim() as f64;
    let start = feasible_point(cone)?;
    let normalize = |c: Vec<f64>| -> Vec<f64> {
        let tr = point_of(cone, &c).trace();
        c.iter().map(|x| x * n / tr).collect()
    };
    let mut c = normalize(cone.coordinates(start.hermitian()));
    let objective = |a: &PosDefMatrix| a.lambda_max().ln() - a.lambda_min().ln();
    let mut best = start.clone();
    let mut best_val = objective(&best);
    let mut since_improvement = 0usize;
    let mut window_start = best_val;
    let mut iterations = 0;
    let eta0 = 0.1;
    for k in 0..max_iter {
        iterations = k + 1;
        let a = match PosDefMatrix::new(point_of(cone, &c)) {
            Ok(a) => a,
            Err(_) => break,
        };
        let spec = a.spectrum();
        let vals = spec.values();
        let (lo, hi) = (vals[0], vals[vals.len() - 1]);
        let g_hi = extreme_subgradient(spec.frame(), vals, hi, cone.basis());
        let g_lo = extreme_subgradient(spec.frame(), vals, lo, cone.basis());
        let g: Vec<f64> = g_hi.iter().zip(&g_lo).map(|(h, l)| h / hi - l / lo).collect();
        let gnorm = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if gnorm < 1e-14 {
            break;
        }
        let mut eta = eta0 / ((k + 1) as f64).sqrt();
        let next = loop {
            let trial: Vec<f64> = c.iter().zip(&g).map(|(x, d)| x - eta * d / gnorm).collect();
            if let Ok(p) = PosDefMatrix::new(point_of(cone, &trial)) {
                break Some((trial, p));
            }
            eta *= 0.5;
            if eta < 1e-16 {
                break None;
            }
        };
        let Some((trial, p)) = next else { break };
        c = normalize(trial);
        let val = objective(&p);
        if val < best_val {
            best_val = val;
            best = p;
        }
        since_improvement += 1;
        if since_improvement == 50 {
            if window_start - best_val < 1e-10 {
                break;
            }
            window_start = best_val;
            since_improvement = 0;
        }
    }
    Ok(SimReport::from_point(&best, iterations, iterations < max_iter, SimMethod::Subgradient))
}

/// Distance from `b` to the positive part of the cone, with a witness.
#[derive(Clone, Debug)]
pub struct ConeDistance {
    pub value: f64,
    pub witness: PosDefMatrix,
    pub converged: bool,
}

/// Translate `b` to the identity, then minimize over the translated cone.
pub fn dist_to_fixed_cone(b: &PosDefMatrix, cone: &FixedCone, m: MetricKind) -> Result<ConeDistance> {
    check_dim(cone.dim(), b.dim())?;
    let half = b.sqrt();
    let inv_half = b.inv_sqrt();
    let moved = cone.translate(inv_half.matrix(), half.matrix())?;
    let report = similarity_number_of_cone(&moved)?;
    let (local, converged) = match m {
        MetricKind::OperatorNorm => (report.minimizer, report.converged),
        MetricKind::Frobenius => {
            let (p, ok) = frobenius_projection_of_identity(&moved, &report.minimizer);
            (p, ok && report.converged)
        }
    };
    Ok(ConeDistance {
        value: dist_from_identity(&local, m),
        witness: local.congruence(half.matrix()),
        converged,
    })
}

fn projected_gradient(cone: &FixedCone, a: &PosDefMatrix) -> Option<(HermitianMatrix, f64)> {
    let k = cone.real_dim();
    let ih = a.inv_sqrt();
    let log_a = a.log();
    let whitened: Vec<HermitianMatrix> = cone.basis().iter().map(|b| b.congruence(ih.matrix())).collect();
    let gram = DMatrix::from_fn(k, k, |i, j| whitened[i].inner(&whitened[j]));
    let rhs = DVector::from_iterator(k, whitened.iter().map(|m| m.inner(&log_a)));
    let w = Cholesky::new(gram)?.solve(&rhs);
    let mut dir = CMatrix::zeros(a.dim(), a.dim());
    for (m, &wi) in whitened.iter().zip(w.iter()) {
        dir += m.matrix() * c64(wi, 0.0);
    }
    Some((HermitianMatrix::hermitian_part(&dir), w.dot(&rhs)))
}

/// Nearest point to `id` in the Frobenius metric over the cone, by Riemannian
/// gradient descent on `½‖log a‖²` from `start`.
pub fn frobenius_projection_of_identity(cone: &FixedCone, start: &PosDefMatrix) -> (PosDefMatrix, bool) {
    let mut a = start.clone();
    let value = |a: &PosDefMatrix| 0.5 * a.log().frobenius_norm().powi(2);
    let step = |a: &PosDefMatrix, dir: &HermitianMatrix, eta: f64| {
        let moved = dir.scale(-eta).exp().congruence(a.sqrt().matrix());
        // stay on the cone's span when it is not totally geodesic
        PosDefMatrix::new(cone.project(moved.hermitian())).ok()
    };
    let mut polish: Option<(PosDefMatrix, f64)> = None;
    for _ in 0..5000 {
        let Some((dir, slope)) = projected_gradient(cone, &a) else { return (a, false) };
        if let Some((prev, prev_slope)) = &polish {
            if slope > 0.9 * prev_slope {
                return (prev.clone(), *prev_slope <= 1e-16);
            }
        }
        if slope <= 1e-26 {
            return (a, true);
        }
        let f0 = value(&a);
        let mut eta = 1.0;
        let mut next = None;
        while eta > 1e-12 {
            if let Some(p) = step(&a, &dir, eta) {
                if value(&p) <= f0 - 1e-4 * eta * slope && value(&p) < f0 {
                    next = Some(p);
                    break;
                }
            }
            eta *= 0.5;
        }
        match next {
            Some(p) => {
                a = p;
                polish = None;
            }
            None => match step(&a, &dir, 1.0) {
                Some(p) => polish = Some((std::mem::replace(&mut a, p), slope)),
                None => return (a, false),
            },
        }
    }
    (a, false)
}
