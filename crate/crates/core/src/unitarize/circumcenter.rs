use nalgebra::DMatrix;

use crate::conegeo::{dist, Geodesic, MetricKind};
use crate::error::{ConeError, Result};
use crate::harness::sampling::Sampler;
use crate::matcore::{c64, CMatrix, HermitianMatrix, PosDefMatrix};
use crate::matgroups::realify;

#[derive(Clone, Debug)]
pub struct Circumcenter {
    pub center: PosDefMatrix,
    /// `max_p d(center, p)` in the Frobenius metric.
    pub radius: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn circumcenter(points: &[PosDefMatrix]) -> Result<PosDefMatrix> {
    Ok(circumcenter_with(points, 500)?.center)
}

fn radius(x: &PosDefMatrix, points: &[PosDefMatrix]) -> f64 {
    points.iter().map(|p| dist(x, p, MetricKind::Frobenius).expect("dims checked")).fold(0.0, f64::max)
}

fn check_points(points: &[PosDefMatrix]) -> Result<usize> {
    let n = points.first().ok_or(ConeError::EmptyInput)?.dim();
    for p in points {
        crate::error::check_dim(n, p.dim())?;
    }
    Ok(n)
}

/// Minimax center in the CAT(0) Frobenius metric. Each step lifts the points
/// to the tangent space at the iterate (whitened so the metric is Frobenius),
/// solves the Euclidean minimum enclosing ball there, and moves towards its
/// center along the exponential map with a backtracking line search.
pub fn circumcenter_with(points: &[PosDefMatrix], max_iter: usize) -> Result<Circumcenter> {
    let n = check_points(points)?;
    if points.len() == 1 {
        return Ok(Circumcenter { center: points[0].clone(), radius: 0.0, iterations: 0, converged: true });
    }
    let mut mean = CMatrix::zeros(n, n);
    for p in points {
        mean += p.matrix();
    }
    mean /= c64(points.len() as f64, 0.0);
    let mut x = PosDefMatrix::from_matrix(mean)?;
    let mut iterations = 0;
    let mut converged = false;
    // once radius decreases drop below roundoff, full steps are kept only
    // while the step length keeps shrinking geometrically
    let mut polish: Option<(PosDefMatrix, f64)> = None;
    while iterations < max_iter {
        iterations += 1;
        let (v, r2, ball_r2) = enclosing_step(&x, points);
        let vnorm = v.frobenius_norm();
        if let Some((prev, prev_norm)) = &polish {
            if vnorm > 0.5 * prev_norm {
                converged = *prev_norm <= 1e-9 * (1.0 + r2.sqrt());
                x = prev.clone();
                break;
            }
        }
        if vnorm <= 1e-13 * (1.0 + r2.sqrt()) {
            converged = true;
            break;
        }
        let predicted = (r2 - ball_r2).max(0.0);
        let half = x.sqrt();
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-10 {
            let trial = v.scale(t).exp().congruence(half.matrix());
            let rt = radius(&trial, points);
            if rt * rt <= r2 - 0.1 * t * predicted && rt * rt < r2 {
                x = trial;
                moved = true;
                break;
            }
            t *= 0.5;
        }
        if moved {
            polish = None;
        } else {
            let next = v.exp().congruence(half.matrix());
            polish = Some((std::mem::replace(&mut x, next), vnorm));
        }
    }
    let r = radius(&x, points);
    Ok(Circumcenter { center: x, radius: r, iterations, converged })
}

/// Tangent-space enclosing-ball center at `x` (whitened coordinates), the
/// squared radius at `x` and the squared radius of the ball.
fn enclosing_step(x: &PosDefMatrix, points: &[PosDefMatrix]) -> (HermitianMatrix, f64, f64) {
    let n = x.dim();
    let ih = x.inv_sqrt();
    let lifted: Vec<HermitianMatrix> = points.iter().map(|p| p.congruence(ih.matrix()).log()).collect();
    let flat: Vec<Vec<f64>> = lifted.iter().map(|w| realify(w.matrix())).collect();
    let rows = DMatrix::from_fn(points.len(), flat[0].len(), |i, j| flat[i][j]);
    let gram = &rows * rows.transpose();
    let r2 = gram.diagonal().max();
    let (weights, ball_r2) = enclosing_ball_dual(&gram);
    let mut v = CMatrix::zeros(n, n);
    for (w, l) in lifted.iter().zip(&weights) {
        if *l > 0.0 {
            v += w.matrix() * c64(*l, 0.0);
        }
    }
    (HermitianMatrix::hermitian_part(&v), r2, ball_r2)
}

/// Dual of the minimum enclosing ball, `max Σλ_i G_ii − λᵀGλ` over the
/// simplex, by maximal-violating-pair coordinate ascent. Returns the weights
/// and the squared ball radius.
fn enclosing_ball_dual(g: &DMatrix<f64>) -> (Vec<f64>, f64) {
    let m = g.nrows();
    let diag: Vec<f64> = (0..m).map(|i| g[(i, i)]).collect();
    let scale = diag.iter().cloned().fold(0.0, f64::max).max(1e-300);
    let start = (0..m).max_by(|&a, &b| diag[a].total_cmp(&diag[b])).unwrap();
    let mut lambda = vec![0.0; m];
    lambda[start] = 1.0;
    let mut g_lambda: Vec<f64> = (0..m).map(|i| g[(i, start)]).collect();
    for _ in 0..200_000 {
        let grad: Vec<f64> = (0..m).map(|i| diag[i] - 2.0 * g_lambda[i]).collect();
        let i = (0..m).max_by(|&a, &b| grad[a].total_cmp(&grad[b])).unwrap();
        let j = (0..m).filter(|&k| lambda[k] > 0.0).min_by(|&a, &b| grad[a].total_cmp(&grad[b])).unwrap();
        let gap = grad[i] - grad[j];
        if gap <= 1e-15 * scale || i == j {
            break;
        }
        let curv = diag[i] + diag[j] - 2.0 * g[(i, j)];
        let delta = if curv > 0.0 { (gap / (2.0 * curv)).min(lambda[j]) } else { lambda[j] };
        lambda[i] += delta;
        lambda[j] -= delta;
        if lambda[j] < 1e-300 {
            lambda[j] = 0.0;
        }
        for k in 0..m {
            g_lambda[k] += delta * (g[(k, i)] - g[(k, j)]);
        }
    }
    let value = (0..m).map(|i| lambda[i] * (diag[i] - g_lambda[i])).sum::<f64>();
    (lambda, value)
}

/// The classical minimax scheme `x ← γ_{x,p*}(1/(k+2))` towards the current
/// farthest point, restarted from random input points; returns the best
/// iterate seen.
pub fn circumcenter_farthest_point(
    points: &[PosDefMatrix],
    restarts: usize,
    max_iter: usize,
    seed: u64,
) -> Result<Circumcenter> {
    check_points(points)?;
    let mut sampler = Sampler::new(seed);
    let mut best: Option<Circumcenter> = None;
    for _ in 0..restarts.max(1) {
        let mut x = points[sampler.index(points.len())].clone();
        let mut local_best = (x.clone(), radius(&x, points));
        for k in 0..max_iter {
            let (far, _) = points
                .iter()
                .map(|p| (p, dist(&x, p, MetricKind::Frobenius).unwrap()))
                .max_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            x = Geodesic::new(&x, far)?.eval(1.0 / (k as f64 + 2.0));
            let r = radius(&x, points);
            if r < local_best.1 {
                local_best = (x.clone(), r);
            }
        }
        if best.as_ref().is_none_or(|b| local_best.1 < b.radius) {
            best = Some(Circumcenter { center: local_best.0, radius: local_best.1, iterations: max_iter, converged: false });
        }
    }
    Ok(best.expect("at least one restart"))
}
