//! A small path-following log-barrier method for problems of the form
//! `min cᵀx` subject to `F_j(x) = F_j0 + Σ x_i F_ji ≻ 0` and `l_k(x) > 0`.

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::matcore::CMatrix;

pub(crate) struct Lmi {
    pub constant: CMatrix,
    pub coeffs: Vec<CMatrix>,
}

impl Lmi {
    fn at(&self, x: &[f64]) -> CMatrix {
        let mut m = self.constant.clone();
        for (f, &xi) in self.coeffs.iter().zip(x) {
            if xi != 0.0 {
                m += f * crate::matcore::c64(xi, 0.0);
            }
        }
        m
    }
}

/// `a·x + b > 0`.
pub(crate) struct Linear {
    pub a: Vec<f64>,
    pub b: f64,
}

pub(crate) struct Problem {
    pub objective: Vec<f64>,
    pub lmis: Vec<Lmi>,
    pub linear: Vec<Linear>,
}

pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub newton_steps: usize,
    pub converged: bool,
}

const MAX_NEWTON: usize = 600;

impl Problem {
    fn nu(&self) -> f64 {
        (self.lmis.iter().map(|l| l.constant.nrows()).sum::<usize>() + self.linear.len()) as f64
    }

    /// Barrier value, or `None` outside the interior.
    fn barrier(&self, x: &[f64]) -> Option<f64> {
        let mut phi = 0.0;
        for lmi in &self.lmis {
            let chol = lmi.at(x).cholesky()?;
            phi -= 2.0 * chol.l_dirty().diagonal().iter().map(|d| d.re.ln()).sum::<f64>();
        }
        for l in &self.linear {
            let v = l.a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() + l.b;
            if v <= 0.0 {
                return None;
            }
            phi -= v.ln();
        }
        phi.is_finite().then_some(phi)
    }

    fn derivatives(&self, x: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let k = x.len();
        let mut grad = DVector::zeros(k);
        let mut hess = DMatrix::zeros(k, k);
        for lmi in &self.lmis {
            let chol = lmi.at(x).cholesky().expect("interior point");
            let l = chol.l();
            let n = l.nrows();
            // whitened coefficients M_i = L⁻¹ F_i L⁻*, flattened to real rows
            let mut flat = DMatrix::<f64>::zeros(k, 2 * n * n);
            for (i, f) in lmi.coeffs.iter().enumerate() {
                let half = l.solve_lower_triangular(f).expect("nonsingular factor");
                let m = l.solve_lower_triangular(&half.adjoint()).expect("nonsingular factor");
                let mut tr = 0.0;
                for r in 0..n {
                    tr += m[(r, r)].re;
                    for c in 0..n {
                        flat[(i, 2 * (r * n + c))] = m[(r, c)].re;
                        flat[(i, 2 * (r * n + c) + 1)] = m[(r, c)].im;
                    }
                }
                grad[i] -= tr;
            }
            hess += &flat * flat.transpose();
        }
        for l in &self.linear {
            let v = l.a.iter().zip(x).map(|(a, x)| a * x).sum::<f64>() + l.b;
            for i in 0..k {
                grad[i] -= l.a[i] / v;
                for j in 0..k {
                    hess[(i, j)] += l.a[i] * l.a[j] / (v * v);
                }
            }
        }
        (grad, hess)
    }

    /// Follow the central path from a strictly feasible `x0` until the
    /// duality-gap bound `ν/τ` drops below `gap_tol`, or `stop` fires.
    pub fn solve(&self, x0: Vec<f64>, gap_tol: f64, stop: impl Fn(&[f64]) -> bool) -> Outcome {
        assert!(self.barrier(&x0).is_some(), "starting point must be interior");
        let nu = self.nu();
        let c = DVector::from_column_slice(&self.objective);
        let mut x = x0;
        let mut tau = 1.0;
        let mut steps = 0;
        loop {
            // centering by damped Newton steps, safe for self-concordant barriers
            for _ in 0..60 {
                if steps >= MAX_NEWTON {
                    return Outcome { x, newton_steps: steps, converged: false };
                }
                steps += 1;
                let (g_phi, h) = self.derivatives(&x);
                let grad = &c * tau + g_phi;
                let dx = newton_direction(&h, &grad);
                let decrement = -grad.dot(&dx);
                if !decrement.is_finite() {
                    return Outcome { x, newton_steps: steps, converged: false };
                }
                if decrement <= 1e-12 {
                    break;
                }
                let mut t = 1.0 / (1.0 + decrement.sqrt());
                let mut moved = false;
                while t > 1e-12 {
                    let trial: Vec<f64> = x.iter().zip(dx.iter()).map(|(a, b)| a + t * b).collect();
                    if self.barrier(&trial).is_some() {
                        moved = trial != x;
                        x = trial;
                        break;
                    }
                    t *= 0.5;
                }
                if stop(&x) {
                    return Outcome { x, newton_steps: steps, converged: true };
                }
                if !moved {
                    break;
                }
            }
            if nu / tau < gap_tol {
                return Outcome { x, newton_steps: steps, converged: true };
            }
            tau *= 8.0;
        }
    }
}

fn newton_direction(h: &DMatrix<f64>, grad: &DVector<f64>) -> DVector<f64> {
    if let Some(ch) = Cholesky::new(h.clone()) {
        return -ch.solve(grad);
    }
    // regularize rank-deficient Hessians
    let scale = h.diagonal().amax().max(1e-300);
    let reg = h + DMatrix::identity(h.nrows(), h.ncols()) * (1e-12 * scale);
    match Cholesky::new(reg) {
        Some(ch) => -ch.solve(grad),
        None => -grad.clone(),
    }
}
