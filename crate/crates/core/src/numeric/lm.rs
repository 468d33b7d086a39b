//! Levenberg–Marquardt nonlinear least squares with a central-difference
//! Jacobian.

use nalgebra::{DMatrix, DVector};

#[derive(Debug, Clone, Copy)]
pub struct LmOptions {
    pub max_iter: usize,
    /// Stop when the relative decrease of the cost falls below this.
    pub ftol: f64,
    /// Stop when the relative step length falls below this.
    pub xtol: f64,
    pub initial_lambda: f64,
}

impl Default for LmOptions {
    fn default() -> Self {
        Self {
            max_iter: 200,
            ftol: 1e-15,
            xtol: 1e-14,
            initial_lambda: 1e-3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LmOutcome {
    pub params: Vec<f64>,
    /// Sum of squared residuals at `params`.
    pub cost: f64,
    pub iterations: usize,
    pub converged: bool,
}

fn cost(r: &[f64]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

fn jacobian<F: FnMut(&[f64]) -> Vec<f64>>(f: &mut F, p: &[f64], m: usize) -> Option<DMatrix<f64>> {
    let n = p.len();
    let mut jac = DMatrix::zeros(m, n);
    let mut q = p.to_vec();
    for j in 0..n {
        let h = 1e-7 * p[j].abs().max(1e-3);
        q[j] = p[j] + h;
        let rp = f(&q);
        q[j] = p[j] - h;
        let rm = f(&q);
        q[j] = p[j];
        if rp.len() != m || rm.len() != m {
            return None;
        }
        for i in 0..m {
            jac[(i, j)] = (rp[i] - rm[i]) / (2.0 * h);
        }
    }
    jac.iter().all(|v| v.is_finite()).then_some(jac)
}

/// Minimizes the sum of squares of `residuals(p)` starting from `p0`.
///
/// Returns `None` when the residuals are not finite at the start.
pub fn levenberg_marquardt<F: FnMut(&[f64]) -> Vec<f64>>(
    mut residuals: F,
    p0: &[f64],
    opts: LmOptions,
) -> Option<LmOutcome> {
    let mut p = p0.to_vec();
    let mut r = residuals(&p);
    if r.iter().any(|v| !v.is_finite()) {
        return None;
    }
    let m = r.len();
    let mut c = cost(&r);
    let mut lambda = opts.initial_lambda;
    let mut converged = false;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        iterations += 1;
        if c == 0.0 {
            converged = true;
            break;
        }
        let Some(jac) = jacobian(&mut residuals, &p, m) else {
            break;
        };
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let g = &jt * DVector::from_column_slice(&r);
        let mut accepted = false;
        for _ in 0..30 {
            let mut a = jtj.clone();
            for k in 0..a.nrows() {
                a[(k, k)] += lambda * jtj[(k, k)].max(1e-12);
            }
            let Some(step) = a.cholesky().map(|ch| ch.solve(&(-&g))) else {
                lambda *= 10.0;
                continue;
            };
            let trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, b)| a + b).collect();
            let rt = residuals(&trial);
            let ct = cost(&rt);
            if ct.is_finite() && ct < c {
                let rel_drop = (c - ct) / c;
                let pnorm = p.iter().map(|v| v * v).sum::<f64>().sqrt();
                let snorm = step.norm();
                p = trial;
                r = rt;
                c = ct;
                lambda = (lambda / 10.0).max(1e-15);
                accepted = true;
                if rel_drop < opts.ftol || snorm <= opts.xtol * (pnorm + opts.xtol) {
                    converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            // No downhill step at any damping: a stationary point.
            converged = true;
            break;
        }
        if converged {
            break;
        }
    }
    Some(LmOutcome {
        params: p,
        cost: c,
        iterations,
        converged,
    })
}
