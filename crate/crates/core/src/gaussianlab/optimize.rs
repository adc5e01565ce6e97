//! Numerical solution of the Gaussian uncertainty–perception problem
//!
//!   min_{Σ̂ ⪰ 0} det(Σ̂ + Σq)^{1/d}  s.t.  D_{½}(N(0, Σq), N(0, Σ̂)) ≤ P
//!
//! by an augmented Lagrangian over log-Cholesky factors of Σ̂, with BFGS inner
//! iterations and backtracking line search.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::problem::LinearGaussianProblem;
use crate::error::{Error, Result};
use crate::numstats::SpdMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Cap on the total number of inner (BFGS) iterations.
    pub max_iters: usize,
    /// Relative change of the objective between outer iterations.
    pub tol_objective: f64,
    /// Absolute constraint violation |D − P| accepted at convergence.
    pub tol_constraint: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            max_iters: 100_000,
            tol_objective: 1e-10,
            tol_constraint: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct UpSolution {
    /// det(Σ̂ + Σq)^{1/d} at the returned iterate.
    pub u: f64,
    pub sigma_hat: SpdMatrix,
    /// |D_{½} − P| at the returned iterate.
    pub constraint_activity: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl UpSolution {
    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NonConvergence {
                iterations: self.iterations,
            })
        }
    }
}

pub fn solve_up_gaussian(
    p: &LinearGaussianProblem,
    perception: f64,
    opts: &SolveOptions,
) -> Result<UpSolution> {
    solve_up_for_posterior(p.posterior_cov(), perception, opts)
}

/// Solves the constrained problem for a given posterior covariance Σq.
///
/// At P = 0 the feasible set is the single point Σ̂ = Σq (D_{½} vanishes only
/// for identical distributions), which is returned directly.
pub fn solve_up_for_posterior(
    sigma_q: &SpdMatrix,
    perception: f64,
    opts: &SolveOptions,
) -> Result<UpSolution> {
    if !(perception >= 0.0) {
        return Err(Error::Domain(format!(
            "perception budget must be ≥ 0, got {perception}"
        )));
    }
    let d = sigma_q.dim();
    if perception == 0.0 {
        let sum = sigma_q.scale(2.0)?;
        return Ok(UpSolution {
            u: sum.det_root(),
            sigma_hat: sigma_q.clone(),
            constraint_activity: 0.0,
            iterations: 0,
            converged: true,
        });
    }

    let prob = Problem::new(sigma_q);
    let mut theta = prob.theta_from_matrix(sigma_q.entries());
    let mut mu = 1.0;
    let mut rho = 10.0;
    let mut iterations = 0;
    let mut prev_f = f64::INFINITY;
    let mut prev_violation = f64::INFINITY;
    let mut converged = false;

    while iterations < opts.max_iters {
        let budget = opts.max_iters - iterations;
        let (next, used) = prob.minimize_al(&theta, perception, mu, rho, budget);
        iterations += used.max(1);
        theta = next;
        let eval = prob.evaluate(&theta);
        let c = eval.g - perception;
        let violation = c.max(-mu / rho).abs();
        mu = (mu + rho * c).max(0.0);
        let rel_change = (eval.f - prev_f).abs() / eval.f.abs().max(1.0);
        prev_f = eval.f;
        if c.abs() <= opts.tol_constraint && rel_change <= opts.tol_objective {
            converged = true;
            break;
        }
        if violation > 0.25 * prev_violation {
            rho = (rho * 10.0).min(1e12);
        }
        prev_violation = violation;
    }

    let eval = prob.evaluate(&theta);
    let sigma_hat = SpdMatrix::new(prob.sigma_hat(&theta))?;
    Ok(UpSolution {
        u: (eval.f / d as f64).exp(),
        sigma_hat,
        constraint_activity: (eval.g - perception).abs(),
        iterations,
        converged,
    })
}

struct Eval {
    f: f64,
    g: f64,
    grad_f: DVector<f64>,
    grad_g: DVector<f64>,
}

struct Problem<'a> {
    sigma_q: &'a SpdMatrix,
    d: usize,
    /// (row, col) of each parameter in L; diagonal entries are log-scaled.
    index: Vec<(usize, usize)>,
}

impl<'a> Problem<'a> {
    fn new(sigma_q: &'a SpdMatrix) -> Self {
        let d = sigma_q.dim();
        let mut index = Vec::with_capacity(d * (d + 1) / 2);
        for i in 0..d {
            for j in 0..=i {
                index.push((i, j));
            }
        }
        Self { sigma_q, d, index }
    }

    fn factor(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let mut l = DMatrix::zeros(self.d, self.d);
        for (k, &(i, j)) in self.index.iter().enumerate() {
            l[(i, j)] = if i == j { theta[k].exp() } else { theta[k] };
        }
        l
    }

    fn sigma_hat(&self, theta: &DVector<f64>) -> DMatrix<f64> {
        let l = self.factor(theta);
        let s = &l * l.transpose();
        (&s + s.transpose()) * 0.5
    }

    fn theta_from_matrix(&self, m: &DMatrix<f64>) -> DVector<f64> {
        let l = m
            .clone()
            .cholesky()
            .expect("initial covariance is positive definite")
            .l();
        DVector::from_iterator(
            self.index.len(),
            self.index
                .iter()
                .map(|&(i, j)| if i == j { l[(i, j)].ln() } else { l[(i, j)] }),
        )
    }

    /// f = ln det(Σ̂ + Σq), g = D_{½}(N(0,Σq), N(0,Σ̂)) and their gradients in θ.
    fn evaluate(&self, theta: &DVector<f64>) -> Eval {
        let d = self.d;
        let l = self.factor(theta);
        let sum = &l * l.transpose() + self.sigma_q.entries();
        let sum = (&sum + sum.transpose()) * 0.5;
        let (logdet_sum, sum_inv) = match sum.clone().cholesky() {
            Some(ch) => {
                let ld = 2.0 * ch.l().diagonal().iter().map(|v| v.ln()).sum::<f64>();
                (ld, ch.inverse())
            }
            None => (f64::INFINITY, DMatrix::zeros(d, d)),
        };
        let logdet_hat: f64 = 2.0
            * self
                .index
                .iter()
                .enumerate()
                .filter(|(_, (i, j))| i == j)
                .map(|(k, _)| theta[k])
                .sum::<f64>();
        let f = logdet_sum;
        let g =
            logdet_sum - d as f64 * std::f64::consts::LN_2 - 0.5 * logdet_hat - 0.5 * self.sigma_q.logdet();

        // ∂/∂L of ln det(LLᵀ + Σq) is 2 (LLᵀ+Σq)⁻¹ L.
        let dl = (&sum_inv * &l) * 2.0;
        let n = self.index.len();
        let mut grad_f = DVector::zeros(n);
        let mut grad_g = DVector::zeros(n);
        for (k, &(i, j)) in self.index.iter().enumerate() {
            if i == j {
                let chain = dl[(i, i)] * l[(i, i)];
                grad_f[k] = chain;
                grad_g[k] = chain - 1.0;
            } else {
                grad_f[k] = dl[(i, j)];
                grad_g[k] = dl[(i, j)];
            }
        }
        Eval { f, g, grad_f, grad_g }
    }

    fn al_value(&self, theta: &DVector<f64>, p: f64, mu: f64, rho: f64) -> (f64, DVector<f64>) {
        let e = self.evaluate(theta);
        let c = e.g - p;
        let (pen, slope) = if mu + rho * c > 0.0 {
            (mu * c + 0.5 * rho * c * c, mu + rho * c)
        } else {
            (-0.5 * mu * mu / rho, 0.0)
        };
        (e.f + pen, &e.grad_f + &e.grad_g * slope)
    }

    /// BFGS with Armijo backtracking on the augmented Lagrangian.
    fn minimize_al(
        &self,
        start: &DVector<f64>,
        p: f64,
        mu: f64,
        rho: f64,
        budget: usize,
    ) -> (DVector<f64>, usize) {
        let n = start.len();
        let mut x = start.clone();
        let (mut fx, mut gx) = self.al_value(&x, p, mu, rho);
        let mut hinv = DMatrix::<f64>::identity(n, n);
        let mut iters = 0;
        while iters < budget.min(5_000) {
            iters += 1;
            if gx.amax() <= 1e-13 * (1.0 + fx.abs()) {
                break;
            }
            let mut dir = -(&hinv * &gx);
            let mut slope = dir.dot(&gx);
            if !(slope < 0.0) {
                hinv = DMatrix::identity(n, n);
                dir = -gx.clone();
                slope = dir.dot(&gx);
            }
            let mut step = 1.0;
            let mut accepted = None;
            for _ in 0..60 {
                let cand = &x + &dir * step;
                let (fc, gc) = self.al_value(&cand, p, mu, rho);
                if fc.is_finite() && fc <= fx + 1e-4 * step * slope {
                    accepted = Some((cand, fc, gc));
                    break;
                }
                step *= 0.5;
            }
            let Some((xn, fn_, gn)) = accepted else {
                break;
            };
            let s = &xn - &x;
            let y = &gn - &gx;
            let sy = s.dot(&y);
            let f_change = (fx - fn_).abs();
            x = xn;
            gx = gn;
            let prev = fx;
            fx = fn_;
            if sy > 1e-300 {
                let rho_k = 1.0 / sy;
                let i = DMatrix::<f64>::identity(n, n);
                let left = &i - &s * y.transpose() * rho_k;
                let right = &i - &y * s.transpose() * rho_k;
                hinv = &left * &hinv * &right + &s * s.transpose() * rho_k;
            }
            if f_change <= 1e-16 * (1.0 + prev.abs()) && s.amax() <= 1e-14 * (1.0 + x.amax()) {
                break;
            }
        }
        (x, iters)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{eta, gamma};

    fn check(sigma_q: &SpdMatrix, p: f64) -> UpSolution {
        let sol = solve_up_for_posterior(sigma_q, p, &SolveOptions::default()).unwrap();
        let d = sigma_q.dim();
        let want = eta(p, d) * sigma_q.det_root();
        assert!(
            (sol.u - want).abs() <= 1e-4 * want,
            "P={p}, d={d}: U={} want {want}",
            sol.u
        );
        sol
    }

    #[test]
    fn perfect_perception_doubles() {
        let sq = SpdMatrix::from_row_slice(2, &[1.0, 0.3, 0.3, 0.5]).unwrap();
        let sol = check(&sq, 0.0);
        assert!((sol.u / sq.det_root() - 2.0).abs() < 1e-12);
        assert_eq!(sol.sigma_hat.entries(), sq.entries());
    }

    #[test]
    fn matches_analytic_optimum() {
        let sq = SpdMatrix::from_row_slice(2, &[1.0, 0.3, 0.3, 0.5]).unwrap();
        for p in [0.05, 0.3, 1.0, 3.0] {
            let sol = check(&sq, p);
            assert!(sol.converged, "P={p}");
            assert!(sol.constraint_activity <= 1e-6);
            let target = sq.entries() * gamma(p, 2);
            let rel = (sol.sigma_hat.entries() - &target).norm() / target.norm();
            assert!(rel <= 1e-4, "P={p}: proportionality error {rel}");
        }
    }

    #[test]
    fn large_budget_approaches_unconstrained() {
        let sq = SpdMatrix::from_diagonal(&[0.4, 0.9]).unwrap();
        let sol = solve_up_for_posterior(&sq, 100.0, &SolveOptions::default()).unwrap();
        assert!((sol.u - sq.det_root()).abs() <= 1e-3 * sq.det_root());
    }

    #[test]
    fn negative_budget_rejected() {
        let sq = SpdMatrix::identity(1);
        assert!(solve_up_for_posterior(&sq, -0.1, &SolveOptions::default()).is_err());
    }

    #[test]
    fn iteration_cap_flags_nonconvergence() {
        let sq = SpdMatrix::from_diagonal(&[0.4, 0.9]).unwrap();
        let opts = SolveOptions {
            max_iters: 2,
            ..SolveOptions::default()
        };
        let sol = solve_up_for_posterior(&sq, 1.0, &opts).unwrap();
        assert!(!sol.converged);
        assert!(matches!(
            sol.require_converged(),
            Err(Error::NonConvergence { .. })
        ));
    }
}
