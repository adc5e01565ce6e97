use std::io::Write;

use serde::{Deserialize, Serialize};

use super::optimize::{solve_up_gaussian, SolveOptions};
use super::problem::{inherent_uncertainty, LinearGaussianProblem};
use crate::bounds::eta;
use crate::error::Result;

/// Perception index of the scalar family X̂ = E[X|Y] + Z, Z ~ N(0, σz²):
/// (σq² + σz²)/(2σzσq) − 1.
pub fn example1_divergence(sigma_q: f64, sigma_z: f64) -> f64 {
    (sigma_q * sigma_q + sigma_z * sigma_z) / (2.0 * sigma_z * sigma_q) - 1.0
}

/// Brute-force search over σz ∈ {3σq·i/grid : i = 1..grid} for the smallest
/// σq² + σz² whose divergence is within the budget.
pub fn example1_oracle(p: f64, sigma2: f64, grid: usize) -> f64 {
    let grid = grid.max(1000);
    let sq2 = sigma2 / (1.0 + sigma2);
    let sq = sq2.sqrt();
    let mut best = f64::INFINITY;
    for i in 1..=grid {
        let sz = 3.0 * sq * i as f64 / grid as f64;
        if example1_divergence(sq, sz) <= p + 1e-12 {
            best = best.min(sq2 + sz * sz);
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "P")]
    pub p: f64,
    #[serde(rename = "U_numeric")]
    pub u_numeric: f64,
    #[serde(rename = "U_analytic")]
    pub u_analytic: f64,
    pub constraint_activity: f64,
    pub iterations: usize,
    pub converged: bool,
}

pub fn sweep_up(problem: &LinearGaussianProblem, grid: &[f64], opts: &SolveOptions) -> Result<Vec<SweepRow>> {
    let n = inherent_uncertainty(problem);
    let d = problem.dim();
    grid.iter()
        .map(|&p| {
            let sol = solve_up_gaussian(problem, p, opts)?;
            Ok(SweepRow {
                p,
                u_numeric: sol.u,
                u_analytic: eta(p, d) * n,
                constraint_activity: sol.constraint_activity,
                iterations: sol.iterations,
                converged: sol.converged,
            })
        })
        .collect()
}

pub fn write_sweep_csv<W: Write>(mut w: W, rows: &[SweepRow]) -> std::io::Result<()> {
    writeln!(w, "P,U_numeric,U_analytic,constraint_activity,iterations")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{}",
            r.p, r.u_numeric, r.u_analytic, r.constraint_activity, r.iterations
        )?;
    }
    Ok(())
}
