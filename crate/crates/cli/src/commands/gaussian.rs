use clap::Args;
use serde::Serialize;
use upplane::bounds::example1_up;
use upplane::gaussianlab::{
    example1_oracle, inherent_uncertainty, random_problem, sweep_up, write_sweep_csv, SolveOptions,
};

use super::VERSION;
use crate::config::{pick, usage, write_json, write_text, CliError, CliResult, Settings};

/// Largest dimension verify-gaussian accepts.
pub const DESK_SCALE_MAX_DIM: usize = 8;

const DEFAULT_P_GRID: [f64; 10] = [0.0, 0.01, 0.05, 0.1, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

#[derive(Debug, Args)]
pub struct VerifyGaussianArgs {
    /// Problem dimensions, comma separated (each ≤ 8).
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Perception budgets, comma separated.
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    /// Largest accepted relative error against η(P)·N(X|Y).
    #[arg(long)]
    tolerance: Option<f64>,
    /// Cap on the total number of inner solver iterations.
    #[arg(long)]
    max_iters: Option<usize>,
}

#[derive(Serialize)]
struct GaussianRow {
    d: usize,
    #[serde(rename = "P")]
    p: f64,
    u_numeric: f64,
    u_analytic: f64,
    inherent: f64,
    ratio_to_inherent: f64,
    rel_error: f64,
    constraint_activity: f64,
    iterations: usize,
    converged: bool,
    pass: bool,
}

#[derive(Serialize)]
struct GaussianSummary {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    dims: Vec<usize>,
    p_grid: Vec<f64>,
    tolerance: f64,
    activity_threshold: f64,
    rows: Vec<GaussianRow>,
    failures: usize,
    pass: bool,
}

/// Boundary-attainment threshold on |D − P|.
const ACTIVITY_THRESHOLD: f64 = 1e-3;

pub fn verify_gaussian(s: &Settings, a: &VerifyGaussianArgs) -> CliResult<()> {
    let f = &s.file.verify_gaussian;
    let dims = pick(&a.dims, &f.dims, vec![1, 2, 4]);
    let p_grid = pick(&a.p_grid, &f.p_grid, DEFAULT_P_GRID.to_vec());
    let tolerance = pick(&a.tolerance, &f.tolerance, 1e-3);
    let opts = SolveOptions {
        max_iters: pick(&a.max_iters, &f.max_iters, SolveOptions::default().max_iters),
        ..SolveOptions::default()
    };
    if dims.is_empty() || dims.contains(&0) {
        return Err(usage("--dims must list positive dimensions"));
    }
    if let Some(&d) = dims.iter().find(|&&d| d > DESK_SCALE_MAX_DIM) {
        return Err(usage(format!(
            "DeskScale: dimension {d} exceeds the desk-scale limit of {DESK_SCALE_MAX_DIM}"
        )));
    }
    if p_grid.is_empty() || p_grid.iter().any(|p| !(p.is_finite() && *p >= 0.0)) {
        return Err(usage("--p-grid must list finite nonnegative budgets"));
    }

    let mut rows = Vec::new();
    for &d in &dims {
        let problem = random_problem(d, s.seed.wrapping_add(d as u64))?;
        let inherent = inherent_uncertainty(&problem);
        let sweep = sweep_up(&problem, &p_grid, &opts)?;
        let mut buf = Vec::new();
        write_sweep_csv(&mut buf, &sweep).map_err(|e| CliError::Runtime(e.to_string()))?;
        write_text(
            &s.out_path(&format!("sweep_d{d}.csv"))?,
            &String::from_utf8_lossy(&buf),
        )?;
        for r in sweep {
            let rel_error = (r.u_numeric - r.u_analytic).abs() / r.u_analytic;
            let active = r.p == 0.0 || r.constraint_activity <= ACTIVITY_THRESHOLD;
            rows.push(GaussianRow {
                d,
                p: r.p,
                u_numeric: r.u_numeric,
                u_analytic: r.u_analytic,
                inherent,
                ratio_to_inherent: r.u_numeric / inherent,
                rel_error,
                constraint_activity: r.constraint_activity,
                iterations: r.iterations,
                converged: r.converged,
                pass: r.converged && rel_error <= tolerance && active,
            });
        }
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    for r in &rows {
        println!(
            "d={} P={:<6} U/N={:.6} rel_err={:.2e} activity={:.1e} {}",
            r.d,
            r.p,
            r.ratio_to_inherent,
            r.rel_error,
            r.constraint_activity,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    let summary = GaussianSummary {
        tool: "upplane verify-gaussian",
        version: VERSION,
        seed: s.seed,
        dims,
        p_grid,
        tolerance,
        activity_threshold: ACTIVITY_THRESHOLD,
        rows,
        failures,
        pass: failures == 0,
    };
    write_json(&s.out_path("verify_gaussian.json")?, &summary)?;
    if failures > 0 {
        return Err(CliError::Runtime(format!(
            "{failures} sweep rows exceed tolerance {tolerance}"
        )));
    }
    Ok(())
}

#[derive(Debug, Args)]
pub struct VerifyExample1Args {
    /// Noise variances σ², comma separated.
    #[arg(long, value_delimiter = ',')]
    sigma2: Option<Vec<f64>>,
    /// Perception budgets, comma separated.
    #[arg(long, value_delimiter = ',')]
    p_grid: Option<Vec<f64>>,
    /// Grid resolution of the brute-force oracle (≥ 1000).
    #[arg(long)]
    grid: Option<usize>,
    /// Largest accepted error against the oracle.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Serialize)]
struct Example1Row {
    sigma2: f64,
    #[serde(rename = "P")]
    p: f64,
    u_closed: f64,
    u_oracle: f64,
    sigma_z_star: f64,
    abs_error: f64,
    pass: bool,
}

#[derive(Serialize)]
struct Example1Summary {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    grid: usize,
    tolerance: f64,
    rows: Vec<Example1Row>,
    /// U(0)/N(X|Y) and U(P_large)/N(X|Y) per σ².
    limits: Vec<(f64, f64, f64)>,
    pass: bool,
}

pub fn verify_example1(s: &Settings, a: &VerifyExample1Args) -> CliResult<()> {
    let f = &s.file.verify_example1;
    let sigma2 = pick(&a.sigma2, &f.sigma2, vec![0.25, 1.0, 4.0]);
    let p_grid = pick(&a.p_grid, &f.p_grid, vec![0.0, 0.1, 0.5, 1.0, 2.0, 5.0]);
    let grid = pick(&a.grid, &f.grid, 300_000);
    let tolerance = pick(&a.tolerance, &f.tolerance, 1e-4);
    if grid < 1000 {
        return Err(usage("--grid must be at least 1000"));
    }
    if sigma2.iter().any(|v| !(v.is_finite() && *v > 0.0))
        || p_grid.iter().any(|p| !(p.is_finite() && *p >= 0.0))
    {
        return Err(usage("σ² must be positive and P nonnegative"));
    }
    let mut rows = Vec::new();
    let mut csv = String::from("sigma2,P,U_closed,U_oracle,sigma_z_star,abs_error\n");
    for &s2 in &sigma2 {
        for &p in &p_grid {
            let (u, sz) = example1_up(p, s2);
            let o = example1_oracle(p, s2, grid);
            let err = (u - o).abs();
            csv.push_str(&format!("{s2},{p},{u},{o},{sz},{err}\n"));
            rows.push(Example1Row {
                sigma2: s2,
                p,
                u_closed: u,
                u_oracle: o,
                sigma_z_star: sz,
                abs_error: err,
                pass: err <= tolerance,
            });
        }
    }
    let limits: Vec<(f64, f64, f64)> = sigma2
        .iter()
        .map(|&s2| {
            let n = s2 / (1.0 + s2);
            (s2, example1_up(0.0, s2).0 / n, example1_up(1e12, s2).0 / n)
        })
        .collect();
    let limits_ok = limits
        .iter()
        .all(|&(_, a, b)| (a - 2.0).abs() <= 1e-6 && (b - 1.0).abs() <= 1e-6);
    let failures = rows.iter().filter(|r| !r.pass).count();
    for r in &rows {
        println!(
            "σ²={:<5} P={:<4} U={:.8} oracle={:.8} |Δ|={:.1e} {}",
            r.sigma2,
            r.p,
            r.u_closed,
            r.u_oracle,
            r.abs_error,
            if r.pass { "pass" } else { "FAIL" }
        );
    }
    write_text(&s.out_path("example1.csv")?, &csv)?;
    let pass = failures == 0 && limits_ok;
    write_json(
        &s.out_path("example1.json")?,
        &Example1Summary {
            tool: "upplane verify-example1",
            version: VERSION,
            seed: s.seed,
            grid,
            tolerance,
            rows,
            limits,
            pass,
        },
    )?;
    if !pass {
        return Err(CliError::Runtime(format!(
            "{failures} rows exceed tolerance {tolerance} (limits ok: {limits_ok})"
        )));
    }
    Ok(())
}
