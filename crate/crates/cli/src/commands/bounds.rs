use clap::Args;
use serde::Serialize;
use upplane::bounds::{curve_rows, eta_for, write_curve_csv, DivergenceKind, PGrid, PlaneContext};

use super::{timestamp, VERSION};
use crate::config::{pick, usage, write_json, write_text, CliError, CliResult, Settings};
use crate::svg::Plane;

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Dimensions, comma separated; the first one is drawn with regions.
    #[arg(long, value_delimiter = ',')]
    dims: Option<Vec<usize>>,
    /// Smallest perception budget P.
    #[arg(long)]
    p_min: Option<f64>,
    /// Largest perception budget P.
    #[arg(long)]
    p_max: Option<f64>,
    /// Number of grid points (≥ 2).
    #[arg(long)]
    steps: Option<usize>,
    /// Inherent uncertainty N(X|Y).
    #[arg(long)]
    n_xy: Option<f64>,
    /// Gaussian envelope N(X_G|Y).
    #[arg(long)]
    n_xgy: Option<f64>,
}

#[derive(Serialize)]
struct EtaAt {
    d: usize,
    eta: f64,
}

#[derive(Serialize)]
struct BoundsSummary {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    divergence: DivergenceKind,
    dims: Vec<usize>,
    p_min: f64,
    p_max: f64,
    steps: usize,
    n_xy: f64,
    n_xgy: f64,
    files: Vec<String>,
    /// η at P = 1 (P = 0.5 for Hellinger) per dimension.
    eta_probe: Vec<EtaAt>,
    probe_p: f64,
    increasing_in_d: bool,
}

pub fn bounds(s: &Settings, a: &BoundsArgs) -> CliResult<()> {
    let f = &s.file.bounds;
    let dims = pick(&a.dims, &f.dims, vec![1]);
    let p_min = pick(&a.p_min, &f.p_min, 0.0);
    let p_max = pick(
        &a.p_max,
        &f.p_max,
        if s.kind == DivergenceKind::Hellinger {
            1.0
        } else {
            5.0
        },
    );
    let steps = pick(&a.steps, &f.steps, 101);
    let n_xy = pick(&a.n_xy, &f.n_xy, 1.0);
    let n_xgy = pick(&a.n_xgy, &f.n_xgy, n_xy);
    if dims.is_empty() || dims.contains(&0) {
        return Err(usage("--dims must list positive dimensions"));
    }
    let grid = PGrid::new(p_min, p_max, steps)?;
    if p_min < 0.0 || (s.kind == DivergenceKind::Hellinger && p_max > 1.0) {
        return Err(usage(format!(
            "perception grid [{p_min}, {p_max}] outside the domain of {}",
            s.kind.as_str()
        )));
    }
    let points = grid.points();
    let mut files = Vec::new();
    for &d in &dims {
        let ctx = PlaneContext::new(d, n_xy, n_xgy, s.kind).map_err(|e| usage(e.to_string()))?;
        let rows = curve_rows(&ctx, &points)?;
        let name = format!("bounds_d{d}.csv");
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &rows).map_err(|e| CliError::Runtime(e.to_string()))?;
        write_text(&s.out_path(&name)?, &String::from_utf8_lossy(&buf))?;
        files.push(name);
    }

    let plane = Plane {
        title: format!("Uncertainty–perception plane, d = {}", dims[0]),
        d: dims[0],
        n_xy,
        n_xgy,
        kind: s.kind,
        p_max,
        extra_dims: dims[1..].to_vec(),
        points: Vec::new(),
        timestamp: timestamp(s),
    };
    write_text(&s.out_path("plane.svg")?, &plane.render())?;
    files.push("plane.svg".into());

    let probe_p = if s.kind == DivergenceKind::Hellinger {
        0.5
    } else {
        1.0
    };
    let mut sorted = dims.clone();
    sorted.sort_unstable();
    sorted.dedup();
    let eta_probe: Vec<EtaAt> = sorted
        .iter()
        .map(|&d| {
            Ok(EtaAt {
                d,
                eta: eta_for(s.kind, probe_p, d)?,
            })
        })
        .collect::<upplane::Result<_>>()?;
    let increasing_in_d = eta_probe.windows(2).all(|w| w[1].eta > w[0].eta);
    let summary = BoundsSummary {
        tool: "upplane bounds",
        version: VERSION,
        seed: s.seed,
        divergence: s.kind,
        dims: dims.clone(),
        p_min,
        p_max,
        steps,
        n_xy,
        n_xgy,
        files,
        eta_probe,
        probe_p,
        increasing_in_d,
    };
    write_json(&s.out_path("bounds.json")?, &summary)?;
    println!(
        "bounds: d = {:?}, P ∈ [{p_min}, {p_max}] ({steps} points), η(0) = {} → {}",
        dims,
        eta_for(s.kind, p_min, dims[0])?,
        s.out_dir.display()
    );
    Ok(())
}
