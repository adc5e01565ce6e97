use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use upplane::bounds::PlaneContext;
use upplane::imageval::{
    classify_records, discover_algorithms, evaluate_algorithm, read_context, write_gaussian_fixture,
    write_records_csv, EvaluateConfig, EvaluationReport, FixtureContext, GaussianFixtureSpec,
    PerceptionConfig, RunMetadata, CONTEXT_FILE, POOLING_NOTE,
};

use super::{timestamp, VERSION};
use crate::config::{pick, usage, write_json, write_text, CliError, CliResult, Settings};
use crate::svg::{Plane, PlanePoint};

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// A manifest, a directory holding manifest.json, or a directory whose
    /// subdirectories each hold one (one algorithm per subdirectory).
    dataset: PathBuf,
    /// Plane context JSON {d, n_xy, n_xgy}; defaults to <dataset>/context.json.
    #[arg(long)]
    context: Option<PathBuf>,
    /// Patch side length.
    #[arg(long)]
    patch_size: Option<usize>,
    /// Patch stride (default: the context value, else 3).
    #[arg(long)]
    patch_stride: Option<usize>,
    /// Covariance ridge added before the determinant.
    #[arg(long)]
    ridge: Option<f64>,
    /// Patches per side used by the KDE (0 = all).
    #[arg(long)]
    max_patches: Option<usize>,
    /// Relative tolerance of the region classification.
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Serialize)]
struct ConfigEcho<'a> {
    evaluate: &'a EvaluateConfig,
    tolerance: f64,
    context: Option<FixtureContext>,
    dataset: String,
}

pub fn evaluate(s: &Settings, a: &EvaluateArgs) -> CliResult<()> {
    let f = &s.file.evaluate;
    if !a.dataset.exists() {
        return Err(CliError::Runtime(format!(
            "dataset {} does not exist",
            a.dataset.display()
        )));
    }
    let algorithms = discover_algorithms(&a.dataset)?;
    let context_path = a.context.clone().or_else(|| f.context.clone()).or_else(|| {
        let root = if a.dataset.is_file() {
            a.dataset.parent().map(Path::to_path_buf)
        } else {
            Some(a.dataset.clone())
        };
        root.map(|r| r.join(CONTEXT_FILE)).filter(|p| p.is_file())
    });
    let context = match &context_path {
        Some(p) if !p.is_file() => {
            return Err(CliError::Runtime(format!("missing context file {}", p.display())))
        }
        Some(p) => Some(read_context(p)?),
        None => None,
    };
    let defaults = EvaluateConfig::default();
    let stride_default = context.map(|c| c.patch_stride).unwrap_or(defaults.patch_stride);
    let cfg = EvaluateConfig {
        patch_size: pick(&a.patch_size, &f.patch_size, defaults.patch_size),
        patch_stride: pick(&a.patch_stride, &f.patch_stride, stride_default),
        ridge: pick(&a.ridge, &f.ridge, defaults.ridge),
        perception: PerceptionConfig {
            kind: s.kind,
            max_patches: pick(&a.max_patches, &f.max_patches, defaults.perception.max_patches),
            ..defaults.perception
        },
        exec: defaults.exec,
    };
    let tolerance = pick(&a.tolerance, &f.tolerance, 0.02);
    if cfg.patch_size == 0 || cfg.patch_stride == 0 || !(cfg.ridge >= 0.0) || !(tolerance >= 0.0) {
        return Err(usage(
            "patch size and stride must be positive; ridge and tolerance nonnegative",
        ));
    }

    let mut records = Vec::new();
    for (name, manifest) in &algorithms {
        let rec = evaluate_algorithm(name, manifest, &cfg)?;
        println!(
            "{name}: perception={:.6} uncertainty={:.6e} mse={:.6e} psnr={:.3} ssim={:.4} ({} images, {} patches)",
            rec.perception, rec.uncertainty, rec.mse, rec.psnr, rec.ssim, rec.n_images, rec.n_patches
        );
        records.push(rec);
    }
    let mut notes = vec![POOLING_NOTE.to_string()];
    let plane_ctx = match context {
        Some(c) => {
            let ctx = PlaneContext::new(c.d, c.n_xy, c.n_xgy, s.kind)?;
            classify_records(&mut records, &ctx, tolerance, cfg.ridge)?;
            Some(ctx)
        }
        None => {
            notes.push("no plane context supplied; records are not classified".into());
            None
        }
    };
    for r in &records {
        if let Some(region) = r.region {
            println!("{}: {}", r.algorithm, region.as_str());
        }
    }

    let report = EvaluationReport {
        metadata: RunMetadata {
            tool: "upplane evaluate".into(),
            version: VERSION.into(),
            seed: s.seed,
            config: serde_json::to_value(ConfigEcho {
                evaluate: &cfg,
                tolerance,
                context,
                dataset: a.dataset.display().to_string(),
            })
            .map_err(|e| CliError::Runtime(e.to_string()))?,
            notes,
        },
        records,
    };
    write_json(&s.out_path("evaluation.json")?, &report)?;
    let mut buf = Vec::new();
    write_records_csv(&mut buf, &report.records).map_err(|e| CliError::Runtime(e.to_string()))?;
    write_text(&s.out_path("evaluation.csv")?, &String::from_utf8_lossy(&buf))?;

    let (d, n_xy, n_xgy) = match &plane_ctx {
        Some(c) => (c.d(), c.n_xy(), c.n_xgy()),
        None => {
            let u = report
                .records
                .iter()
                .map(|r| r.uncertainty)
                .fold(f64::INFINITY, f64::min);
            (cfg.patch_size * cfg.patch_size, u, u)
        }
    };
    let plane = Plane {
        title: "Restoration algorithms on the uncertainty–perception plane".into(),
        d,
        n_xy,
        n_xgy,
        kind: s.kind,
        p_max: 0.0,
        extra_dims: Vec::new(),
        points: report
            .records
            .iter()
            .map(|r| PlanePoint {
                label: r.algorithm.clone(),
                perception: r.perception,
                uncertainty: r.uncertainty,
                region: r.region,
            })
            .collect(),
        timestamp: timestamp(s),
    };
    write_text(&s.out_path("plane.svg")?, &plane.render())
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    /// Target directory (default: <out-dir>/fixture).
    #[arg(long)]
    dir: Option<PathBuf>,
    /// Number of images.
    #[arg(long)]
    images: Option<usize>,
    /// Image side length.
    #[arg(long)]
    size: Option<usize>,
    /// Per-pixel prior standard deviation.
    #[arg(long)]
    prior_std: Option<f64>,
    /// Fraction of prior variance removed by the posterior mean.
    #[arg(long)]
    variance_reduction: Option<f64>,
    /// Also write an identity restoration (restored = truth).
    #[arg(long)]
    identity: bool,
}

pub fn make_fixture(s: &Settings, a: &FixtureArgs) -> CliResult<()> {
    let f = &s.file.fixture;
    let defaults = GaussianFixtureSpec::default();
    let size = pick(&a.size, &f.size, defaults.height);
    let spec = GaussianFixtureSpec {
        n_images: pick(&a.images, &f.images, defaults.n_images),
        height: size,
        width: size,
        prior_std: pick(&a.prior_std, &f.prior_std, defaults.prior_std),
        variance_reduction: pick(
            &a.variance_reduction,
            &f.variance_reduction,
            defaults.variance_reduction,
        ),
        include_identity: a.identity || f.identity.unwrap_or(false),
        seed: s.seed,
        ..defaults
    };
    spec.validate().map_err(|e| usage(e.to_string()))?;
    let dir = match &a.dir {
        Some(d) => d.clone(),
        None => s.out_path("fixture")?,
    };
    let ctx = write_gaussian_fixture(&dir, &spec)?;
    println!(
        "fixture: {} images {}x{} → {} (σq² = N(X|Y) = {:.6e}, patch d = {})",
        spec.n_images,
        size,
        size,
        dir.display(),
        ctx.sigma_q2,
        ctx.d
    );
    Ok(())
}
