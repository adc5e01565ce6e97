use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use upplane::estimators::{
    hellinger_from_log_bc, kde_log_bhattacharyya, knn_entropy, renyi_from_log_bc, BandwidthRule, KdeConfig,
    KnnConfig,
};
use upplane::io::load_samples;
use upplane::numstats::{
    entropy_power, gaussian_entropy, sample_covariance, GaussianModel, SampleSet, SpdMatrix,
};

use super::VERSION;
use crate::config::{pick, usage, write_json, CliError, CliResult, Settings};

#[derive(Debug, Args)]
pub struct EntropyArgs {
    /// Sample file (.csv, or .f32/.bin with a JSON sidecar). Without it, a
    /// standard normal sample of --dim × --n is drawn from --seed.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Neighbor order k.
    #[arg(long)]
    k: Option<usize>,
    /// Dimension of the synthetic sample.
    #[arg(long)]
    dim: Option<usize>,
    /// Size of the synthetic sample.
    #[arg(long)]
    n: Option<usize>,
}

#[derive(Serialize)]
struct EntropyReport {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    source: String,
    n: usize,
    d: usize,
    k: usize,
    entropy: f64,
    entropy_power: f64,
    /// det(Σ̂)^{1/d} of the sample covariance: the Gaussian envelope.
    gaussian_envelope: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    analytic_entropy: Option<f64>,
}

fn require_file(p: &Path) -> CliResult<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(CliError::Runtime(format!("missing input file {}", p.display())))
    }
}

pub fn entropy(s: &Settings, a: &EntropyArgs) -> CliResult<()> {
    let f = &s.file.entropy;
    let k = pick(&a.k, &f.k, 3);
    let (samples, source, analytic) = match &a.input {
        Some(p) => {
            require_file(p)?;
            (load_samples(p)?, p.display().to_string(), None)
        }
        None => {
            let d = pick(&a.dim, &f.dim, 2);
            let n = pick(&a.n, &f.n, 10_000);
            if d == 0 || n == 0 {
                return Err(usage("--dim and --n must be positive"));
            }
            let cov = SpdMatrix::identity(d);
            let h = gaussian_entropy(&cov);
            let set = GaussianModel::zero_mean(cov).sample(n, s.seed)?;
            (set, format!("synthetic N(0, I_{d})"), Some(h))
        }
    };
    let h = knn_entropy(&samples, &KnnConfig::with_k(k))?;
    let report = EntropyReport {
        tool: "upplane entropy",
        version: VERSION,
        seed: s.seed,
        source,
        n: samples.n(),
        d: samples.d(),
        k,
        entropy: h,
        entropy_power: entropy_power(h, samples.d())?,
        gaussian_envelope: envelope(&samples)?,
        analytic_entropy: analytic,
    };
    println!(
        "entropy: n={} d={} k={} h={:.6} N={:.6}",
        report.n, report.d, k, report.entropy, report.entropy_power
    );
    write_json(&s.out_path("entropy.json")?, &report)
}

fn envelope(s: &SampleSet) -> CliResult<f64> {
    Ok(sample_covariance(s, 0.0)?.det_root())
}

#[derive(Debug, Args)]
pub struct DivergenceArgs {
    /// Reference samples (p).
    #[arg(long)]
    p: PathBuf,
    /// Compared samples (q).
    #[arg(long)]
    q: PathBuf,
    /// silverman, scott, or a fixed positive width.
    #[arg(long)]
    bandwidth: Option<String>,
    /// Lower bound on leave-one-out densities.
    #[arg(long)]
    density_floor: Option<f64>,
}

#[derive(Serialize)]
struct DivergenceReport {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    p: String,
    q: String,
    n_p: usize,
    n_q: usize,
    d: usize,
    kde: KdeConfig,
    renyi_half: f64,
    hellinger: f64,
    selected: f64,
    divergence: upplane::bounds::DivergenceKind,
}

pub fn parse_bandwidth(text: &str) -> CliResult<BandwidthRule> {
    match text {
        "silverman" => Ok(BandwidthRule::Silverman),
        "scott" => Ok(BandwidthRule::Scott),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|h| h.is_finite() && *h > 0.0)
            .map(BandwidthRule::Fixed)
            .ok_or_else(|| {
                usage(format!(
                    "--bandwidth must be silverman, scott or a positive number, got {other:?}"
                ))
            }),
    }
}

pub fn divergence(s: &Settings, a: &DivergenceArgs) -> CliResult<()> {
    let f = &s.file.kde;
    let bandwidth = parse_bandwidth(&pick(&a.bandwidth, &f.bandwidth, "silverman".into()))?;
    let kde = KdeConfig {
        bandwidth,
        density_floor: pick(
            &a.density_floor,
            &f.density_floor,
            KdeConfig::default().density_floor,
        ),
        ..KdeConfig::default()
    };
    kde.validate().map_err(|e| usage(e.to_string()))?;
    require_file(&a.p)?;
    require_file(&a.q)?;
    let p = load_samples(&a.p)?;
    let q = load_samples(&a.q)?;
    let log_bc = kde_log_bhattacharyya(&p, &q, &kde)?;
    let renyi_half = renyi_from_log_bc(log_bc);
    let hellinger = hellinger_from_log_bc(log_bc);
    let selected = match s.kind {
        upplane::bounds::DivergenceKind::RenyiHalf => renyi_half,
        upplane::bounds::DivergenceKind::Hellinger => hellinger,
    };
    println!("divergence: Rényi-½ = {renyi_half:.6}, Hellinger = {hellinger:.6}");
    write_json(
        &s.out_path("divergence.json")?,
        &DivergenceReport {
            tool: "upplane divergence",
            version: VERSION,
            seed: s.seed,
            p: a.p.display().to_string(),
            q: a.q.display().to_string(),
            n_p: p.n(),
            n_q: q.n(),
            d: p.d(),
            kde,
            renyi_half,
            hellinger,
            selected,
            divergence: s.kind,
        },
    )
}
