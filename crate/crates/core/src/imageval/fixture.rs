//! Synthetic restoration dataset with a known inverse problem.
//!
//! Pixels are i.i.d. X ~ N(μ, s²) and observed as Y = X + W, W ~ N(0, σw²).
//! Two restorations are written: the posterior mean and a posterior sample
//! (posterior mean plus N(0, σq²) noise). Every 9×9 patch then has posterior
//! covariance σq²·I, so N(X|Y) = N(X_G|Y) = σq² exactly.

use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::image::{save_raw_image, ImageTensor};
use super::pipeline::{ManifestEntry, MANIFEST_FILE};
use crate::error::{Error, Result};
use crate::par::Exec;

pub const CONTEXT_FILE: &str = "context.json";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GaussianFixtureSpec {
    pub n_images: usize,
    pub height: usize,
    pub width: usize,
    pub mean: f64,
    pub prior_std: f64,
    /// 1 − σq²/s²: the fraction of prior variance the observation removes.
    pub variance_reduction: f64,
    pub patch_size: usize,
    pub include_identity: bool,
    pub seed: u64,
}

impl Default for GaussianFixtureSpec {
    fn default() -> Self {
        Self {
            n_images: 64,
            height: 32,
            width: 32,
            mean: 0.5,
            prior_std: 0.08,
            variance_reduction: 0.002,
            patch_size: 9,
            include_identity: false,
            seed: 0,
        }
    }
}

/// Analytic quantities of the fixture problem, written to `context.json`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FixtureContext {
    /// Patch dimension size²·channels.
    pub d: usize,
    pub n_xy: f64,
    pub n_xgy: f64,
    pub sigma_q2: f64,
    pub sigma_w2: f64,
    pub prior_var: f64,
    /// Stride the evaluation should use.
    pub patch_stride: usize,
    pub seed: u64,
}

impl GaussianFixtureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_images == 0 || self.height < self.patch_size || self.width < self.patch_size {
            return Err(Error::Config(
                "fixture images must hold at least one patch".into(),
            ));
        }
        if !(self.prior_std > 0.0) || !(self.variance_reduction > 0.0 && self.variance_reduction < 1.0) {
            return Err(Error::Config(
                "prior_std must be > 0 and variance_reduction in (0, 1)".into(),
            ));
        }
        Ok(())
    }

    pub fn context(&self) -> FixtureContext {
        let s2 = self.prior_std * self.prior_std;
        let sigma_q2 = (1.0 - self.variance_reduction) * s2;
        FixtureContext {
            d: self.patch_size * self.patch_size,
            n_xy: sigma_q2,
            n_xgy: sigma_q2,
            sigma_q2,
            sigma_w2: s2 * sigma_q2 / (s2 - sigma_q2),
            prior_var: s2,
            patch_stride: 1,
            seed: self.seed,
        }
    }
}

struct FixtureImages {
    truth: ImageTensor,
    degraded: ImageTensor,
    mean: ImageTensor,
    sample: ImageTensor,
}

fn generate(spec: &GaussianFixtureSpec, ctx: &FixtureContext, index: usize) -> Result<FixtureImages> {
    let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
    rng.set_stream(index as u64);
    let mut z = || -> f64 { StandardNormal.sample(&mut rng) };
    let npx = spec.height * spec.width;
    let gain = ctx.prior_var / (ctx.prior_var + ctx.sigma_w2);
    let (mut x, mut y, mut m, mut s) = (
        Vec::with_capacity(npx),
        Vec::with_capacity(npx),
        Vec::with_capacity(npx),
        Vec::with_capacity(npx),
    );
    for _ in 0..npx {
        let xi = spec.mean + spec.prior_std * z();
        let yi = xi + ctx.sigma_w2.sqrt() * z();
        let mi = spec.mean + gain * (yi - spec.mean);
        let si = mi + ctx.sigma_q2.sqrt() * z();
        x.push(xi);
        y.push(yi);
        m.push(mi);
        s.push(si);
    }
    let img = |v| ImageTensor::from_clamped(spec.height, spec.width, 1, v);
    Ok(FixtureImages {
        truth: img(x)?,
        degraded: img(y)?,
        mean: img(m)?,
        sample: img(s)?,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").map_err(|e| Error::io(path, e))
}

/// Writes `truth/`, `degraded/`, one directory per restoration with its
/// manifest, and `context.json`.
pub fn write_gaussian_fixture(dir: &Path, spec: &GaussianFixtureSpec) -> Result<FixtureContext> {
    spec.validate()?;
    let ctx = spec.context();
    let mut algos = vec!["posterior-mean", "posterior-sample"];
    if spec.include_identity {
        algos.push("identity");
    }
    for sub in ["truth", "degraded"].iter().chain(algos.iter()) {
        let p = dir.join(sub);
        fs::create_dir_all(&p).map_err(|e| Error::io(&p, e))?;
    }
    let written = Exec::default().map(spec.n_images, |i| -> Result<()> {
        let imgs = generate(spec, &ctx, i)?;
        let name = format!("img_{i:03}.f32");
        save_raw_image(&dir.join("truth").join(&name), &imgs.truth)?;
        save_raw_image(&dir.join("degraded").join(&name), &imgs.degraded)?;
        save_raw_image(&dir.join("posterior-mean").join(&name), &imgs.mean)?;
        save_raw_image(&dir.join("posterior-sample").join(&name), &imgs.sample)?;
        Ok(())
    });
    written.into_iter().collect::<Result<Vec<()>>>()?;
    for algo in &algos {
        let restored_dir = if *algo == "identity" { "truth" } else { algo };
        let entries: Vec<ManifestEntry> = (0..spec.n_images)
            .map(|i| {
                let name = format!("img_{i:03}.f32");
                ManifestEntry {
                    truth: Path::new("..").join("truth").join(&name),
                    degraded: Path::new("..").join("degraded").join(&name),
                    restored: Path::new("..").join(restored_dir).join(&name),
                }
            })
            .collect();
        write_json(&dir.join(algo).join(MANIFEST_FILE), &entries)?;
    }
    write_json(&dir.join(CONTEXT_FILE), &ctx)?;
    Ok(ctx)
}

pub fn read_context(path: &Path) -> Result<FixtureContext> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}
