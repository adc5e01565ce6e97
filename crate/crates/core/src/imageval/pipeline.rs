use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::image::{load_image, ImageTensor};
use super::metrics::{distortion_metrics, psnr_from_mse};
use super::patches::{
    extract_patches_with, perception_index, uncertainty_upper, PatchSet, PerceptionConfig,
    DEFAULT_PATCH_SIZE, DEFAULT_RIDGE, DEFAULT_STRIDE,
};
use crate::bounds::{classify_point, DivergenceKind, PlaneContext, Region, UpPoint};
use crate::error::{Error, Result};
use crate::par::Exec;

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MAX_SKIP_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub truth: PathBuf,
    pub degraded: PathBuf,
    pub restored: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvaluateConfig {
    pub patch_size: usize,
    pub patch_stride: usize,
    pub ridge: f64,
    pub perception: PerceptionConfig,
    #[serde(skip)]
    pub exec: Exec,
}

impl Default for EvaluateConfig {
    fn default() -> Self {
        Self {
            patch_size: DEFAULT_PATCH_SIZE,
            patch_stride: DEFAULT_STRIDE,
            ridge: DEFAULT_RIDGE,
            perception: PerceptionConfig::default(),
            exec: Exec::default(),
        }
    }
}

mod inf_as_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() && *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Str(s) if s == "inf" => Ok(f64::INFINITY),
            Repr::Str(s) => Err(serde::de::Error::custom(format!("invalid number {s}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationRecord {
    pub algorithm: String,
    pub perception: f64,
    pub divergence_kind: DivergenceKind,
    pub uncertainty: f64,
    pub mse: f64,
    /// Computed from the averaged MSE; "inf" when it is zero.
    #[serde(with = "inf_as_string")]
    pub psnr: f64,
    pub ssim: f64,
    pub n_images: usize,
    pub n_patches: usize,
    pub n_skipped: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub skipped: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<Region>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn read_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = fs::read_to_string(path).map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
    let entries: Vec<ManifestEntry> =
        serde_json::from_str(&text).map_err(|e| Error::Manifest(format!("{}: {e}", path.display())))?;
    if entries.is_empty() {
        return Err(Error::Manifest(format!("{}: no entries", path.display())));
    }
    let base = path.parent().unwrap_or(Path::new("."));
    let resolved: Vec<ManifestEntry> = entries
        .into_iter()
        .map(|e| ManifestEntry {
            truth: base.join(e.truth),
            degraded: base.join(e.degraded),
            restored: base.join(e.restored),
        })
        .collect();
    for e in &resolved {
        for p in [&e.truth, &e.degraded, &e.restored] {
            if !p.is_file() {
                return Err(Error::Manifest(format!("missing file {}", p.display())));
            }
        }
    }
    Ok(resolved)
}

/// Finds algorithm manifests: `root/manifest.json` itself, or else every
/// immediate subdirectory holding one, sorted by name.
pub fn discover_algorithms(root: &Path) -> Result<Vec<(String, PathBuf)>> {
    if root.is_file() {
        return Ok(vec![(algorithm_name(root), root.to_path_buf())]);
    }
    let direct = root.join(MANIFEST_FILE);
    if direct.is_file() {
        return Ok(vec![(algorithm_name(&direct), direct)]);
    }
    let listing = fs::read_dir(root).map_err(|e| Error::Manifest(format!("{}: {e}", root.display())))?;
    let mut found: Vec<(String, PathBuf)> = listing
        .filter_map(|e| e.ok())
        .map(|e| e.path().join(MANIFEST_FILE))
        .filter(|p| p.is_file())
        .map(|p| (algorithm_name(&p), p))
        .collect();
    found.sort();
    if found.is_empty() {
        return Err(Error::Manifest(format!(
            "no {MANIFEST_FILE} under {}",
            root.display()
        )));
    }
    Ok(found)
}

fn algorithm_name(manifest: &Path) -> String {
    manifest
        .parent()
        .and_then(|p| p.file_name())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "algorithm".into())
}

struct Loaded {
    truth: ImageTensor,
    restored: ImageTensor,
    mse: f64,
    ssim: f64,
}

fn load_entry(e: &ManifestEntry) -> Result<Loaded> {
    let truth = load_image(&e.truth)?;
    load_image(&e.degraded)?;
    let restored = load_image(&e.restored)?;
    let m = distortion_metrics(&truth, &restored)?;
    Ok(Loaded {
        truth,
        restored,
        mse: m.mse,
        ssim: m.ssim,
    })
}

/// Loads every triplet of a manifest and computes pooled patch statistics and
/// averaged distortion metrics. Triplets that fail to decode are skipped; the
/// run fails when more than 10% are skipped.
pub fn evaluate_algorithm(name: &str, manifest: &Path, cfg: &EvaluateConfig) -> Result<EvaluationRecord> {
    let entries = read_manifest(manifest)?;
    let results = cfg.exec.map(entries.len(), |i| load_entry(&entries[i]));
    let mut ok = Vec::new();
    let mut skipped = Vec::new();
    for (e, r) in entries.iter().zip(results) {
        match r {
            Ok(l) => ok.push(l),
            Err(err) => skipped.push(format!("{}: {err}", e.restored.display())),
        }
    }
    if ok.is_empty() || skipped.len() as f64 > MAX_SKIP_FRACTION * entries.len() as f64 {
        return Err(Error::Manifest(format!(
            "{} of {} triplets failed; first: {}",
            skipped.len(),
            entries.len(),
            skipped.first().map(String::as_str).unwrap_or("-")
        )));
    }
    let truths: Vec<ImageTensor> = ok.iter().map(|l| l.truth.clone()).collect();
    let restored: Vec<ImageTensor> = ok.iter().map(|l| l.restored.clone()).collect();
    let tp = extract_patches_with(&truths, cfg.patch_size, cfg.patch_stride, cfg.exec)?;
    let rp = extract_patches_with(&restored, cfg.patch_size, cfg.patch_stride, cfg.exec)?;
    let errors = PatchSet {
        base: rp.base.sub(&tp.base)?,
        size: tp.size,
        stride: tp.stride,
    };
    let uncertainty = uncertainty_upper(&errors, cfg.ridge)?;
    let mut pcfg = cfg.perception;
    pcfg.kde.exec = cfg.exec;
    let perception = perception_index(&tp, &rp, &pcfg)?;
    let k = ok.len() as f64;
    let mse = ok.iter().map(|l| l.mse).sum::<f64>() / k;
    let ssim = ok.iter().map(|l| l.ssim).sum::<f64>() / k;
    Ok(EvaluationRecord {
        algorithm: name.to_string(),
        perception,
        divergence_kind: pcfg.kind,
        uncertainty,
        mse,
        psnr: psnr_from_mse(mse),
        ssim,
        n_images: ok.len(),
        n_patches: tp.n(),
        n_skipped: skipped.len(),
        skipped,
        region: None,
        note: None,
    })
}

/// Attaches a plane region to each record. Points whose uncertainty sits at
/// the covariance ridge floor are annotated as estimator noise.
pub fn classify_records(
    records: &mut [EvaluationRecord],
    ctx: &PlaneContext,
    tol: f64,
    ridge: f64,
) -> Result<()> {
    for r in records.iter_mut() {
        let pt = UpPoint::new(r.perception, r.uncertainty, r.algorithm.clone())?;
        let v = classify_point(&pt, ctx, tol)?;
        r.region = Some(v.region);
        if r.uncertainty <= 10.0 * ridge.max(1e-12) {
            r.note =
                Some("uncertainty at the covariance ridge floor; placement reflects estimator noise".into());
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub tool: String,
    pub version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub metadata: RunMetadata,
    pub records: Vec<EvaluationRecord>,
}

pub const POOLING_NOTE: &str =
    "perception and uncertainty use pooled (unconditional) patch statistics in place of \
     conditional ones; the uncertainty value can only overestimate the conditional one";

pub fn write_records_csv<W: std::io::Write>(mut w: W, records: &[EvaluationRecord]) -> std::io::Result<()> {
    writeln!(
        w,
        "algorithm,perception,divergence_kind,uncertainty,mse,psnr,ssim,n_images,n_patches,n_skipped,region"
    )?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.perception,
            r.divergence_kind.as_str(),
            r.uncertainty,
            r.mse,
            r.psnr,
            r.ssim,
            r.n_images,
            r.n_patches,
            r.n_skipped,
            r.region.map(|g| g.as_str()).unwrap_or("")
        )?;
    }
    Ok(())
}
