use serde::{Deserialize, Serialize};

use super::image::ImageTensor;
use crate::bounds::DivergenceKind;
use crate::error::{Error, Result};
use crate::estimators::{
    hellinger_from_log_bc, kde_log_bhattacharyya, kde_log_bhattacharyya_paired, renyi_from_log_bc, KdeConfig,
};
use crate::numstats::{sample_covariance, SampleSet};
use crate::par::Exec;

pub const DEFAULT_PATCH_SIZE: usize = 9;
pub const DEFAULT_STRIDE: usize = 3;
pub const DEFAULT_RIDGE: f64 = 1e-8;

/// Flattened patches: row-major within a patch, channels interleaved last.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchSet {
    pub base: SampleSet,
    pub size: usize,
    pub stride: usize,
}

impl PatchSet {
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn d(&self) -> usize {
        self.base.d()
    }
}

fn patches_of(img: &ImageTensor, size: usize, stride: usize) -> Vec<f64> {
    let c = img.channels();
    let w = img.width();
    let px = img.pixels();
    let mut out = Vec::new();
    for r in (0..=img.height() - size).step_by(stride) {
        for col in (0..=w - size).step_by(stride) {
            for dr in 0..size {
                let start = ((r + dr) * w + col) * c;
                out.extend_from_slice(&px[start..start + size * c]);
            }
        }
    }
    out
}

pub fn extract_patches(images: &[ImageTensor], size: usize, stride: usize) -> Result<PatchSet> {
    extract_patches_with(images, size, stride, Exec::default())
}

/// Ordered by image index, then patch row, then patch column.
pub fn extract_patches_with(
    images: &[ImageTensor],
    size: usize,
    stride: usize,
    exec: Exec,
) -> Result<PatchSet> {
    if size == 0 || stride == 0 {
        return Err(Error::Config(format!(
            "patch size {size} and stride {stride} must be positive"
        )));
    }
    let first = images.first().ok_or(Error::EmptyInput)?;
    for img in images {
        if img.channels() != first.channels() {
            return Err(Error::ChannelMismatch {
                expected: first.channels(),
                found: img.channels(),
            });
        }
        if img.height() < size || img.width() < size {
            return Err(Error::ImageTooSmall {
                height: img.height(),
                width: img.width(),
                size,
            });
        }
    }
    let d = size * size * first.channels();
    let parts = exec.map(images.len(), |i| patches_of(&images[i], size, stride));
    let data: Vec<f64> = parts.into_iter().flatten().collect();
    let n = data.len() / d;
    Ok(PatchSet {
        base: SampleSet::new(data, n, d)?,
        size,
        stride,
    })
}

/// Geometric mean of the eigenvalues of the (ridged) error covariance.
pub fn uncertainty_upper(errors: &PatchSet, ridge: f64) -> Result<f64> {
    Ok(sample_covariance(&errors.base, ridge)?.det_root())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerceptionConfig {
    pub kde: KdeConfig,
    pub kind: DivergenceKind,
    /// Evenly spaced subsample per side before the O(n²) KDE; 0 disables.
    pub max_patches: usize,
    /// Treat equal-count patch sets as index-aligned pairs and leave each
    /// restored patch out of q̂ at its own source patch.
    pub paired: bool,
}

impl Default for PerceptionConfig {
    fn default() -> Self {
        Self {
            kde: KdeConfig::default(),
            kind: DivergenceKind::RenyiHalf,
            max_patches: 4096,
            paired: true,
        }
    }
}

/// Rows ⌊i·n/m⌋ for i in 0..m.
pub fn even_subsample(s: &SampleSet, m: usize) -> SampleSet {
    if m == 0 || s.n() <= m {
        return s.clone();
    }
    let idx: Vec<usize> = (0..m).map(|i| i * s.n() / m).collect();
    s.select_rows(&idx).expect("indices in range")
}

/// Pooled KDE divergence between true and restored patch distributions.
pub fn perception_index(truth: &PatchSet, restored: &PatchSet, cfg: &PerceptionConfig) -> Result<f64> {
    if truth.d() != restored.d() {
        return Err(Error::DimensionMismatch(format!(
            "patch dimension {} vs {}",
            truth.d(),
            restored.d()
        )));
    }
    let p = even_subsample(&truth.base, cfg.max_patches);
    let q = even_subsample(&restored.base, cfg.max_patches);
    let log_bc = if cfg.paired && p.n() == q.n() {
        kde_log_bhattacharyya_paired(&p, &q, &cfg.kde)?
    } else {
        kde_log_bhattacharyya(&p, &q, &cfg.kde)?
    };
    Ok(match cfg.kind {
        DivergenceKind::RenyiHalf => renyi_from_log_bc(log_bc),
        DivergenceKind::Hellinger => hellinger_from_log_bc(log_bc),
    })
}
