use serde::{Deserialize, Serialize};

use super::neighbors::{kth_neighbor_distances, SearchStrategy};
use crate::error::{Error, Result};
use crate::numstats::{digamma, entropy_power, special::ln_unit_ball_volume, SampleSet};
use crate::par::{stable_sum, Exec};

/// Relative magnitude of the tie-breaking jitter, in units of the data range.
pub const JITTER_REL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    /// Neighbor order.
    pub k: usize,
    #[serde(skip, default = "Exec::default")]
    pub exec: Exec,
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self {
            k: 3,
            exec: Exec::default(),
        }
    }
}

impl KnnConfig {
    pub fn with_k(k: usize) -> Self {
        Self { k, ..Self::default() }
    }
}

/// Kozachenko–Leonenko differential entropy estimate in nats:
///
/// ĥ = ψ(n) − ψ(k) + ln c_d + (d/n) Σᵢ ln rᵢ
///
/// where rᵢ is the Euclidean distance from sample i to its k-th nearest
/// neighbor and c_d the unit-ball volume. Exact duplicates are separated by a
/// deterministic per-entry jitter before the estimate is formed.
pub fn knn_entropy(s: &SampleSet, cfg: &KnnConfig) -> Result<f64> {
    knn_entropy_with(s, cfg, SearchStrategy::Auto)
}

pub fn knn_entropy_with(s: &SampleSet, cfg: &KnnConfig, strategy: SearchStrategy) -> Result<f64> {
    let k = cfg.k;
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    if s.n() < k + 1 {
        return Err(Error::TooFewSamples {
            needed: k + 1,
            got: s.n(),
        });
    }
    let mut radii = kth_neighbor_distances(s, k, strategy, cfg.exec);
    if radii.contains(&0.0) {
        let jittered = jitter(s)?;
        radii = kth_neighbor_distances(&jittered, k, strategy, cfg.exec);
        if let Some(i) = radii.iter().position(|&r| r == 0.0) {
            return Err(Error::DegenerateSamples(format!(
                "sample {i} has a zero {k}-th neighbor distance after jitter"
            )));
        }
    }
    let n = s.n() as f64;
    let d = s.d() as f64;
    let log_sum = stable_sum(radii.iter().map(|r| r.ln()));
    Ok(digamma(n)? - digamma(k as f64)? + ln_unit_ball_volume(s.d()) + d / n * log_sum)
}

/// Entropy power of the Kozachenko–Leonenko entropy estimate.
pub fn sample_entropy_power(s: &SampleSet, cfg: &KnnConfig) -> Result<f64> {
    entropy_power(knn_entropy(s, cfg)?, s.d())
}

fn jitter(s: &SampleSet) -> Result<SampleSet> {
    let range = s.range();
    if range == 0.0 {
        return Err(Error::DegenerateSamples("all samples are identical".into()));
    }
    let scale = JITTER_REL * range;
    let d = s.d();
    let data = s
        .data()
        .iter()
        .enumerate()
        .map(|(idx, v)| v + scale * unit_hash(idx as u64))
        .collect();
    SampleSet::new(data, s.n(), d)
}

/// SplitMix64 of the flat entry index, mapped to [−1, 1).
fn unit_hash(idx: u64) -> f64 {
    let mut z = idx.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}
