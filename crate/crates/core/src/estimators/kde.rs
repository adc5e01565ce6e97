use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numstats::SampleSet;
use crate::par::Exec;

/// Minimum sample count for either side of a KDE divergence.
pub const MIN_KDE_SAMPLES: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "rule", content = "h")]
pub enum BandwidthRule {
    /// (4/(d+2))^{1/(d+4)} · n^{−1/(d+4)} · σ̂ⱼ per dimension.
    Silverman,
    /// n^{−1/(d+4)} · σ̂ⱼ per dimension.
    Scott,
    Fixed(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KdeConfig {
    pub bandwidth: BandwidthRule,
    pub density_floor: f64,
    #[serde(skip, default = "Exec::default")]
    pub exec: Exec,
}

impl Default for KdeConfig {
    fn default() -> Self {
        Self {
            bandwidth: BandwidthRule::Silverman,
            density_floor: 1e-30,
            exec: Exec::default(),
        }
    }
}

impl KdeConfig {
    pub fn validate(&self) -> Result<()> {
        if let BandwidthRule::Fixed(h) = self.bandwidth {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::Bandwidth(format!("fixed bandwidth must be > 0, got {h}")));
            }
        }
        if !(self.density_floor > 0.0) {
            return Err(Error::Config(format!(
                "density floor must be > 0, got {}",
                self.density_floor
            )));
        }
        Ok(())
    }
}

/// Per-dimension Gaussian kernel widths for a sample set.
pub fn bandwidths(s: &SampleSet, rule: BandwidthRule) -> Result<Vec<f64>> {
    let n = s.n() as f64;
    let d = s.d() as f64;
    let h: Vec<f64> = match rule {
        BandwidthRule::Fixed(h) => vec![h; s.d()],
        BandwidthRule::Silverman => {
            let c = (4.0 / (d + 2.0)).powf(1.0 / (d + 4.0)) * n.powf(-1.0 / (d + 4.0));
            s.std_dev().into_iter().map(|sd| c * sd).collect()
        }
        BandwidthRule::Scott => {
            let c = n.powf(-1.0 / (d + 4.0));
            s.std_dev().into_iter().map(|sd| c * sd).collect()
        }
    };
    if let Some((j, v)) = h.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::Bandwidth(format!("bandwidth {v} in dimension {j}")));
    }
    Ok(h)
}

/// A product-Gaussian kernel density estimate over a fixed sample set,
/// evaluated in log space.
pub struct Kde {
    scaled: Vec<f64>,
    inv_h: Vec<f64>,
    n: usize,
    d: usize,
    log_norm: f64,
}

impl Kde {
    pub fn fit(s: &SampleSet, rule: BandwidthRule) -> Result<Self> {
        let h = bandwidths(s, rule)?;
        let inv_h: Vec<f64> = h.iter().map(|v| 1.0 / v).collect();
        let d = s.d();
        let scaled = s
            .data()
            .iter()
            .enumerate()
            .map(|(i, v)| v * inv_h[i % d])
            .collect();
        let log_norm =
            -h.iter().map(|v| v.ln()).sum::<f64>() - 0.5 * d as f64 * (2.0 * std::f64::consts::PI).ln();
        Ok(Self {
            scaled,
            inv_h,
            n: s.n(),
            d,
            log_norm,
        })
    }

    /// ln f̂(x); with `exclude = Some(i)` the i-th kernel is left out.
    pub fn log_density(&self, x: &[f64], exclude: Option<usize>) -> f64 {
        let d = self.d;
        let z: Vec<f64> = x.iter().zip(&self.inv_h).map(|(a, b)| a * b).collect();
        let mut max = f64::NEG_INFINITY;
        let mut acc = 0.0;
        for (j, row) in self.scaled.chunks_exact(d).enumerate() {
            if Some(j) == exclude {
                continue;
            }
            let mut q = 0.0;
            for (a, b) in z.iter().zip(row) {
                let t = a - b;
                q += t * t;
            }
            let v = -0.5 * q;
            if v > max {
                acc = acc * (max - v).exp() + 1.0;
                max = v;
            } else {
                acc += (v - max).exp();
            }
        }
        let count = self.n - usize::from(exclude.is_some_and(|i| i < self.n));
        max + acc.ln() - (count as f64).ln() + self.log_norm
    }
}

/// ln of the estimated Bhattacharyya coefficient BC = E_p[√(q/p)].
///
/// The expectation is taken under the pooled mixture m = w_p p + w_q q,
/// BC = E_m[√(p̂ q̂) / m̂], averaging over all n_p + n_q samples. Each
/// sample's own density is leave-one-out and floored. The weights are bounded by
/// 1/(2√(w_p w_q)), so a single isolated sample cannot dominate the mean.
pub fn kde_log_bhattacharyya(p: &SampleSet, q: &SampleSet, cfg: &KdeConfig) -> Result<f64> {
    log_bhattacharyya(p, q, cfg, false)
}

/// As [`kde_log_bhattacharyya`] for index-aligned samples (row i of `q` is
/// derived from row i of `p`): q̂ at pᵢ also leaves out qᵢ and p̂ at qᵢ leaves
/// out pᵢ, so a restored sample does not vouch for its own source.
pub fn kde_log_bhattacharyya_paired(p: &SampleSet, q: &SampleSet, cfg: &KdeConfig) -> Result<f64> {
    if p.n() != q.n() {
        return Err(Error::DimensionMismatch(format!(
            "paired samples need equal counts, got {} and {}",
            p.n(),
            q.n()
        )));
    }
    log_bhattacharyya(p, q, cfg, true)
}

fn log_bhattacharyya(p: &SampleSet, q: &SampleSet, cfg: &KdeConfig, paired: bool) -> Result<f64> {
    cfg.validate()?;
    if p.d() != q.d() {
        return Err(Error::DimensionMismatch(format!(
            "p.d = {}, q.d = {}",
            p.d(),
            q.d()
        )));
    }
    for s in [p, q] {
        if s.n() < MIN_KDE_SAMPLES {
            return Err(Error::TooFewSamples {
                needed: MIN_KDE_SAMPLES,
                got: s.n(),
            });
        }
    }
    let p_hat = Kde::fit(p, cfg.bandwidth)?;
    let q_hat = Kde::fit(q, cfg.bandwidth)?;
    let log_floor = cfg.density_floor.ln();
    let (np, nq) = (p.n(), q.n());
    let ln_wp = (np as f64 / (np + nq) as f64).ln();
    let ln_wq = (nq as f64 / (np + nq) as f64).ln();
    let terms = cfg.exec.map(np + nq, |i| {
        let (lp, lq) = if i < np {
            let x = p.row(i);
            (
                p_hat.log_density(x, Some(i)).max(log_floor),
                q_hat.log_density(x, paired.then_some(i)),
            )
        } else {
            let j = i - np;
            let x = q.row(j);
            (
                p_hat.log_density(x, paired.then_some(j)),
                q_hat.log_density(x, Some(j)).max(log_floor),
            )
        };
        let (a, b) = (ln_wp + lp, ln_wq + lq);
        let ln_m = a.max(b) + (-(a - b).abs()).exp().ln_1p();
        0.5 * (lp + lq) - ln_m
    });
    Ok(log_mean_exp(&terms))
}

/// KDE plug-in estimate of the Rényi divergence of order ½, clipped at 0.
pub fn kde_renyi_half(p: &SampleSet, q: &SampleSet, cfg: &KdeConfig) -> Result<f64> {
    Ok(renyi_from_log_bc(kde_log_bhattacharyya(p, q, cfg)?))
}

/// Hellinger distance √(1 − BC) from the same Bhattacharyya estimate.
pub fn hellinger_distance(p: &SampleSet, q: &SampleSet, cfg: &KdeConfig) -> Result<f64> {
    Ok(hellinger_from_log_bc(kde_log_bhattacharyya(p, q, cfg)?))
}

pub fn renyi_from_log_bc(log_bc: f64) -> f64 {
    (-2.0 * log_bc).max(0.0)
}

pub fn hellinger_from_log_bc(log_bc: f64) -> f64 {
    (-log_bc.exp_m1()).max(0.0).sqrt()
}

fn log_mean_exp(v: &[f64]) -> f64 {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let sum = crate::par::stable_sum(v.iter().map(|x| (x - max).exp()));
    max + sum.ln() - (v.len() as f64).ln()
}
