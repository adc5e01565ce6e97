use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::problem::LinearGaussianProblem;
use crate::error::{Error, Result};
use crate::numstats::{gaussian_renyi_half, GaussianModel, SampleSet, SpdMatrix};
use crate::par::{stable_sum, Exec};

/// Stochastic estimator X̂ = E[X|Y] + Z with Z ~ N(0, Σz) independent of (X, Y).
#[derive(Debug, Clone)]
pub struct EstimatorFamilySpec {
    pub sigma_z: SpdMatrix,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct FamilySimulation {
    /// Rows are X̂ − X.
    pub errors: SampleSet,
    /// D_{½}(N(0, Σ_{x|y}), N(0, Σz)), identical for every y.
    pub per_y_divergence: f64,
    pub mse_per_dim: f64,
    /// Σ_{x|y} + Σz, the exact covariance of the error.
    pub error_cov: SpdMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilySummary {
    pub per_y_divergence: f64,
    pub mse_per_dim: f64,
    pub error_entropy_power: f64,
}

pub const MIN_FAMILY_SAMPLES: usize = 100;
const BLOCK: usize = 4096;

pub fn simulate_family(
    p: &LinearGaussianProblem,
    spec: &EstimatorFamilySpec,
    n: usize,
) -> Result<FamilySimulation> {
    simulate_family_with(p, spec, n, Exec::default())
}

/// Draws are made in fixed blocks of rows, each from its own ChaCha20 stream
/// keyed by (seed, block), so the output does not depend on `exec`.
pub fn simulate_family_with(
    p: &LinearGaussianProblem,
    spec: &EstimatorFamilySpec,
    n: usize,
    exec: Exec,
) -> Result<FamilySimulation> {
    let d = p.dim();
    if spec.sigma_z.dim() != d {
        return Err(Error::DimensionMismatch(format!(
            "Σz is {0}×{0}, problem dimension is {d}",
            spec.sigma_z.dim()
        )));
    }
    if n < MIN_FAMILY_SAMPLES {
        return Err(Error::TooFewSamples {
            needed: MIN_FAMILY_SAMPLES,
            got: n,
        });
    }
    let m = p.obs_dim();
    let fx = p.sigma_x().sampling_factor();
    let fw = p.sigma_w().sampling_factor();
    let fz = spec.sigma_z.sampling_factor();
    let h = p.h();
    let k = p.gain();

    let blocks = exec.map_chunks(n, BLOCK, |start, end| {
        let mut rng = ChaCha20Rng::seed_from_u64(spec.seed);
        rng.set_stream((start / BLOCK) as u64);
        let mut normal = |len: usize| {
            DVector::from_iterator(
                len,
                (0..len).map(|_| {
                    let z: f64 = StandardNormal.sample(&mut rng);
                    z
                }),
            )
        };
        let mut out = Vec::with_capacity((end - start) * d);
        for _ in start..end {
            let x = &fx * normal(d);
            let y = h * &x + &fw * normal(m);
            let e = k * y + &fz * normal(d) - x;
            out.extend(e.iter());
        }
        out
    });
    let data: Vec<f64> = blocks.into_iter().flatten().collect();
    let mse_per_dim = stable_sum(data.iter().map(|v| v * v)) / (n * d) as f64;
    let errors = SampleSet::new(data, n, d)?;
    let per_y_divergence = gaussian_renyi_half(
        &GaussianModel::zero_mean(p.posterior_cov().clone()),
        &GaussianModel::zero_mean(spec.sigma_z.clone()),
    )?;
    let error_cov = p.posterior_cov().add(&spec.sigma_z)?;
    Ok(FamilySimulation {
        errors,
        per_y_divergence,
        mse_per_dim,
        error_cov,
    })
}
