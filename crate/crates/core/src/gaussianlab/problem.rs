use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::numstats::SpdMatrix;

/// Linear-Gaussian inverse problem Y = H X + W with X ~ N(0, Σx),
/// W ~ N(0, Σw) independent. The posterior covariance does not depend on y.
#[derive(Debug, Clone)]
pub struct LinearGaussianProblem {
    sigma_x: SpdMatrix,
    h: DMatrix<f64>,
    sigma_w: SpdMatrix,
    gain: DMatrix<f64>,
    posterior_cov: SpdMatrix,
}

impl LinearGaussianProblem {
    pub fn sigma_x(&self) -> &SpdMatrix {
        &self.sigma_x
    }

    pub fn h(&self) -> &DMatrix<f64> {
        &self.h
    }

    pub fn sigma_w(&self) -> &SpdMatrix {
        &self.sigma_w
    }

    /// K = Σx Hᵀ (H Σx Hᵀ + Σw)⁻¹, so that E[X|Y=y] = K y.
    pub fn gain(&self) -> &DMatrix<f64> {
        &self.gain
    }

    pub fn posterior_cov(&self) -> &SpdMatrix {
        &self.posterior_cov
    }

    pub fn dim(&self) -> usize {
        self.sigma_x.dim()
    }

    pub fn obs_dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn posterior_mean(&self, y: &DVector<f64>) -> DVector<f64> {
        &self.gain * y
    }

    /// Σx − Σx Hᵀ (H Σx Hᵀ + Σw)⁻¹ H Σx evaluated afresh, without clamping.
    pub fn recompute_posterior(&self) -> DMatrix<f64> {
        posterior_from_parts(&self.sigma_x, &self.h, &self.sigma_w).0
    }
}

fn posterior_from_parts(
    sigma_x: &SpdMatrix,
    h: &DMatrix<f64>,
    sigma_w: &SpdMatrix,
) -> (DMatrix<f64>, DMatrix<f64>, f64) {
    let sx = sigma_x.entries();
    let innovation = h * sx * h.transpose() + sigma_w.entries();
    let innovation = (&innovation + innovation.transpose()) * 0.5;
    let (inv, cond) = match SpdMatrix::new(innovation) {
        Ok(s) => {
            let ev = s.eigenvalues();
            (s.inverse(), ev[ev.len() - 1] / ev[0])
        }
        Err(_) => (DMatrix::zeros(h.nrows(), h.nrows()), 0.0),
    };
    let gain = sx * h.transpose() * inv;
    let post = sx - &gain * h * sx;
    ((&post + post.transpose()) * 0.5, gain, cond)
}

/// Joseph form (I − KH) Σx (I − KH)ᵀ + K Σw Kᵀ: algebraically equal to the
/// posterior covariance, free of the cancellation when noise is tiny.
fn joseph_posterior(
    sigma_x: &SpdMatrix,
    h: &DMatrix<f64>,
    sigma_w: &SpdMatrix,
    gain: &DMatrix<f64>,
) -> DMatrix<f64> {
    let d = sigma_x.dim();
    let a = DMatrix::<f64>::identity(d, d) - gain * h;
    let post = &a * sigma_x.entries() * a.transpose() + gain * sigma_w.entries() * gain.transpose();
    (&post + post.transpose()) * 0.5
}

/// Builds the problem and caches the gain and posterior covariance.
pub fn build_problem(
    sigma_x: SpdMatrix,
    h: DMatrix<f64>,
    sigma_w: SpdMatrix,
) -> Result<LinearGaussianProblem> {
    if h.ncols() != sigma_x.dim() || h.nrows() != sigma_w.dim() {
        return Err(Error::DimensionMismatch(format!(
            "H is {}×{}, Σx is {}×{}, Σw is {}×{}",
            h.nrows(),
            h.ncols(),
            sigma_x.dim(),
            sigma_x.dim(),
            sigma_w.dim(),
            sigma_w.dim()
        )));
    }
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("degradation operator".into()));
    }
    let (_, gain, cond) = posterior_from_parts(&sigma_x, &h, &sigma_w);
    if !(cond > 0.0) || gain.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularInnovation);
    }
    let post = joseph_posterior(&sigma_x, &h, &sigma_w, &gain);
    let scale = sigma_x.eigenvalues()[0];
    let posterior_cov = SpdMatrix::from_psd_projection(post, 1e-8 * scale)?;
    Ok(LinearGaussianProblem {
        sigma_x,
        h,
        sigma_w,
        gain,
        posterior_cov,
    })
}

/// U_inherent = N(X|Y) = det(Σ_{x|y})^{1/d}.
pub fn inherent_uncertainty(p: &LinearGaussianProblem) -> f64 {
    p.posterior_cov.det_root()
}

/// Y = X + W with X ~ N(0, 1), W ~ N(0, σ²).
pub fn scalar_denoising(sigma2: f64) -> Result<LinearGaussianProblem> {
    build_problem(
        SpdMatrix::identity(1),
        DMatrix::identity(1, 1),
        SpdMatrix::from_diagonal(&[sigma2])?,
    )
}

/// Seeded random problem of dimension `d`: Σx = AAᵀ/d + ½I, H = I + 0.3B,
/// Σw diagonal with entries in [0.1, 1), A and B standard normal.
pub fn random_problem(d: usize, seed: u64) -> Result<LinearGaussianProblem> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };
    let a = DMatrix::from_fn(d, d, |_, _| normal());
    let b = DMatrix::from_fn(d, d, |_, _| normal());
    let sx = &a * a.transpose() / d as f64 + DMatrix::identity(d, d) * 0.5;
    let h = DMatrix::identity(d, d) + b * 0.3;
    let mut rng = ChaCha20Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let w: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..1.0)).collect();
    build_problem(
        SpdMatrix::new((&sx + sx.transpose()) * 0.5)?,
        h,
        SpdMatrix::from_diagonal(&w)?,
    )
}
