use std::f64::consts::{E, PI};

use nalgebra::DVector;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::sample::SampleSet;
use super::spd::SpdMatrix;
use crate::error::{Error, Result};

/// Multivariate normal `N(mean, cov)`.
#[derive(Debug, Clone)]
pub struct GaussianModel {
    mean: Vec<f64>,
    cov: SpdMatrix,
}

impl GaussianModel {
    pub fn new(mean: Vec<f64>, cov: SpdMatrix) -> Result<Self> {
        if mean.len() != cov.dim() {
            return Err(Error::DimensionMismatch(format!(
                "mean has dimension {}, covariance {}",
                mean.len(),
                cov.dim()
            )));
        }
        Ok(Self { mean, cov })
    }

    pub fn zero_mean(cov: SpdMatrix) -> Self {
        Self {
            mean: vec![0.0; cov.dim()],
            cov,
        }
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &SpdMatrix {
        &self.cov
    }

    pub fn dim(&self) -> usize {
        self.mean.len()
    }

    /// `n` draws mean + F·z with F the sampling factor of the covariance and
    /// z standard normal from ChaCha20 seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleSet> {
        let d = self.dim();
        let f = self.cov.sampling_factor();
        let mean = DVector::from_column_slice(&self.mean);
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut data = Vec::with_capacity(n * d);
        for _ in 0..n {
            let z = DVector::from_iterator(
                d,
                (0..d).map(|_| {
                    let v: f64 = StandardNormal.sample(&mut rng);
                    v
                }),
            );
            data.extend((&f * z + &mean).iter());
        }
        SampleSet::new(data, n, d)
    }
}

/// Differential entropy ½ ln((2πe)^d det Σ) in nats.
pub fn gaussian_entropy(cov: &SpdMatrix) -> f64 {
    0.5 * (cov.dim() as f64 * (2.0 * PI * E).ln() + cov.logdet())
}

/// Entropy power (1/2πe)·exp(2h/d).
pub fn entropy_power(h: f64, d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::Domain("entropy power needs d ≥ 1".into()));
    }
    if h.is_nan() {
        return Err(Error::NonFinite("entropy".into()));
    }
    let exponent = 2.0 * h / d as f64 - (2.0 * PI * E).ln();
    if exponent > f64::MAX.ln() {
        return Err(Error::Overflow(format!(
            "entropy power exponent {exponent} out of range"
        )));
    }
    Ok(exponent.exp())
}

/// Closed-form Rényi divergence of order ½ between two Gaussians:
/// ¼ δᵀ M⁻¹ δ + ln(det M / √(det Σp det Σq)) with M = (Σp + Σq)/2.
pub fn gaussian_renyi_half(p: &GaussianModel, q: &GaussianModel) -> Result<f64> {
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", p.dim(), q.dim())));
    }
    let mid = SpdMatrix::new((p.cov.entries() + q.cov.entries()) * 0.5)?;
    let delta = DVector::from_iterator(p.dim(), p.mean.iter().zip(&q.mean).map(|(a, b)| a - b));
    let quad = delta.dot(&mid.solve(&delta));
    let logdet_term = mid.logdet() - 0.5 * (p.cov.logdet() + q.cov.logdet());
    Ok((0.25 * quad + logdet_term).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::DMatrix;
    use proptest::prelude::*;

    // Oracle constants computed with mpmath (30 digits).
    const HALF_LN_2PIE: f64 = 1.418_938_533_204_672_7;
    const LN_2PIE: f64 = 2.837_877_066_409_345_5;

    #[test]
    fn entropy_closed_form() {
        let one = SpdMatrix::identity(1);
        assert!((gaussian_entropy(&one) - HALF_LN_2PIE).abs() < 1e-14);
        assert!((gaussian_entropy(&SpdMatrix::identity(2)) - LN_2PIE).abs() < 1e-14);
        let four = SpdMatrix::from_diagonal(&[4.0]).unwrap();
        assert!((gaussian_entropy(&four) - gaussian_entropy(&one) - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn entropy_power_values() {
        assert!((entropy_power(HALF_LN_2PIE, 1).unwrap() - 1.0).abs() < 1e-14);
        assert!((entropy_power(0.0, 1).unwrap() - 0.058_549_831_524_319_16).abs() < 1e-15);
        assert!(matches!(entropy_power(1e6, 1), Err(Error::Overflow(_))));
        assert!(entropy_power(1.0, 2).unwrap() < entropy_power(1.1, 2).unwrap());
    }

    #[test]
    fn renyi_half_values() {
        let std3 = GaussianModel::zero_mean(SpdMatrix::identity(3));
        assert_eq!(gaussian_renyi_half(&std3, &std3).unwrap(), 0.0);

        let p = GaussianModel::zero_mean(SpdMatrix::identity(1));
        for mu in [0.5, 1.0, 3.0] {
            let q = GaussianModel::new(vec![mu], SpdMatrix::identity(1)).unwrap();
            assert!((gaussian_renyi_half(&p, &q).unwrap() - mu * mu / 4.0).abs() < 1e-14);
        }
        let q = GaussianModel::zero_mean(SpdMatrix::from_diagonal(&[4.0]).unwrap());
        assert!((gaussian_renyi_half(&p, &q).unwrap() - 0.223_143_551_314_209_76).abs() < 1e-14);

        let q2 = GaussianModel::zero_mean(SpdMatrix::identity(2));
        assert!(matches!(
            gaussian_renyi_half(&p, &q2),
            Err(Error::DimensionMismatch(_))
        ));
    }

    fn spd(d: usize) -> impl Strategy<Value = SpdMatrix> {
        proptest::collection::vec(-1.0f64..1.0, d * d).prop_map(move |v| {
            let b = DMatrix::from_vec(d, d, v);
            SpdMatrix::new(&b * b.transpose() + DMatrix::identity(d, d) * 0.2).unwrap()
        })
    }

    proptest! {
        #[test]
        fn entropy_power_is_det_root(cov in (1usize..=8).prop_flat_map(spd)) {
            let d = cov.dim();
            let n = entropy_power(gaussian_entropy(&cov), d).unwrap();
            let det_root = cov.entries().clone().lu().determinant().powf(1.0 / d as f64);
            prop_assert!((n - det_root).abs() <= 1e-10 * det_root);
        }

        #[test]
        fn renyi_half_symmetric(
            (a, b, mu) in (1usize..=5).prop_flat_map(|d| (spd(d), spd(d), proptest::collection::vec(-2.0f64..2.0, d)))
        ) {
            let p = GaussianModel::zero_mean(a.clone());
            let q = GaussianModel::new(mu.clone(), b.clone()).unwrap();
            let pq = gaussian_renyi_half(&p, &q).unwrap();
            let qp = gaussian_renyi_half(&q, &p).unwrap();
            prop_assert!((pq - qp).abs() <= 1e-10 * pq.max(1.0));
            prop_assert!(pq >= 0.0);
            prop_assert!(gaussian_renyi_half(&q, &q).unwrap() <= 1e-12);
            // distinct distributions give a strictly positive divergence
            if mu.iter().any(|m| m.abs() > 1e-3) {
                prop_assert!(pq > 0.0);
            }
        }
    }
}
