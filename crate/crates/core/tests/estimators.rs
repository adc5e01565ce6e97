use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use upplane::estimators::*;
use upplane::numstats::*;

fn gaussian(diag: &[f64], mean: Vec<f64>, n: usize, seed: u64) -> (GaussianModel, SampleSet) {
    let m = GaussianModel::new(mean, SpdMatrix::from_diagonal(diag).unwrap()).unwrap();
    let s = m.sample(n, seed).unwrap();
    (m, s)
}

/// Independent uniform coordinates on [0, a_j).
fn uniform(widths: &[f64], n: usize, seed: u64) -> SampleSet {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let d = widths.len();
    let data = (0..n * d).map(|i| widths[i % d] * rng.random::<f64>()).collect();
    SampleSet::new(data, n, d).unwrap()
}

fn add(a: &SampleSet, b: &SampleSet) -> SampleSet {
    let data = a.data().iter().zip(b.data()).map(|(x, y)| x + y).collect();
    SampleSet::new(data, a.n(), a.d()).unwrap()
}

#[test]
fn knn_calibrated_on_gaussians() {
    let cfg = KnnConfig::default();
    for d in 1..=4 {
        for seed in 0..3 {
            let diag: Vec<f64> = (0..d).map(|i| 0.5 + 0.5 * i as f64).collect();
            let (m, s) = gaussian(&diag, vec![0.0; d], 10_000, 100 * d as u64 + seed);
            let want = gaussian_entropy(m.cov());
            let h = knn_entropy(&s, &cfg).unwrap();
            assert!(
                (h - want).abs() <= 0.05 * want.abs(),
                "d={d} seed={seed}: {h} vs {want}"
            );
        }
    }
}

#[test]
fn kde_calibrated_on_univariate_pairs() {
    let cfg = KdeConfig::default();
    let pairs = [(0.0, 1.0, 1.0, 1.0), (0.0, 1.0, 0.0, 2.0), (0.0, 1.0, 1.5, 0.7)];
    for (k, &(m1, v1, m2, v2)) in pairs.iter().enumerate() {
        let (a, sa) = gaussian(&[v1], vec![m1], 10_000, 10 + k as u64);
        let (b, sb) = gaussian(&[v2], vec![m2], 10_000, 20 + k as u64);
        let want = gaussian_renyi_half(&a, &b).unwrap();
        let got = kde_renyi_half(&sa, &sb, &cfg).unwrap();
        assert!((got - want).abs() <= 0.2 * want, "pair {k}: {got} vs {want}");
    }
}

#[test]
fn identical_distributions_near_zero() {
    let cfg = KdeConfig::default();
    for d in [1, 2] {
        let (_, a) = gaussian(&vec![1.0; d], vec![0.0; d], 5_000, 31);
        let (_, b) = gaussian(&vec![1.0; d], vec![0.0; d], 5_000, 32);
        let r = kde_renyi_half(&a, &b, &cfg).unwrap();
        assert!(r <= 0.05, "d={d}: {r}");
    }
}

#[test]
fn max_entropy_lemma() {
    let cfg = KnnConfig::default();
    let mut rng = ChaCha20Rng::seed_from_u64(7);
    for case in 0..20 {
        let d = rng.random_range(1..=4usize);
        let widths: Vec<f64> = (0..d).map(|_| rng.random_range(2.0..6.0)).collect();
        let s = if case % 2 == 0 {
            uniform(&widths, 10_000, 1000 + case)
        } else {
            gaussian(&widths, vec![0.0; d], 10_000, 1000 + case).1
        };
        let h = knn_entropy(&s, &cfg).unwrap();
        let hg = gaussian_entropy(&sample_covariance(&s, 0.0).unwrap());
        assert!(h <= hg + 0.05 * hg.abs(), "case {case} d={d}: {h} > {hg}");
    }
}

#[test]
fn entropy_power_inequality() {
    let cfg = KnnConfig::default();
    let mut rng = ChaCha20Rng::seed_from_u64(8);
    for case in 0..20u64 {
        let d = rng.random_range(1..=3usize);
        let wx: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..3.0)).collect();
        let (x, y, proportional) = match case % 3 {
            0 => {
                let c = rng.random_range(0.3..3.0);
                let wy: Vec<f64> = wx.iter().map(|w| c * w).collect();
                (
                    gaussian(&wx, vec![0.0; d], 10_000, 2000 + case).1,
                    gaussian(&wy, vec![0.0; d], 10_000, 3000 + case).1,
                    true,
                )
            }
            1 => {
                let wy: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..3.0)).collect();
                (
                    gaussian(&wx, vec![0.0; d], 10_000, 2000 + case).1,
                    gaussian(&wy, vec![0.0; d], 10_000, 3000 + case).1,
                    d == 1,
                )
            }
            _ => {
                let wy: Vec<f64> = (0..d).map(|_| rng.random_range(0.5..3.0)).collect();
                (
                    uniform(&wx, 10_000, 2000 + case),
                    uniform(&wy, 10_000, 3000 + case),
                    false,
                )
            }
        };
        let nx = sample_entropy_power(&x, &cfg).unwrap();
        let ny = sample_entropy_power(&y, &cfg).unwrap();
        let nxy = sample_entropy_power(&add(&x, &y), &cfg).unwrap();
        assert!(nx + ny <= 1.1 * nxy, "case {case}: {nx} + {ny} > {nxy}");
        if proportional {
            assert!(
                (nx + ny - nxy).abs() <= 0.1 * nxy,
                "case {case}: {nx} + {ny} vs {nxy}"
            );
        }
    }
}
