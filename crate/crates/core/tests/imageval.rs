use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal, Uniform};
use upplane::bounds::{DivergenceKind, PlaneContext, Region};
use upplane::estimators::{sample_entropy_power, KnnConfig};
use upplane::imageval::*;
use upplane::numstats::SampleSet;

fn normal(rng: &mut ChaCha20Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn patchset(data: Vec<f64>, n: usize, d: usize) -> PatchSet {
    PatchSet {
        base: SampleSet::new(data, n, d).unwrap(),
        size: 1,
        stride: 1,
    }
}

#[test]
fn uncertainty_upper_examples() {
    let mut rng = ChaCha20Rng::seed_from_u64(3);
    let (n, d) = (100_000, 81);
    let data: Vec<f64> = (0..n * d).map(|_| 0.1 * normal(&mut rng)).collect();
    let u = uncertainty_upper(&patchset(data, n, d), 1e-8).unwrap();
    assert!((u - 0.01).abs() <= 0.001, "{u}");

    let data: Vec<f64> = (0..20_000)
        .flat_map(|_| [2.0 * normal(&mut rng), normal(&mut rng)])
        .collect();
    let ps = patchset(data, 20_000, 2);
    let u = uncertainty_upper(&ps, 0.0).unwrap();
    assert!((u - 2.0).abs() <= 0.1, "{u}");

    // permutation and translation invariance
    let mut rows: Vec<Vec<f64>> = ps.base.rows().map(|r| vec![r[0] + 5.0, r[1] - 1.0]).collect();
    rows.reverse();
    let moved = PatchSet {
        base: SampleSet::from_rows(&rows).unwrap(),
        size: 1,
        stride: 1,
    };
    assert!((uncertainty_upper(&moved, 0.0).unwrap() - u).abs() <= 1e-9 * u);
}

#[test]
fn gaussian_envelope_dominates_uniform_errors() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    let uni = Uniform::new(-1.0, 1.0).unwrap();
    for d in 1..=4 {
        let n = 10_000;
        let data: Vec<f64> = (0..n * d).map(|_| uni.sample(&mut rng)).collect();
        let ps = patchset(data, n, d);
        let upper = uncertainty_upper(&ps, 0.0).unwrap();
        let knn = sample_entropy_power(&ps.base, &KnnConfig::default()).unwrap();
        assert!(upper >= 0.9 * knn, "d={d}: {upper} vs {knn}");
    }
}

fn noisy_images(seed: u64, sigma: f64, blur: bool) -> (Vec<ImageTensor>, Vec<ImageTensor>) {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut truth = Vec::new();
    let mut restored = Vec::new();
    for _ in 0..12 {
        let px: Vec<f64> = (0..32 * 32).map(|_| 0.5 + 0.1 * normal(&mut rng)).collect();
        let t = ImageTensor::from_clamped(32, 32, 1, px.clone()).unwrap();
        let r: Vec<f64> = if blur {
            (0..32 * 32)
                .map(|i| {
                    let (row, col) = (i / 32i32, i % 32);
                    let mut acc = 0.0;
                    let mut cnt = 0.0;
                    for (dr, dc) in [(0i32, 0i32), (0, 1), (1, 0), (0, -1), (-1, 0)] {
                        let (rr, cc) = (row + dr, col + dc);
                        if (0..32).contains(&rr) && (0..32).contains(&cc) {
                            acc += t.get(rr as usize, cc as usize, 0);
                            cnt += 1.0;
                        }
                    }
                    acc / cnt
                })
                .collect()
        } else {
            t.pixels().iter().map(|v| v + sigma * normal(&mut rng)).collect()
        };
        truth.push(t);
        restored.push(ImageTensor::from_clamped(32, 32, 1, r).unwrap());
    }
    (truth, restored)
}

#[test]
fn perception_orderings() {
    let cfg = PerceptionConfig {
        max_patches: 3000,
        ..Default::default()
    };
    let (truth, _) = noisy_images(1, 0.0, false);
    let tp = extract_patches(&truth, 1, 1).unwrap();
    let same = perception_index(&tp, &tp, &cfg).unwrap();
    let (t2, noisy) = noisy_images(1, 0.1, false);
    let noisy = perception_index(
        &extract_patches(&t2, 1, 1).unwrap(),
        &extract_patches(&noisy, 1, 1).unwrap(),
        &cfg,
    )
    .unwrap();
    let (t3, blurred) = noisy_images(1, 0.0, true);
    let blurred = perception_index(
        &extract_patches(&t3, 1, 1).unwrap(),
        &extract_patches(&blurred, 1, 1).unwrap(),
        &cfg,
    )
    .unwrap();
    assert!(same <= 0.05, "{same}");
    assert!(noisy > same && blurred > same, "{same} {noisy} {blurred}");
    eprintln!("{same} {noisy} {blurred}");
}

#[test]
fn gaussian_fixture_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GaussianFixtureSpec {
        include_identity: true,
        seed: 2024,
        ..Default::default()
    };
    let ctx = write_gaussian_fixture(dir.path(), &spec).unwrap();
    let cfg = EvaluateConfig {
        patch_stride: ctx.patch_stride,
        ..Default::default()
    };
    let algos = discover_algorithms(dir.path()).unwrap();
    let names: Vec<&str> = algos.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(names, ["identity", "posterior-mean", "posterior-sample"]);
    let mut recs: Vec<EvaluationRecord> = algos
        .iter()
        .map(|(n, m)| evaluate_algorithm(n, m, &cfg).unwrap())
        .collect();
    let plane = PlaneContext::new(ctx.d, ctx.n_xy, ctx.n_xgy, DivergenceKind::RenyiHalf).unwrap();
    classify_records(&mut recs, &plane, 0.02, cfg.ridge).unwrap();
    for r in &recs {
        eprintln!("{r:?} sigma_q2={}", ctx.sigma_q2);
    }
    let (id, mean, sample) = (&recs[0], &recs[1], &recs[2]);
    assert!(id.perception <= 0.05 && id.ssim > 0.999 && id.note.is_some());
    assert!(sample.perception < mean.perception);
    assert!(sample.uncertainty > mean.uncertainty);
    assert!((mean.uncertainty - ctx.n_xy).abs() <= 0.15 * ctx.n_xy);
    let ratio = sample.uncertainty / mean.uncertainty;
    assert!((ratio - 2.0).abs() < 0.1, "{ratio}");
    assert_ne!(mean.region, Some(Region::Impossible));
    assert_ne!(sample.region, Some(Region::Impossible));
}

#[test]
fn missing_file_names_path() {
    let dir = tempfile::tempdir().unwrap();
    let spec = GaussianFixtureSpec {
        n_images: 2,
        seed: 1,
        ..Default::default()
    };
    write_gaussian_fixture(dir.path(), &spec).unwrap();
    std::fs::remove_file(dir.path().join("posterior-mean").join("img_001.f32")).unwrap();
    let err = evaluate_algorithm(
        "m",
        &dir.path().join("posterior-mean").join(MANIFEST_FILE),
        &EvaluateConfig::default(),
    )
    .unwrap_err()
    .to_string();
    assert!(err.contains("img_001.f32"), "{err}");
    let empty = tempfile::tempdir().unwrap();
    assert!(discover_algorithms(empty.path()).is_err());
}
