use nalgebra::DMatrix;

use super::{sample::SampleSet, spd::SpdMatrix};
use crate::error::{Error, Result};
use crate::par::Exec;

const CHUNK_ROWS: usize = 512;

/// Unbiased sample covariance plus `ridge·I`, eigen-clamped on construction.
pub fn sample_covariance(s: &SampleSet, ridge: f64) -> Result<SpdMatrix> {
    sample_covariance_with(s, ridge, Exec::default())
}

pub fn sample_covariance_with(s: &SampleSet, ridge: f64, exec: Exec) -> Result<SpdMatrix> {
    if s.n() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: s.n(),
        });
    }
    if !(ridge >= 0.0) || !ridge.is_finite() {
        return Err(Error::Domain(format!(
            "ridge must be finite and ≥ 0, got {ridge}"
        )));
    }
    let d = s.d();
    let n = s.n();
    let mean = s.mean();
    let partials = exec.map_chunks(n, CHUNK_ROWS, |start, end| {
        let mut acc = vec![0.0; d * d];
        let mut c = vec![0.0; d];
        for i in start..end {
            for ((cj, x), m) in c.iter_mut().zip(s.row(i)).zip(&mean) {
                *cj = x - m;
            }
            for a in 0..d {
                let ca = c[a];
                let row = &mut acc[a * d..(a + 1) * d];
                for b in a..d {
                    row[b] += ca * c[b];
                }
            }
        }
        acc
    });
    let mut total = vec![0.0; d * d];
    for p in &partials {
        for (t, v) in total.iter_mut().zip(p) {
            *t += v;
        }
    }
    let denom = (n - 1) as f64;
    let m = DMatrix::from_fn(d, d, |a, b| {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        total[lo * d + hi] / denom + if a == b { ridge } else { 0.0 }
    });
    SpdMatrix::new(m)
}
