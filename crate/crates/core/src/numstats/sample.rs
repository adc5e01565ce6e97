use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An `n × d` batch of finite real sample vectors stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleSet {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl SampleSet {
    pub fn new(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::EmptyInput);
        }
        if data.len() != n * d {
            return Err(Error::DimensionMismatch(format!(
                "buffer holds {} values, expected {n}×{d}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("row {}, column {}", pos / d, pos % d)));
        }
        Ok(Self { data, n, d })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let d = rows.first().map(|r| r.as_ref().len()).unwrap_or(0);
        let mut data = Vec::with_capacity(rows.len() * d);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            if r.len() != d {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} columns, expected {d}",
                    r.len()
                )));
            }
            data.extend_from_slice(r);
        }
        Self::new(data, rows.len(), d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn into_data(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.d)
    }

    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.d];
        for r in self.rows() {
            for (a, v) in m.iter_mut().zip(r) {
                *a += v;
            }
        }
        let n = self.n as f64;
        m.iter_mut().for_each(|a| *a /= n);
        m
    }

    /// Per-dimension standard deviation with the `n − 1` denominator.
    pub fn std_dev(&self) -> Vec<f64> {
        let mean = self.mean();
        let mut acc = vec![0.0; self.d];
        for r in self.rows() {
            for ((a, v), m) in acc.iter_mut().zip(r).zip(&mean) {
                *a += (v - m) * (v - m);
            }
        }
        let denom = (self.n.max(2) - 1) as f64;
        acc.into_iter().map(|a| (a / denom).sqrt()).collect()
    }

    /// Largest per-dimension extent `max − min`.
    pub fn range(&self) -> f64 {
        (0..self.d)
            .map(|j| {
                let (lo, hi) = self
                    .rows()
                    .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), r| {
                        (lo.min(r[j]), hi.max(r[j]))
                    });
                hi - lo
            })
            .fold(0.0, f64::max)
    }

    /// Applies `f` to every entry, returning a new set.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(self.data.iter().map(|&v| f(v)).collect(), self.n, self.d)
    }

    /// Adds `shift[j]` to column `j` of every row.
    pub fn translate(&self, shift: &[f64]) -> Result<Self> {
        if shift.len() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "shift has length {}, expected {}",
                shift.len(),
                self.d
            )));
        }
        let data = self
            .rows()
            .flat_map(|r| r.iter().zip(shift).map(|(a, b)| a + b))
            .collect();
        Self::new(data, self.n, self.d)
    }

    /// Row-wise elementwise difference `self − other`.
    pub fn sub(&self, other: &SampleSet) -> Result<Self> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::DimensionMismatch(format!(
                "{}×{} vs {}×{}",
                self.n, self.d, other.n, other.d
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Self::new(data, self.n, self.d)
    }

    /// Keeps rows `0, step, 2·step, …`.
    pub fn strided(&self, step: usize) -> Self {
        let step = step.max(1);
        let mut data = Vec::new();
        for r in self.rows().step_by(step) {
            data.extend_from_slice(r);
        }
        let n = data.len() / self.d;
        Self { data, n, d: self.d }
    }

    pub fn select_rows(&self, idx: &[usize]) -> Result<Self> {
        let mut data = Vec::with_capacity(idx.len() * self.d);
        for &i in idx {
            if i >= self.n {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} out of range {}",
                    self.n
                )));
            }
            data.extend_from_slice(self.row(i));
        }
        Self::new(data, idx.len(), self.d)
    }
}
