use serde::{Deserialize, Serialize};

use super::eta::{eta, eta_hellinger};
use crate::error::{Error, Result};

/// Default relative tolerance for region classification.
pub const DEFAULT_REGION_TOL: f64 = 0.02;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DivergenceKind {
    RenyiHalf,
    Hellinger,
}

impl DivergenceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DivergenceKind::RenyiHalf => "renyi-half",
            DivergenceKind::Hellinger => "hellinger",
        }
    }
}

impl std::str::FromStr for DivergenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "renyi-half" | "renyi" => Ok(DivergenceKind::RenyiHalf),
            "hellinger" => Ok(DivergenceKind::Hellinger),
            other => Err(Error::Config(format!("unknown divergence kind '{other}'"))),
        }
    }
}

/// η for the given divergence kind.
pub fn eta_for(kind: DivergenceKind, p: f64, d: usize) -> Result<f64> {
    match kind {
        DivergenceKind::RenyiHalf => {
            if p < 0.0 || p.is_nan() {
                return Err(Error::Domain(format!("perception must be ≥ 0, got {p}")));
            }
            Ok(eta(p, d))
        }
        DivergenceKind::Hellinger => eta_hellinger(p, d),
    }
}

/// Everything needed to draw the UP plane for one problem: dimension, the
/// inherent uncertainty N(X|Y) and its Gaussian envelope N(X_G|Y).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlaneContext {
    d: usize,
    n_xy: f64,
    n_xgy: f64,
    kind: DivergenceKind,
}

impl PlaneContext {
    pub fn new(d: usize, n_xy: f64, n_xgy: f64, kind: DivergenceKind) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("dimension must be ≥ 1".into()));
        }
        if !(n_xy >= 0.0 && n_xgy >= 0.0) || !n_xy.is_finite() || !n_xgy.is_finite() {
            return Err(Error::Domain(format!(
                "entropy powers must be finite and ≥ 0, got {n_xy}, {n_xgy}"
            )));
        }
        if n_xy > n_xgy {
            return Err(Error::OrderViolation { n_xy, n_xgy });
        }
        Ok(Self { d, n_xy, n_xgy, kind })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n_xy(&self) -> f64 {
        self.n_xy
    }

    pub fn n_xgy(&self) -> f64 {
        self.n_xgy
    }

    pub fn kind(&self) -> DivergenceKind {
        self.kind
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UpPoint {
    pub perception: f64,
    pub uncertainty: f64,
    pub label: String,
}

impl UpPoint {
    pub fn new(perception: f64, uncertainty: f64, label: impl Into<String>) -> Result<Self> {
        if !(perception >= 0.0) || !perception.is_finite() {
            return Err(Error::Domain(format!(
                "perception must be finite and ≥ 0, got {perception}"
            )));
        }
        if !(uncertainty >= 0.0) || !uncertainty.is_finite() {
            return Err(Error::Domain(format!(
                "uncertainty must be finite and ≥ 0, got {uncertainty}"
            )));
        }
        Ok(Self {
            perception,
            uncertainty,
            label: label.into(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Impossible,
    Optimal,
    Suboptimal,
}

impl Region {
    pub fn as_str(self) -> &'static str {
        match self {
            Region::Impossible => "impossible",
            Region::Optimal => "optimal",
            Region::Suboptimal => "suboptimal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionVerdict {
    pub region: Region,
    pub lower: f64,
    pub upper: f64,
    /// Uncertainty minus the violated bound, or minus the nearer bound when
    /// the point lies inside the band.
    pub slack: f64,
}

/// Lower and upper uncertainty bounds (η·N(X|Y), η·N(X_G|Y)) at perception P.
pub fn up_region_bounds(p: f64, ctx: &PlaneContext) -> Result<(f64, f64)> {
    let e = eta_for(ctx.kind, p, ctx.d)?;
    Ok((e * ctx.n_xy, e * ctx.n_xgy))
}

/// Classifies a point against the band between the two η curves, widened by
/// the relative tolerance `tol` on either side.
pub fn classify_point(pt: &UpPoint, ctx: &PlaneContext, tol: f64) -> Result<RegionVerdict> {
    let (lower, upper) = up_region_bounds(pt.perception, ctx)?;
    let u = pt.uncertainty;
    let (region, slack) = if u < lower * (1.0 - tol) {
        (Region::Impossible, u - lower)
    } else if u > upper * (1.0 + tol) {
        (Region::Suboptimal, u - upper)
    } else {
        let to_lower = u - lower;
        let to_upper = u - upper;
        let slack = if to_lower.abs() <= to_upper.abs() {
            to_lower
        } else {
            to_upper
        };
        (Region::Optimal, slack)
    };
    Ok(RegionVerdict {
        region,
        lower,
        upper,
        slack,
    })
}

/// N(X|Y) ≤ U(P) ≤ 2 N(X_G|Y).
pub fn theorem1_bounds(n_xy: f64, n_xgy: f64) -> Result<(f64, f64)> {
    if n_xy > n_xgy {
        return Err(Error::OrderViolation { n_xy, n_xgy });
    }
    Ok((n_xy, 2.0 * n_xgy))
}

/// Gaussian envelope N(X_G|Y) = N(X|Y)·exp(2 D_KL(X, X_G|Y) / d).
pub fn gaussianity_gap(n_xy: f64, dkl_to_gaussian: f64, d: usize) -> f64 {
    n_xy * (2.0 * dkl_to_gaussian / d as f64).exp()
}

/// Per-dimension MSE must dominate the conditional error entropy power.
/// Returns `(holds, mse_per_dim − error_entropy_power)`.
pub fn check_distortion_bound(mse_per_dim: f64, error_entropy_power: f64, tol: f64) -> (bool, f64) {
    (
        mse_per_dim >= error_entropy_power * (1.0 - tol),
        mse_per_dim - error_entropy_power,
    )
}
