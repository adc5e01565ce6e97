//! Special functions needed by the entropy estimators.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Digamma ψ(x) for x > 0.
///
/// Shifts the argument up to x ≥ 6 with ψ(x) = ψ(x+1) − 1/x, then applies the
/// asymptotic series ln x − 1/(2x) − Σ B₂ₖ/(2k x²ᵏ) truncated after six terms.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < 6.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // B2/2, B4/4, ..., B12/12
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    Ok(acc + x.ln() - 0.5 * inv - series)
}

/// ln Γ(x) for x > 0, by upward recurrence to x ≥ 10 and the Stirling series.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv
        * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
    Ok(shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series)
}

/// Natural log of the volume of the unit Euclidean ball in `d` dimensions,
/// ln(π^{d/2} / Γ(d/2 + 1)).
pub fn ln_unit_ball_volume(d: usize) -> f64 {
    let half = d as f64 / 2.0;
    half * PI.ln() - ln_gamma(half + 1.0).expect("d/2 + 1 > 0")
}
