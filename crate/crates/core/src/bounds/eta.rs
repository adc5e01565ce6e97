use crate::error::{Error, Result};

/// 1/(x + √(x² − 1)) with x = 2a − 1, which equals 2a − 1 − √((2a − 1)² − 1)
/// but keeps full relative precision when a is large.
fn gamma_from_growth(a: f64) -> f64 {
    let x = 2.0 * a - 1.0;
    if x.is_infinite() {
        return 0.0;
    }
    1.0 / (x + ((x - 1.0) * (x + 1.0)).max(0.0).sqrt())
}

/// Rényi-½ uncertainty multiplier η(P; d) = 2e^{2P/d} − √((2e^{2P/d} − 1)² − 1).
///
/// η(0) = 2, η decreases strictly and convexly towards 1 as P → ∞. Negative
/// or NaN perception is treated as 0.
pub fn eta(p: f64, d: usize) -> f64 {
    1.0 + gamma(p, d)
}

/// Optimal proportionality constant γ(P) = η(P) − 1 of Σ̂ = γ Σ_{x|y}.
pub fn gamma(p: f64, d: usize) -> f64 {
    let p = if p > 0.0 { p } else { 0.0 };
    gamma_from_growth((2.0 * p / d as f64).exp())
}

/// γ² + 2γ + 1 − 4γ e^{2P/d}; vanishes exactly at γ = γ(P).
pub fn gamma_residual(gamma: f64, p: f64, d: usize) -> f64 {
    gamma * gamma + 2.0 * gamma + 1.0 - 4.0 * gamma * (2.0 * p / d as f64).exp()
}

/// Hellinger-distance multiplier
/// η_H(P; d) = 2/(1−P)^{4/d} − √((2/(1−P)^{4/d} − 1)² − 1) for P ∈ [0, 1],
/// with η_H(1) = 1 by continuity.
pub fn eta_hellinger(p: f64, d: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "Hellinger perception must be in [0, 1], got {p}"
        )));
    }
    if p == 1.0 {
        return Ok(1.0);
    }
    Ok(1.0 + gamma_from_growth((1.0 - p).powf(-4.0 / d as f64)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::excessive_precision)]
    fn eta_examples() {
        for d in [1, 2, 10, 100] {
            assert_eq!(eta(0.0, d), 2.0);
            assert!((eta(50.0 * d as f64, d) - 1.0).abs() < 1e-8);
        }
        // 2e - sqrt((2e-1)^2 - 1), mpmath
        assert!((eta(1.0, 2) - 1.114_168_825_127_914_9).abs() < 1e-14);
        assert_eq!(eta(1e6, 1), 1.0);
    }

    #[test]
    fn matches_naive_form_where_stable() {
        for &p in &[0.01, 0.1, 0.7, 2.0, 5.0] {
            for d in [1, 3, 8] {
                let a = (2.0 * p / d as f64).exp();
                let naive = 2.0 * a - ((2.0 * a - 1.0).powi(2) - 1.0).sqrt();
                assert!((eta(p, d) - naive).abs() < 1e-12 * naive.max(1.0) * a);
            }
        }
    }

    #[test]
    fn gamma_residual_examples() {
        assert!(gamma_residual(gamma(0.3, 1), 0.3, 1).abs() <= 1e-10);
        assert_eq!(gamma_residual(1.0, 0.0, 1), 0.0);
        let p = 0.5 * 1.125f64.ln();
        assert!(gamma_residual(0.5, p, 1).abs() <= 1e-10);
        assert!((gamma(p, 1) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn hellinger_examples() {
        for d in [1, 2, 81] {
            assert_eq!(eta_hellinger(0.0, d).unwrap(), 2.0);
            assert_eq!(eta_hellinger(1.0, d).unwrap(), 1.0);
        }
        for d in [1, 2] {
            assert!((eta_hellinger(1.0 - 1e-9, d).unwrap() - 1.0).abs() < 1e-6);
        }
        // a = 8: 8 - sqrt(48)
        assert!((eta_hellinger(0.5, 2).unwrap() - 1.071_796_769_724_490_8).abs() < 1e-14);
        assert!(matches!(eta_hellinger(-0.1, 2), Err(Error::Domain(_))));
        assert!(matches!(eta_hellinger(1.5, 2), Err(Error::Domain(_))));
    }
}
