use crate::error::{Error, Result};

/// Bounds on D_r implied by D_t for 0 < r ≤ t < 1:
/// (r/t)·((1−t)/(1−r))·D_t ≤ D_r ≤ D_t.
pub fn renyi_order_interval(value_t: f64, r: f64, t: f64) -> Result<(f64, f64)> {
    if !(r > 0.0 && r < 1.0 && t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!("orders must lie in (0, 1): r={r}, t={t}")));
    }
    if r > t {
        return Err(Error::Order { r, t });
    }
    if !(value_t >= 0.0) {
        return Err(Error::Domain(format!("divergence must be ≥ 0, got {value_t}")));
    }
    let lower = (r / t) * ((1.0 - t) / (1.0 - r)) * value_t;
    Ok((lower, value_t))
}

/// Weighted average of per-condition values, e.g. E_y[D(p_{X|y}, p_{X̂|y})].
pub fn conditional_pool(values: &[f64], weights: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if values.len() != weights.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} values, {} weights",
            values.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::Domain(format!("weights must be finite and ≥ 0, got {w}")));
    }
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroWeight);
    }
    Ok(values.iter().zip(weights).map(|(v, w)| v * w).sum::<f64>() / total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn order_interval_examples() {
        assert_eq!(renyi_order_interval(1.0, 0.5, 0.5).unwrap(), (1.0, 1.0));
        let (lo, hi) = renyi_order_interval(2.0, 0.25, 0.5).unwrap();
        assert!((lo - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(hi, 2.0);
        assert_eq!(renyi_order_interval(0.0, 0.1, 0.9).unwrap(), (0.0, 0.0));
        assert!(matches!(
            renyi_order_interval(1.0, 0.6, 0.5),
            Err(Error::Order { .. })
        ));
        assert!(renyi_order_interval(1.0, 0.0, 0.5).is_err());
    }

    #[test]
    fn pooling_examples() {
        assert_eq!(conditional_pool(&[1.0, 3.0], &[1.0, 1.0]).unwrap(), 2.0);
        assert_eq!(conditional_pool(&[5.0], &[2.0]).unwrap(), 5.0);
        assert_eq!(conditional_pool(&[0.0, 1.0, 2.0], &[1.0, 0.0, 1.0]).unwrap(), 1.0);
        assert!(matches!(conditional_pool(&[], &[]), Err(Error::EmptyInput)));
        assert!(matches!(conditional_pool(&[1.0], &[0.0]), Err(Error::ZeroWeight)));
    }

    proptest! {
        #[test]
        fn interval_ordered(v in 0.0f64..100.0, a in 0.01f64..0.99, b in 0.01f64..0.99) {
            let (r, t) = if a <= b { (a, b) } else { (b, a) };
            let (lo, hi) = renyi_order_interval(v, r, t).unwrap();
            prop_assert!(lo <= hi);
            if r < t && v > 0.0 {
                prop_assert!(lo < hi);
            }
        }
    }
}
