/// Closed-form UP function of the scalar denoising example Y = X + W with
/// X ~ N(0, 1), W ~ N(0, σ²), perception measured by symmetric KL and
/// estimators X̂ = E[X|Y] + Z.
///
/// Returns `(U(P), σ_z*)` with U(P) = σ_q²[1 + t²], σ_z* = σ_q·t,
/// t = P + 1 − √((P+1)² − 1) and σ_q² = σ²/(1+σ²).
pub fn example1_up(p: f64, sigma2: f64) -> (f64, f64) {
    let sigma_q2 = sigma2 / (1.0 + sigma2);
    let s = p.max(0.0) + 1.0;
    // s − √(s² − 1) = 1/(s + √(s² − 1))
    let t = 1.0 / (s + ((s - 1.0) * (s + 1.0)).sqrt());
    (sigma_q2 * (1.0 + t * t), sigma_q2.sqrt() * t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let (u, sz) = example1_up(0.0, 1.0);
        assert_eq!(u, 1.0);
        assert!((sz - 0.5f64.sqrt()).abs() < 1e-15);
        // 0.5·(1 + (2 − √3)²), mpmath
        assert!((example1_up(1.0, 1.0).0 - 0.535_898_384_862_245_4).abs() < 1e-14);
        assert!((example1_up(1e9, 1.0).0 - 0.5).abs() < 1e-9);
    }
}
