use super::image::ImageTensor;
use crate::error::{Error, Result};

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
pub const SSIM_K1: f64 = 0.01;
pub const SSIM_K2: f64 = 0.03;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    pub mse: f64,
    /// +inf when `mse` is zero.
    pub psnr: f64,
    pub ssim: f64,
}

/// PSNR for unit dynamic range.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse > 0.0 {
        10.0 * (1.0 / mse).log10()
    } else {
        f64::INFINITY
    }
}

pub fn distortion_metrics(x: &ImageTensor, xhat: &ImageTensor) -> Result<Distortion> {
    if !x.same_shape(xhat) {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {}",
            x.shape_string(),
            xhat.shape_string()
        )));
    }
    let n = x.pixels().len() as f64;
    let mse = x
        .pixels()
        .iter()
        .zip(xhat.pixels())
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        / n;
    Ok(Distortion {
        mse,
        psnr: psnr_from_mse(mse),
        ssim: ssim(x, xhat)?,
    })
}

fn gaussian_window(len: usize) -> Vec<f64> {
    let c = (len as f64 - 1.0) / 2.0;
    let w: Vec<f64> = (0..len)
        .map(|i| (-(i as f64 - c).powi(2) / (2.0 * SSIM_SIGMA * SSIM_SIGMA)).exp())
        .collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|v| v / s).collect()
}

/// Separable "valid" filtering of an h×w plane.
fn filter(plane: &[f64], h: usize, w: usize, k: &[f64]) -> (Vec<f64>, usize, usize) {
    let kl = k.len();
    let ow = w - kl + 1;
    let oh = h - kl + 1;
    let mut tmp = vec![0.0; h * ow];
    for r in 0..h {
        for c in 0..ow {
            tmp[r * ow + c] = (0..kl).map(|i| k[i] * plane[r * w + c + i]).sum();
        }
    }
    let mut out = vec![0.0; oh * ow];
    for r in 0..oh {
        for c in 0..ow {
            out[r * ow + c] = (0..kl).map(|i| k[i] * tmp[(r + i) * ow + c]).sum();
        }
    }
    (out, oh, ow)
}

/// Mean local SSIM over valid window positions, averaged over channels.
/// The window shrinks to the smaller image side when it is below 11.
pub fn ssim(x: &ImageTensor, y: &ImageTensor) -> Result<f64> {
    if !x.same_shape(y) {
        return Err(Error::ShapeMismatch(format!(
            "{} vs {}",
            x.shape_string(),
            y.shape_string()
        )));
    }
    let (h, w, ch) = (x.height(), x.width(), x.channels());
    let k = gaussian_window(SSIM_WINDOW.min(h).min(w));
    let c1 = (SSIM_K1 * 1.0f64).powi(2);
    let c2 = (SSIM_K2 * 1.0f64).powi(2);
    let mut total = 0.0;
    for c in 0..ch {
        let a: Vec<f64> = (0..h * w).map(|i| x.pixels()[i * ch + c]).collect();
        let b: Vec<f64> = (0..h * w).map(|i| y.pixels()[i * ch + c]).collect();
        let aa: Vec<f64> = a.iter().map(|v| v * v).collect();
        let bb: Vec<f64> = b.iter().map(|v| v * v).collect();
        let ab: Vec<f64> = a.iter().zip(&b).map(|(u, v)| u * v).collect();
        let (ma, oh, ow) = filter(&a, h, w, &k);
        let (mb, ..) = filter(&b, h, w, &k);
        let (saa, ..) = filter(&aa, h, w, &k);
        let (sbb, ..) = filter(&bb, h, w, &k);
        let (sab, ..) = filter(&ab, h, w, &k);
        let mut acc = 0.0;
        for i in 0..oh * ow {
            let (mu_a, mu_b) = (ma[i], mb[i]);
            let va = saa[i] - mu_a * mu_a;
            let vb = sbb[i] - mu_b * mu_b;
            let cov = sab[i] - mu_a * mu_b;
            acc += ((2.0 * mu_a * mu_b + c1) * (2.0 * cov + c2))
                / ((mu_a * mu_a + mu_b * mu_b + c1) * (va + vb + c2));
        }
        total += acc / (oh * ow) as f64;
    }
    Ok(total / ch as f64)
}
