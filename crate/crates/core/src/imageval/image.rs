//! Image decoding and encoding: binary PGM (P5) / PPM (P6) at 8 or 16 bits,
//! and raw little-endian f32 tensors with a `<path>.json` sidecar
//! `{"h": …, "w": …, "c": …}`.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::sidecar_path;

/// Row-major image with channels interleaved, values in [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct ImageTensor {
    height: usize,
    width: usize,
    channels: usize,
    pixels: Vec<f64>,
}

impl ImageTensor {
    pub fn new(height: usize, width: usize, channels: usize, pixels: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 || !(channels == 1 || channels == 3) {
            return Err(Error::ShapeMismatch(format!("{height}x{width}x{channels}")));
        }
        if pixels.len() != height * width * channels {
            return Err(Error::ShapeMismatch(format!(
                "{} values for a {height}x{width}x{channels} image",
                pixels.len()
            )));
        }
        if let Some(i) = pixels.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("pixel {i}")));
        }
        if let Some(i) = pixels.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::Domain(format!("pixel {i} = {} outside [0, 1]", pixels[i])));
        }
        Ok(Self {
            height,
            width,
            channels,
            pixels,
        })
    }

    /// Clamps values into [0, 1] before constructing.
    pub fn from_clamped(height: usize, width: usize, channels: usize, mut pixels: Vec<f64>) -> Result<Self> {
        for v in pixels.iter_mut() {
            if v.is_finite() {
                *v = v.clamp(0.0, 1.0);
            }
        }
        Self::new(height, width, channels, pixels)
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn pixels(&self) -> &[f64] {
        &self.pixels
    }

    pub fn get(&self, row: usize, col: usize, ch: usize) -> f64 {
        self.pixels[(row * self.width + col) * self.channels + ch]
    }

    pub fn same_shape(&self, other: &ImageTensor) -> bool {
        (self.height, self.width, self.channels) == (other.height, other.width, other.channels)
    }

    pub fn shape_string(&self) -> String {
        format!("{}x{}x{}", self.height, self.width, self.channels)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
struct RawImageSidecar {
    h: usize,
    w: usize,
    c: usize,
}

pub fn load_image(path: &Path) -> Result<ImageTensor> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    if bytes.starts_with(b"P5") || bytes.starts_with(b"P6") {
        return decode_pnm(&bytes);
    }
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .unwrap_or("")
        .to_ascii_lowercase();
    if matches!(ext.as_str(), "f32" | "raw" | "bin") {
        return decode_raw(path, &bytes);
    }
    Err(Error::UnsupportedFormat(path.display().to_string()))
}

fn decode_raw(path: &Path, bytes: &[u8]) -> Result<ImageTensor> {
    let side = sidecar_path(path);
    let text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta: RawImageSidecar =
        serde_json::from_str(&text).map_err(|e| Error::CorruptHeader(format!("{}: {e}", side.display())))?;
    let expected = meta.h * meta.w * meta.c * 4;
    if bytes.len() < expected {
        return Err(Error::TruncatedData {
            expected,
            found: bytes.len(),
        });
    }
    let pixels = bytes[..expected]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    ImageTensor::new(meta.h, meta.w, meta.c, pixels)
}

/// Reads the next whitespace-delimited header token, skipping `#` comments.
fn header_token(bytes: &[u8], pos: &mut usize) -> Result<usize> {
    loop {
        while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
            *pos += 1;
        }
        if *pos < bytes.len() && bytes[*pos] == b'#' {
            while *pos < bytes.len() && bytes[*pos] != b'\n' {
                *pos += 1;
            }
            continue;
        }
        break;
    }
    let start = *pos;
    while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
        *pos += 1;
    }
    if start == *pos {
        return Err(Error::CorruptHeader("expected a number".into()));
    }
    std::str::from_utf8(&bytes[start..*pos])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::CorruptHeader("number out of range".into()))
}

fn decode_pnm(bytes: &[u8]) -> Result<ImageTensor> {
    let channels = if bytes[1] == b'5' { 1 } else { 3 };
    let mut pos = 2;
    let width = header_token(bytes, &mut pos)?;
    let height = header_token(bytes, &mut pos)?;
    let maxval = header_token(bytes, &mut pos)?;
    if width == 0 || height == 0 {
        return Err(Error::CorruptHeader(format!("zero dimension {width}x{height}")));
    }
    if maxval == 0 || maxval > 65535 {
        return Err(Error::CorruptHeader(format!("maxval {maxval}")));
    }
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(Error::CorruptHeader("missing separator after maxval".into()));
    }
    pos += 1;
    let bps = if maxval > 255 { 2 } else { 1 };
    let count = width * height * channels;
    let payload = &bytes[pos..];
    if payload.len() < count * bps {
        return Err(Error::TruncatedData {
            expected: count * bps,
            found: payload.len(),
        });
    }
    let scale = maxval as f64;
    let pixels = if bps == 1 {
        payload[..count]
            .iter()
            .map(|&b| (b as f64 / scale).min(1.0))
            .collect()
    } else {
        payload[..2 * count]
            .chunks_exact(2)
            .map(|c| (u16::from_be_bytes([c[0], c[1]]) as f64 / scale).min(1.0))
            .collect()
    };
    ImageTensor::new(height, width, channels, pixels)
}

/// Writes P5 (one channel) or P6 (three channels) with the given bit depth.
pub fn save_pnm(path: &Path, img: &ImageTensor, bits: u8) -> Result<()> {
    let (maxval, bps) = match bits {
        8 => (255u32, 1),
        16 => (65535u32, 2),
        _ => return Err(Error::UnsupportedFormat(format!("{bits}-bit PNM"))),
    };
    let magic = if img.channels == 1 { "P5" } else { "P6" };
    let mut out = format!("{magic}\n{} {}\n{maxval}\n", img.width, img.height).into_bytes();
    out.reserve(img.pixels.len() * bps);
    for &v in &img.pixels {
        let q = (v * maxval as f64).round() as u32;
        if bps == 1 {
            out.push(q as u8);
        } else {
            out.extend_from_slice(&(q as u16).to_be_bytes());
        }
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn save_raw_image(path: &Path, img: &ImageTensor) -> Result<()> {
    let bytes: Vec<u8> = img
        .pixels
        .iter()
        .flat_map(|&v| (v as f32).to_le_bytes())
        .collect();
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let meta = RawImageSidecar {
        h: img.height,
        w: img.width,
        c: img.channels,
    };
    let side = sidecar_path(path);
    fs::write(&side, serde_json::to_string(&meta)?).map_err(|e| Error::io(&side, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write(dir: &Path, name: &str, bytes: &[u8]) -> std::path::PathBuf {
        let p = dir.join(name);
        fs::write(&p, bytes).unwrap();
        p
    }

    #[test]
    fn pgm_8bit() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = b"P5\n# comment\n2 2\n255\n".to_vec();
        b.extend([0, 255, 128, 64]);
        let img = load_image(&write(dir.path(), "a.pgm", &b)).unwrap();
        let want = [0.0, 1.0, 128.0 / 255.0, 64.0 / 255.0];
        for (a, w) in img.pixels().iter().zip(want) {
            assert!((a - w).abs() < 1e-12);
        }
        assert!((img.pixels()[2] - 0.50196).abs() < 1e-5);
    }

    #[test]
    fn ppm_and_16bit() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = b"P6 1 1 255\n".to_vec();
        b.extend([255, 0, 0]);
        let img = load_image(&write(dir.path(), "a.ppm", &b)).unwrap();
        assert_eq!(img.pixels(), &[1.0, 0.0, 0.0]);
        let mut b = b"P5 1 1 65535\n".to_vec();
        b.extend([0x80, 0x00]);
        let img = load_image(&write(dir.path(), "b.pgm", &b)).unwrap();
        assert!((img.pixels()[0] - 32768.0 / 65535.0).abs() < 1e-12);
    }

    #[test]
    fn error_paths() {
        let dir = tempfile::tempdir().unwrap();
        let mut b = b"P5\n2 2\n255\n".to_vec();
        b.extend([1, 2, 3]);
        let p = write(dir.path(), "t.pgm", &b);
        assert!(matches!(
            load_image(&p),
            Err(Error::TruncatedData {
                expected: 4,
                found: 3
            })
        ));
        let p = write(dir.path(), "h.pgm", b"P5\nxx 2\n255\n");
        assert!(matches!(load_image(&p), Err(Error::CorruptHeader(_))));
        let p = write(dir.path(), "x.png", b"\x89PNG");
        assert!(matches!(load_image(&p), Err(Error::UnsupportedFormat(_))));
    }

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let img = ImageTensor::new(2, 3, 3, (0..18).map(|i| i as f64 / 17.0).collect()).unwrap();
        let p = dir.path().join("a.f32");
        save_raw_image(&p, &img).unwrap();
        let back = load_image(&p).unwrap();
        for (a, b) in back.pixels().iter().zip(img.pixels()) {
            assert!((a - b).abs() < 1e-7);
        }
        for bits in [8, 16] {
            let p = dir.path().join(format!("a{bits}.ppm"));
            save_pnm(&p, &img, bits).unwrap();
            let back = load_image(&p).unwrap();
            let step = if bits == 8 { 0.5 / 255.0 } else { 0.5 / 65535.0 };
            for (a, b) in back.pixels().iter().zip(img.pixels()) {
                assert!((a - b).abs() <= step + 1e-12);
            }
        }
    }
}
