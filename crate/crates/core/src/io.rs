//! Sample-set file formats.
//!
//! - CSV: one sample per line, comma separated; a first line that does not
//!   parse as numbers is treated as a header.
//! - Raw little-endian f32 (`.f32` or `.bin`) with a JSON sidecar at
//!   `<path>.json` holding `{"n": …, "d": …, "dtype": "f32"}`.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numstats::SampleSet;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawSidecar {
    pub n: usize,
    pub d: usize,
    pub dtype: String,
}

pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn is_raw(path: &Path) -> bool {
    matches!(
        path.extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase())
            .as_deref(),
        Some("f32" | "bin" | "raw")
    )
}

/// Loads a sample set, choosing the format from the file extension.
pub fn load_samples(path: &Path) -> Result<SampleSet> {
    if is_raw(path) {
        load_raw(path)
    } else {
        load_csv(path)
    }
}

pub fn save_samples(path: &Path, s: &SampleSet) -> Result<()> {
    if is_raw(path) {
        save_raw(path, s)
    } else {
        save_csv(path, s)
    }
}

pub fn load_csv(path: &Path) -> Result<SampleSet> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_csv(&text)
}

pub fn parse_csv(text: &str) -> Result<SampleSet> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> =
            line.split(',').map(|f| f.trim().parse::<f64>()).collect();
        match parsed {
            Ok(row) => rows.push(row),
            Err(_) if rows.is_empty() && i == 0 => continue,
            Err(_) => return Err(Error::NonFinite(format!("unparseable value on line {}", i + 1))),
        }
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    SampleSet::from_rows(&rows)
}

pub fn save_csv(path: &Path, s: &SampleSet) -> Result<()> {
    let mut out = String::new();
    for row in s.rows() {
        let fields: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&fields.join(","));
        out.push('\n');
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}

pub fn load_raw(path: &Path) -> Result<SampleSet> {
    let side = sidecar_path(path);
    let meta_text = fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
    let meta: RawSidecar = serde_json::from_str(&meta_text)?;
    if meta.dtype != "f32" {
        return Err(Error::UnsupportedFormat(format!("dtype {}", meta.dtype)));
    }
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let expected = meta.n * meta.d * 4;
    if bytes.len() < expected {
        return Err(Error::TruncatedData {
            expected,
            found: bytes.len(),
        });
    }
    let data = bytes[..expected]
        .chunks_exact(4)
        .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64)
        .collect();
    SampleSet::new(data, meta.n, meta.d)
}

pub fn save_raw(path: &Path, s: &SampleSet) -> Result<()> {
    let bytes: Vec<u8> = s.data().iter().flat_map(|&v| (v as f32).to_le_bytes()).collect();
    fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    let meta = RawSidecar {
        n: s.n(),
        d: s.d(),
        dtype: "f32".into(),
    };
    let side = sidecar_path(path);
    fs::write(&side, serde_json::to_string(&meta)?).map_err(|e| Error::io(&side, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_header_skipped() {
        let s = parse_csv("x,y\n1,2\n3,4\n").unwrap();
        assert_eq!((s.n(), s.d()), (2, 2));
        assert_eq!(s.row(1), &[3.0, 4.0]);
        assert!(parse_csv("1,2\nfoo,3\n").is_err());
        assert!(matches!(parse_csv("a,b\n"), Err(Error::EmptyInput)));
    }

    #[test]
    fn round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let s = SampleSet::new(vec![0.5, -1.25, 2.0, 3.0, 0.0, 1.0], 3, 2).unwrap();
        for name in ["a.csv", "a.f32"] {
            let p = dir.path().join(name);
            save_samples(&p, &s).unwrap();
            assert_eq!(load_samples(&p).unwrap(), s);
        }
        assert!(dir.path().join("a.f32.json").exists());
    }

    #[test]
    fn truncated_raw() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.bin");
        fs::write(&p, [0u8; 10]).unwrap();
        fs::write(sidecar_path(&p), r#"{"n":2,"d":2,"dtype":"f32"}"#).unwrap();
        assert!(matches!(
            load_samples(&p),
            Err(Error::TruncatedData {
                expected: 16,
                found: 10
            })
        ));
    }
}
