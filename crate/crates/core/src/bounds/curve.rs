use std::io::Write;

use serde::{Deserialize, Serialize};

use super::plane::{eta_for, PlaneContext};
use crate::error::{Error, Result};

/// Evenly spaced perception grid `min..=max` with `steps` points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PGrid {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl PGrid {
    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min < 0.0 || max < min {
            return Err(Error::Config(format!("invalid perception grid [{min}, {max}]")));
        }
        if steps == 0 || (steps == 1 && max > min) {
            return Err(Error::Config(format!("grid needs at least 2 steps, got {steps}")));
        }
        Ok(Self { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.min];
        }
        let step = (self.max - self.min) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + step * i as f64
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    #[serde(rename = "P")]
    pub p: f64,
    pub eta: f64,
    pub lower: f64,
    pub upper: f64,
}

pub fn curve_rows(ctx: &PlaneContext, grid: &[f64]) -> Result<Vec<CurveRow>> {
    grid.iter()
        .map(|&p| {
            let eta = eta_for(ctx.kind(), p, ctx.d())?;
            Ok(CurveRow {
                p,
                eta,
                lower: eta * ctx.n_xy(),
                upper: eta * ctx.n_xgy(),
            })
        })
        .collect()
}

/// Writes `P,eta,lower,upper` rows with round-trip float formatting.
pub fn write_curve_csv<W: Write>(mut w: W, rows: &[CurveRow]) -> std::io::Result<()> {
    writeln!(w, "P,eta,lower,upper")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.p, r.eta, r.lower, r.upper)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::DivergenceKind;

    #[test]
    fn grid_points() {
        let g = PGrid::new(0.0, 5.0, 6).unwrap();
        assert_eq!(g.points(), vec![0.0, 1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(PGrid::new(2.0, 1.0, 5).is_err());
        assert!(PGrid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn csv_first_row() {
        let ctx = PlaneContext::new(1, 1.0, 1.0, DivergenceKind::RenyiHalf).unwrap();
        let rows = curve_rows(&ctx, &PGrid::new(0.0, 5.0, 11).unwrap().points()).unwrap();
        let mut buf = Vec::new();
        write_curve_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("P,eta,lower,upper"));
        assert_eq!(lines.next(), Some("0,2,2,2"));
    }
}
