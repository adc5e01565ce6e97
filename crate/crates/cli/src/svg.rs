//! Static SVG rendering of the uncertainty–perception plane.

use std::fmt::Write;

use upplane::bounds::{eta_for, DivergenceKind, Region};

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const SAMPLES: usize = 200;

pub struct PlanePoint {
    pub label: String,
    pub perception: f64,
    pub uncertainty: f64,
    pub region: Option<Region>,
}

pub struct Plane {
    pub title: String,
    pub d: usize,
    pub n_xy: f64,
    pub n_xgy: f64,
    pub kind: DivergenceKind,
    pub p_max: f64,
    /// Extra η·N(X|Y) curves for other dimensions, drawn dashed.
    pub extra_dims: Vec<usize>,
    pub points: Vec<PlanePoint>,
    pub timestamp: Option<String>,
}

fn esc(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn region_color(r: Option<Region>) -> &'static str {
    match r {
        Some(Region::Impossible) => "#c0392b",
        Some(Region::Optimal) => "#1e8449",
        Some(Region::Suboptimal) => "#2e4053",
        None => "#7d3c98",
    }
}

impl Plane {
    fn p_max(&self) -> f64 {
        let max_pt = self.points.iter().map(|p| p.perception).fold(0.0, f64::max);
        let m = self.p_max.max(max_pt * 1.05);
        if self.kind == DivergenceKind::Hellinger {
            m.min(1.0)
        } else if m > 0.0 {
            m
        } else {
            1.0
        }
    }

    fn curve(&self, d: usize, scale: f64, p_max: f64) -> Vec<(f64, f64)> {
        (0..=SAMPLES)
            .filter_map(|i| {
                let p = p_max * i as f64 / SAMPLES as f64;
                eta_for(self.kind, p, d).ok().map(|e| (p, e * scale))
            })
            .collect()
    }

    pub fn render(&self) -> String {
        let p_max = self.p_max();
        let max_pt = self.points.iter().map(|p| p.uncertainty).fold(0.0, f64::max);
        let u_max = (2.2 * self.n_xgy).max(1.1 * max_pt).max(f64::MIN_POSITIVE);
        let pw = WIDTH - LEFT - RIGHT;
        let ph = HEIGHT - TOP - BOTTOM;
        let x = |p: f64| LEFT + pw * (p / p_max).clamp(0.0, 1.0);
        let y = |u: f64| TOP + ph * (1.0 - (u / u_max).clamp(0.0, 1.0));
        let path = |pts: &[(f64, f64)]| {
            pts.iter()
                .map(|&(p, u)| format!("{:.2},{:.2}", x(p), y(u)))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let lower = self.curve(self.d, self.n_xy, p_max);
        let upper = self.curve(self.d, self.n_xgy, p_max);

        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
        );
        if let Some(t) = &self.timestamp {
            let _ = writeln!(s, "<!-- generated {} -->", esc(t));
        }
        let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            LEFT + pw / 2.0,
            esc(&self.title)
        );

        // Regions: below the lower curve, between the curves, above the upper curve.
        let bottom = format!("{:.2},{:.2} {:.2},{:.2}", x(p_max), y(0.0), x(0.0), y(0.0));
        let top = format!("{:.2},{:.2} {:.2},{:.2}", x(p_max), y(u_max), x(0.0), y(u_max));
        let mut upper_rev = upper.clone();
        upper_rev.reverse();
        let _ = writeln!(
            s,
            r##"<polygon points="{} {bottom}" fill="#f5b7b1" fill-opacity="0.6"/>"##,
            path(&lower)
        );
        let _ = writeln!(
            s,
            r##"<polygon points="{} {}" fill="#abebc6" fill-opacity="0.6"/>"##,
            path(&lower),
            path(&upper_rev)
        );
        let _ = writeln!(
            s,
            r##"<polygon points="{} {top}" fill="#d6eaf8" fill-opacity="0.6"/>"##,
            path(&upper)
        );

        // Axes and ticks.
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black"/>"#,
            y(0.0),
            LEFT + pw,
            y(0.0)
        );
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{:.2}" stroke="black"/>"#,
            y(0.0)
        );
        for i in 0..=5 {
            let p = p_max * i as f64 / 5.0;
            let u = u_max * i as f64 / 5.0;
            let _ = writeln!(
                s,
                r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4}</text>"#,
                x(p),
                y(0.0),
                y(0.0) + 5.0,
                y(0.0) + 19.0,
                tick_label(p)
            );
            let _ = writeln!(
                s,
                r#"<line x1="{0:.2}" y1="{1:.2}" x2="{LEFT}" y2="{1:.2}" stroke="black"/><text x="{2:.2}" y="{3:.2}" text-anchor="end">{4}</text>"#,
                LEFT - 5.0,
                y(u),
                LEFT - 8.0,
                y(u) + 4.0,
                tick_label(u)
            );
        }
        let axis = match self.kind {
            DivergenceKind::RenyiHalf => "Perception P (Rényi-½ divergence)",
            DivergenceKind::Hellinger => "Perception P (Hellinger distance)",
        };
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{axis}</text>"#,
            LEFT + pw / 2.0,
            HEIGHT - 15.0
        );
        let _ = writeln!(
            s,
            r#"<text x="20" y="{0:.2}" text-anchor="middle" transform="rotate(-90 20 {0:.2})">Uncertainty U (entropy power)</text>"#,
            TOP + ph / 2.0
        );

        // Bound curves.
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#922b21" stroke-width="2"/>"##,
            path(&lower)
        );
        let _ = writeln!(
            s,
            r##"<polyline points="{}" fill="none" stroke="#1a5276" stroke-width="2"/>"##,
            path(&upper)
        );
        for &d in &self.extra_dims {
            let c = self.curve(d, self.n_xy, p_max);
            let _ = writeln!(
                s,
                r##"<polyline points="{}" fill="none" stroke="#555" stroke-dasharray="5,4"/>"##,
                path(&c)
            );
            if let Some(&(p, u)) = c.last() {
                let _ = writeln!(
                    s,
                    r#"<text x="{:.2}" y="{:.2}">d={d}</text>"#,
                    x(p) + 4.0,
                    y(u) + 4.0
                );
            }
        }

        // Points.
        for pt in &self.points {
            let (px, py) = (x(pt.perception), y(pt.uncertainty));
            let _ = writeln!(
                s,
                r#"<circle cx="{px:.2}" cy="{py:.2}" r="5" fill="{}" stroke="black"/><text x="{:.2}" y="{:.2}">{}</text>"#,
                region_color(pt.region),
                px + 8.0,
                py - 6.0,
                esc(&pt.label)
            );
        }

        // Legend.
        let lx = WIDTH - RIGHT + 15.0;
        let items = [
            ("#f5b7b1", "Impossible"),
            ("#abebc6", "Optimal"),
            ("#d6eaf8", "Suboptimal"),
        ];
        for (i, (color, name)) in items.iter().enumerate() {
            let ly = TOP + 20.0 * i as f64;
            let _ = writeln!(
                s,
                r##"<rect x="{lx:.2}" y="{ly:.2}" width="14" height="14" fill="{color}" stroke="#999"/><text x="{:.2}" y="{:.2}">{name}</text>"##,
                lx + 20.0,
                ly + 11.0
            );
        }
        let ly = TOP + 75.0;
        let _ = writeln!(
            s,
            r##"<text x="{lx:.2}" y="{ly:.2}" fill="#922b21">η·N(X|Y)</text><text x="{lx:.2}" y="{:.2}" fill="#1a5276">η·N(X_G|Y)</text><text x="{lx:.2}" y="{:.2}">d = {}</text>"##,
            ly + 18.0,
            ly + 36.0,
            self.d
        );
        s.push_str("</svg>\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane(ts: Option<String>) -> Plane {
        Plane {
            title: "t <1>".into(),
            d: 2,
            n_xy: 1.0,
            n_xgy: 1.2,
            kind: DivergenceKind::RenyiHalf,
            p_max: 5.0,
            extra_dims: vec![10],
            points: vec![PlanePoint {
                label: "a&b".into(),
                perception: 1.0,
                uncertainty: 1.5,
                region: Some(Region::Optimal),
            }],
            timestamp: ts,
        }
    }

    #[test]
    fn renders_escaped_and_deterministic() {
        let a = plane(None).render();
        assert_eq!(a, plane(None).render());
        assert!(a.starts_with("<svg") && a.ends_with("</svg>\n"));
        assert!(a.contains("a&amp;b") && a.contains("t &lt;1&gt;"));
        assert!(!a.contains("generated"));
        assert!(plane(Some("x".into())).render().contains("<!-- generated x -->"));
    }
}
