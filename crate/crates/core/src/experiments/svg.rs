//! Deterministic SVG plots of the CSV outputs.
//!
//! Every coordinate is printed with a fixed number of decimals so identical
//! inputs give byte-identical files.

use std::fmt::Write as _;

use crate::error::{Error, Result};

pub const WIDTH: f64 = 960.0;
pub const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;
const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Style {
    Line,
    Markers,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
    pub style: Style,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotSpec {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
}

/// Parsed numeric CSV: header names and rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| Error::Input("empty CSV".into()))?;
        let columns: Vec<String> = header.split(',').map(str::to_owned).collect();
        let rows = lines
            .filter(|l| !l.is_empty())
            .map(|l| {
                l.split(',')
                    .map(|v| {
                        v.parse::<f64>()
                            .map_err(|_| Error::Input(format!("non-numeric CSV field {v:?}")))
                    })
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.is_empty() {
            return Err(Error::Input("CSV has no data rows".into()));
        }
        Ok(Self { columns, rows })
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>> {
        let i = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| Error::Input(format!("CSV has no column {name:?}")))?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }
}

fn nice_ticks(lo: f64, hi: f64) -> Vec<f64> {
    let span = hi - lo;
    let raw = span / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|s| *s >= raw)
        .unwrap_or(10.0 * mag);
    let start = (lo / step).ceil() as i64;
    let end = (hi / step).floor() as i64;
    (start..=end).map(|i| i as f64 * step).collect()
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 1e-2 && v.abs() < 1e4 {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_owned()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(spec: &PlotSpec, series: &[Series]) -> Result<String> {
    let all: Vec<(f64, f64)> = series
        .iter()
        .flat_map(|s| s.points.iter().copied())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .collect();
    if all.is_empty() {
        return Err(Error::Input("nothing to plot".into()));
    }
    let (mut x0, mut x1, mut y0, mut y1) = all.iter().fold(
        (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY),
        |(a, b, c, d), &(x, y)| (a.min(x), b.max(x), c.min(y), d.max(y)),
    );
    if x1 == x0 {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if y1 == y0 {
        let pad = if y0 == 0.0 { 0.5 } else { 0.05 * y0.abs() };
        y0 -= pad;
        y1 += pad;
    }
    let pad = 0.04 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    let pw = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let ph = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x0) / (x1 - x0) * pw;
    let sy = |y: f64| MARGIN_TOP + (y1 - y) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{HEIGHT:.0}" viewBox="0 0 {WIDTH:.0} {HEIGHT:.0}" font-family="sans-serif" font-size="13">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="28" text-anchor="middle" font-size="16">{}</text>"#,
        WIDTH / 2.0,
        escape(&spec.title)
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_LEFT:.2}" y="{MARGIN_TOP:.2}" width="{pw:.2}" height="{ph:.2}" fill="none" stroke="black"/>"#
    );
    for t in nice_ticks(x0, x1) {
        let x = sx(t);
        let yb = MARGIN_TOP + ph;
        let _ = writeln!(s, r#"<line x1="{x:.2}" y1="{yb:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, yb + 5.0);
        let _ = writeln!(
            s,
            r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            yb + 20.0,
            tick_label(t)
        );
    }
    for t in nice_ticks(y0, y1) {
        let y = sy(t);
        let _ = writeln!(
            s,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{MARGIN_LEFT:.2}" y2="{y:.2}" stroke="black"/>"#,
            MARGIN_LEFT - 5.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0,
            tick_label(t)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + pw / 2.0,
        HEIGHT - 20.0,
        escape(&spec.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="20" y="{:.2}" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"#,
        MARGIN_TOP + ph / 2.0,
        MARGIN_TOP + ph / 2.0,
        escape(&spec.y_label)
    );
    for (i, ser) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let pts: Vec<(f64, f64)> = ser
            .points
            .iter()
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|&(x, y)| (sx(x), sy(y)))
            .collect();
        match ser.style {
            Style::Line => {
                let mut d = String::new();
                for (j, (x, y)) in pts.iter().enumerate() {
                    let _ = write!(d, "{}{x:.2},{y:.2}", if j == 0 { "M" } else { " L" });
                }
                let _ = writeln!(s, r#"<path d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#);
            }
            Style::Markers => {
                for (x, y) in pts {
                    let _ = writeln!(s, r#"<circle cx="{x:.2}" cy="{y:.2}" r="3" fill="{color}"/>"#);
                }
            }
        }
        let ly = MARGIN_TOP + 18.0 + 18.0 * i as f64;
        let lx = WIDTH - MARGIN_RIGHT - 200.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.2}" y="{:.2}" width="14" height="4" fill="{color}"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            ly - 6.0,
            lx + 20.0,
            ly,
            escape(&ser.label)
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// `var_q` against `t`.
pub fn trajectory_svg(csv: &str, title: &str) -> Result<String> {
    let t = Table::parse(csv)?;
    let pts = t.column("t")?.into_iter().zip(t.column("var_q")?).collect();
    render(
        &PlotSpec {
            title: title.into(),
            x_label: "t [a.u.]".into(),
            y_label: "var_q [a.u.²]".into(),
        },
        &[Series {
            label: "var_q".into(),
            points: pts,
            style: Style::Line,
        }],
    )
}

/// `t_max` against `delta_tau` with the fitted line overlaid.
pub fn transition_scan_svg(csv: &str, slope: f64, intercept: f64, title: &str) -> Result<String> {
    let t = Table::parse(csv)?;
    let x = t.column("delta_tau")?;
    let y = t.column("t_max")?;
    let (lo, hi) = x
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    render(
        &PlotSpec {
            title: title.into(),
            x_label: "delta_tau [a.u.]".into(),
            y_label: "t_max [a.u.]".into(),
        },
        &[
            Series {
                label: "t_max".into(),
                points: x.into_iter().zip(y).collect(),
                style: Style::Markers,
            },
            Series {
                label: format!("fit slope {slope:.4}"),
                points: vec![(lo, slope * lo + intercept), (hi, slope * hi + intercept)],
                style: Style::Line,
            },
        ],
    )
}

/// Density against `q` at five evenly spaced time slices.
pub fn density_svg(csv: &str, title: &str) -> Result<String> {
    let t = Table::parse(csv)?;
    let ts = t.column("t")?;
    let qs = t.column("q")?;
    let ds = t.column("density")?;
    let mut slices: Vec<f64> = Vec::new();
    for &v in &ts {
        if slices.last() != Some(&v) {
            slices.push(v);
        }
    }
    let picks: Vec<f64> = if slices.len() <= 5 {
        slices.clone()
    } else {
        (0..5).map(|i| slices[i * (slices.len() - 1) / 4]).collect()
    };
    let series = picks
        .iter()
        .map(|&tp| Series {
            label: format!("t = {}", tick_label(tp)),
            points: ts
                .iter()
                .zip(qs.iter().zip(&ds))
                .filter(|(t, _)| **t == tp)
                .map(|(_, (q, d))| (*q, *d))
                .collect(),
            style: Style::Line,
        })
        .collect::<Vec<_>>();
    render(
        &PlotSpec {
            title: title.into(),
            x_label: "q [a.u.]".into(),
            y_label: "density [1/a.u.]".into(),
        },
        &series,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trajectory_plot_is_deterministic() {
        let csv = "t,mean_q,var_q,norm\n0,0,0.3,1\n0.5,0,0.1,1\n1,0,0.3,1\n";
        let a = trajectory_svg(csv, "demo").unwrap();
        let b = trajectory_svg(csv, "demo").unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg") && a.contains(r#"width="960" height="600""#));
        assert!(a.contains("var_q"));
    }

    #[test]
    fn empty_inputs_rejected() {
        assert!(trajectory_svg("", "x").is_err());
        assert!(trajectory_svg("t,mean_q,var_q,norm\n", "x").is_err());
    }

    #[test]
    fn density_picks_five_slices() {
        let mut csv = String::from("t,q,density\n");
        for i in 0..9 {
            for j in 0..3 {
                csv += &format!("{},{},{}\n", i, j, i * j);
            }
        }
        let svg = density_svg(&csv, "d").unwrap();
        assert_eq!(svg.matches("<path").count(), 5);
    }

    #[test]
    fn scan_has_fit_overlay() {
        let csv = "n,n_prime,delta_tau,t_max,p_max,boundary_flag\n2,1,1,1,0.9,0\n3,2,2,2.1,0.9,0\n";
        let svg = transition_scan_svg(csv, 1.1, -0.1, "s").unwrap();
        assert_eq!(svg.matches("<circle").count(), 2);
        assert_eq!(svg.matches("<path").count(), 1);
    }

    #[test]
    fn ticks() {
        let t = nice_ticks(0.0, 1.0);
        assert_eq!(t.len(), 6);
        for (i, v) in t.iter().enumerate() {
            assert!((v - 0.2 * i as f64).abs() < 1e-12);
        }
        assert_eq!(tick_label(0.25), "0.25");
        assert_eq!(tick_label(2.5e-5), "2.50e-5");
    }
}
