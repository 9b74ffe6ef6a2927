//! Self-contained SVG scaling plots.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::record::RunRecord;
use super::BenchError;
use crate::metrics::{fit_loglog, median, ComplexityFit};

const PANEL_W: f64 = 420.0;
const PANEL_H: f64 = 320.0;
const MARGIN_L: f64 = 70.0;
const MARGIN_R: f64 = 20.0;
const MARGIN_T: f64 = 40.0;
const MARGIN_B: f64 = 50.0;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFits {
    pub wall: ComplexityFit,
    pub memory: ComplexityFit,
}

type Series = Vec<(f64, f64)>;

/// Median of `pick` per dimension, keeping only positive values.
fn series(records: &[RunRecord], pick: impl Fn(&RunRecord) -> Option<f64>) -> Series {
    let mut by_dim: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in records {
        if let Some(v) = pick(r).filter(|v| *v > 0.0 && v.is_finite()) {
            by_dim.entry(r.dim).or_default().push(v);
        }
    }
    by_dim
        .into_iter()
        .filter_map(|(d, v)| median(&v).map(|m| (d as f64, m)))
        .collect()
}

fn fit_series(name: &str, points: &Series) -> Result<ComplexityFit, BenchError> {
    if points.len() < 3 {
        return Err(BenchError::Plot(format!(
            "series {name} has {} usable dimensions, need 3",
            points.len()
        )));
    }
    fit_loglog(points).map_err(|e| BenchError::Plot(format!("series {name}: {e}")))
}

fn decade_label(k: i32) -> String {
    format!("1e{k}")
}

fn panel(
    svg: &mut String,
    x0: f64,
    title: &str,
    y_label: &str,
    points: &Series,
    fit: &ComplexityFit,
) {
    let lx: Vec<f64> = points.iter().map(|p| p.0.log10()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.log10()).collect();
    let fold = |v: &[f64], f: fn(f64, f64) -> f64, init: f64| v.iter().copied().fold(init, f);
    let (xa, xb) = (fold(&lx, f64::min, f64::INFINITY).floor(), fold(&lx, f64::max, f64::NEG_INFINITY).ceil());
    let (ya, yb) = (fold(&ly, f64::min, f64::INFINITY).floor(), fold(&ly, f64::max, f64::NEG_INFINITY).ceil());
    let xb = if xb > xa { xb } else { xa + 1.0 };
    let yb = if yb > ya { yb } else { ya + 1.0 };
    let plot_w = PANEL_W - MARGIN_L - MARGIN_R;
    let plot_h = PANEL_H - MARGIN_T - MARGIN_B;
    let sx = |v: f64| x0 + MARGIN_L + (v - xa) / (xb - xa) * plot_w;
    let sy = |v: f64| MARGIN_T + plot_h - (v - ya) / (yb - ya) * plot_h;

    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" font-size="14" text-anchor="middle">{title}</text>"#,
        x0 + MARGIN_L + plot_w / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<rect x="{:.1}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#333"/>"##,
        x0 + MARGIN_L
    );
    for k in xa as i32..=xb as i32 {
        let x = sx(k as f64);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.1}" y1="{MARGIN_T}" x2="{x:.1}" y2="{:.1}" stroke="#ddd"/><text x="{x:.1}" y="{:.1}" font-size="11" text-anchor="middle">{}</text>"##,
            MARGIN_T + plot_h,
            MARGIN_T + plot_h + 16.0,
            decade_label(k)
        );
    }
    for k in ya as i32..=yb as i32 {
        let y = sy(k as f64);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.1}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" font-size="11" text-anchor="end">{}</text>"##,
            x0 + MARGIN_L,
            x0 + MARGIN_L + plot_w,
            x0 + MARGIN_L - 6.0,
            y + 4.0,
            decade_label(k)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle">dimension</text>"#,
        x0 + MARGIN_L + plot_w / 2.0,
        PANEL_H - 12.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12" text-anchor="middle" transform="rotate(-90 {:.1} {:.1})">{y_label}</text>"#,
        x0 + 16.0,
        MARGIN_T + plot_h / 2.0,
        x0 + 16.0,
        MARGIN_T + plot_h / 2.0
    );

    let (fa, fb) = (lx[0], lx[lx.len() - 1]);
    let line = |v: f64| fit.intercept / std::f64::consts::LN_10 + fit.slope * v;
    let _ = writeln!(
        svg,
        r##"<line x1="{:.1}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="#c33" stroke-dasharray="5,3"/>"##,
        sx(fa),
        sy(line(fa)),
        sx(fb),
        sy(line(fb))
    );
    for (x, y) in lx.iter().zip(&ly) {
        let _ = writeln!(
            svg,
            r##"<circle cx="{:.1}" cy="{:.1}" r="4" fill="#1f5fa8"/>"##,
            sx(*x),
            sy(*y)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-size="12">slope {:.2} (r² {:.3})</text>"#,
        x0 + MARGIN_L + 8.0,
        MARGIN_T + 16.0,
        fit.slope,
        fit.r_squared
    );
}

/// Renders log-log plots of wall time and peak memory against dimension.
///
/// All records must share an algorithm and precision; each series needs
/// positive values at three or more dimensions.
pub fn render_scaling_plot(records: &[RunRecord]) -> Result<(String, ScalingFits), BenchError> {
    let first = records
        .first()
        .ok_or_else(|| BenchError::Plot("no records".into()))?;
    if records
        .iter()
        .any(|r| r.algo != first.algo || r.precision != first.precision)
    {
        return Err(BenchError::Plot(
            "records mix algorithms or precisions".into(),
        ));
    }
    let wall = series(records, |r| Some(r.wall_s));
    let memory = series(records, |r| r.peak_kb);
    let fits = ScalingFits {
        wall: fit_series("wall_s", &wall)?,
        memory: fit_series("peak_kb", &memory)?,
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{PANEL_H}" viewBox="0 0 {} {PANEL_H}" font-family="sans-serif">"#,
        2.0 * PANEL_W,
        2.0 * PANEL_W
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let tag = format!("{} ({})", first.algo, first.precision);
    panel(&mut svg, 0.0, &format!("{tag}: wall time"), "wall_s", &wall, &fits.wall);
    panel(
        &mut svg,
        PANEL_W,
        &format!("{tag}: peak memory"),
        "peak_kb",
        &memory,
        &fits.memory,
    );
    svg.push_str("</svg>\n");
    Ok((svg, fits))
}

pub fn emit_scaling_plot(records: &[RunRecord], path: &Path) -> Result<ScalingFits, BenchError> {
    let (svg, fits) = render_scaling_plot(records)?;
    std::fs::write(path, svg).map_err(|e| BenchError::io(path, e))?;
    Ok(fits)
}
