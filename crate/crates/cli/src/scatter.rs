//! Predicted-vs-ground-truth scatter output: a CSV table or a self-contained
//! SVG with equal-scale axes, the identity diagonal and one marker per pair.

use std::fmt::Write as _;

use posture_symmetry::Measure;
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub gt: f64,
    pub pred: f64,
    pub image_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterSeries {
    pub measure: Measure,
    /// Legend label; distinguishes overlaid prediction sets.
    pub label: String,
    pub points: Vec<ScatterPoint>,
}

pub fn to_csv(series: &[ScatterSeries]) -> String {
    let mut out = String::from("series,image_id,gt,pred\n");
    for s in series {
        for p in &s.points {
            let _ = writeln!(out, "{},{},{},{}", s.label, p.image_id, p.gt, p.pred);
        }
    }
    out
}

/// Shared axis range: data extent padded by 5% of the span on each side.
/// A zero span is padded by 5% of the magnitude, or 0.5 at zero.
pub fn axis_limits(values: impl IntoIterator<Item = f64>) -> Option<(f64, f64)> {
    let (lo, hi) = values.into_iter().fold(None, |acc: Option<(f64, f64)>, v| match acc {
        None => Some((v, v)),
        Some((lo, hi)) => Some((lo.min(v), hi.max(v))),
    })?;
    let span = hi - lo;
    let pad = if span > 0.0 {
        0.05 * span
    } else if lo != 0.0 {
        0.05 * lo.abs()
    } else {
        0.5
    };
    Some((lo - pad, hi + pad))
}

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
const PLOT: f64 = 400.0;
const LEFT: f64 = 70.0;
const TOP: f64 = 40.0;
const WIDTH: f64 = LEFT + PLOT + 20.0;
const HEIGHT: f64 = TOP + PLOT + 55.0;
const TICKS: usize = 5;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn tick_label(v: f64, span: f64) -> String {
    let decimals = if span >= 50.0 {
        0
    } else if span >= 5.0 {
        1
    } else if span >= 0.5 {
        2
    } else {
        3
    };
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_owned()
    } else {
        s
    }
}

/// Renders all series on one square plot. Output is deterministic.
pub fn to_svg(series: &[ScatterSeries]) -> String {
    let measure = series.first().map_or("", |s| s.measure.name());
    let (lo, hi) =
        axis_limits(series.iter().flat_map(|s| s.points.iter().flat_map(|p| [p.gt, p.pred]))).unwrap_or((0.0, 1.0));
    let sx = |v: f64| LEFT + (v - lo) / (hi - lo) * PLOT;
    let sy = |v: f64| TOP + PLOT - (v - lo) / (hi - lo) * PLOT;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="22" text-anchor="middle" font-size="14">{}: predicted vs ground truth</text>"#,
        LEFT + PLOT / 2.0,
        escape(measure)
    );
    let _ = writeln!(svg, r#"<rect x="{LEFT}" y="{TOP}" width="{PLOT}" height="{PLOT}" fill="none" stroke="black"/>"#);

    for k in 0..=TICKS {
        let v = lo + (hi - lo) * k as f64 / TICKS as f64;
        let label = tick_label(v, hi - lo);
        let (x, y) = (sx(v), sy(v));
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/><text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"##,
            TOP + PLOT,
            TOP + PLOT + 5.0,
            TOP + PLOT + 19.0
        );
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/><text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"##,
            LEFT - 5.0,
            LEFT - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">ground truth</text>"#,
        LEFT + PLOT / 2.0,
        TOP + PLOT + 42.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="18" y="{:.1}" text-anchor="middle" transform="rotate(-90 18 {:.1})">predicted</text>"#,
        TOP + PLOT / 2.0,
        TOP + PLOT / 2.0
    );
    let _ = writeln!(
        svg,
        r##"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#888888" stroke-dasharray="4 3"/>"##,
        sx(lo),
        sy(lo),
        sx(hi),
        sy(hi)
    );

    for (k, s) in series.iter().enumerate() {
        let colour = PALETTE[k % PALETTE.len()];
        let _ = writeln!(svg, r#"<g class="series" fill="{colour}" fill-opacity="0.75">"#);
        for p in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3.5"><title>{}: gt {} pred {}</title></circle>"#,
                sx(p.gt),
                sy(p.pred),
                escape(&p.image_id),
                p.gt,
                p.pred
            );
        }
        svg.push_str("</g>\n");
        if series.len() > 1 {
            let ly = TOP + 14.0 + 16.0 * k as f64;
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.1}" cy="{ly:.1}" r="4" fill="{colour}"/><text x="{:.1}" y="{:.1}">{}</text>"#,
                LEFT + 12.0,
                LEFT + 22.0,
                ly + 4.0,
                escape(&s.label)
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}
