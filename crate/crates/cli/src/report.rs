//! Per-dataset evaluation reports and their renderings.

use std::fmt::Write as _;

use posture_symmetry::dataset_io::{LandmarkPair, LoadError};
use posture_symmetry::{compute, evaluate_series, Measure, MeasureSeries, Measures, MetricBundle, RhoBands};
use serde::Serialize;

use crate::scatter::{ScatterPoint, ScatterSeries};

/// Output adjustments applied to measure values before display or scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct MeasureOptions {
    /// Report `ga - 90`, so an upright pose reads 0.
    pub relative: bool,
    /// Report absolute values of the four angles.
    pub abs: bool,
}

impl MeasureOptions {
    pub fn apply(&self, m: Measure, value: f64) -> f64 {
        let v = if self.relative && m == Measure::Ga { value - 90.0 } else { value };
        if self.abs && m.is_angle() {
            v.abs()
        } else {
            v
        }
    }

    pub fn apply_all(&self, mut values: Measures) -> Measures {
        for m in Measure::ALL {
            values.set(m, self.apply(m, values.get(m)));
        }
        values
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedPair {
    pub image_id: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkippedEntry {
    pub image_id: String,
    pub role: String,
    pub reason: String,
}

impl From<&LoadError> for SkippedEntry {
    fn from(e: &LoadError) -> Self {
        Self { image_id: e.image_id.clone(), role: e.role.name().into(), reason: e.kind.to_string() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeasureReport {
    pub measure: Measure,
    /// Pairs that entered the series.
    pub n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<MetricBundle<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<ExcludedPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub manifest: String,
    pub n_pairs: usize,
    pub skipped: Vec<SkippedEntry>,
    pub band_edges: RhoBands,
    pub options: MeasureOptions,
    pub measures: Vec<MeasureReport>,
}

/// Paired per-image values of one measure; pairs where either side is
/// degenerate are listed separately.
pub struct CollectedSeries {
    pub points: Vec<ScatterPoint>,
    pub excluded: Vec<ExcludedPair>,
}

pub fn collect_series(pairs: &[LandmarkPair<f64>], m: Measure, opts: MeasureOptions) -> CollectedSeries {
    let mut out = CollectedSeries { points: Vec::new(), excluded: Vec::new() };
    for pair in pairs {
        match (compute(m, &pair.gt), compute(m, &pair.pred)) {
            (Ok(g), Ok(p)) => out.points.push(ScatterPoint {
                gt: opts.apply(m, g),
                pred: opts.apply(m, p),
                image_id: pair.gt.image_id.clone(),
            }),
            (Err(e), _) => {
                out.excluded.push(ExcludedPair { image_id: pair.gt.image_id.clone(), reason: format!("gt: {e}") })
            }
            (_, Err(e)) => {
                out.excluded.push(ExcludedPair { image_id: pair.gt.image_id.clone(), reason: format!("pred: {e}") })
            }
        }
    }
    out
}

pub fn scatter_series(pairs: &[LandmarkPair<f64>], m: Measure, opts: MeasureOptions, label: &str) -> ScatterSeries {
    ScatterSeries { measure: m, label: label.into(), points: collect_series(pairs, m, opts).points }
}

pub fn evaluate_measure(
    pairs: &[LandmarkPair<f64>],
    m: Measure,
    opts: MeasureOptions,
    bands: &RhoBands,
) -> MeasureReport {
    let CollectedSeries { points, excluded } = collect_series(pairs, m, opts);
    let n = points.len();
    let result = MeasureSeries::new(m, points.iter().map(|p| p.gt).collect(), points.iter().map(|p| p.pred).collect())
        .and_then(|s| evaluate_series(&s, bands));
    match result {
        Ok(bundle) => MeasureReport { measure: m, n, metrics: Some(bundle), error: None, excluded },
        Err(e) => MeasureReport { measure: m, n, metrics: None, error: Some(e.to_string()), excluded },
    }
}

pub fn build_report(
    manifest: &str,
    pairs: &[LandmarkPair<f64>],
    skipped: &[LoadError],
    opts: MeasureOptions,
    bands: RhoBands,
) -> EvalReport {
    EvalReport {
        manifest: manifest.to_owned(),
        n_pairs: pairs.len(),
        skipped: skipped.iter().map(SkippedEntry::from).collect(),
        band_edges: bands,
        options: opts,
        measures: Measure::ALL.iter().map(|&m| evaluate_measure(pairs, m, opts, &bands)).collect(),
    }
}

const UNDEFINED: &str = "undefined";

pub fn render_text(report: &EvalReport, precision: usize) -> String {
    let mut rows = vec![["measure", "n", "rho", "band", "BCA", "MAE", "RMSE"].map(String::from).to_vec()];
    for r in &report.measures {
        let mut row = vec![r.measure.name().to_owned(), r.n.to_string()];
        match (&r.metrics, &r.error) {
            (Some(b), _) => {
                row.push(b.spearman_rho.map_or(UNDEFINED.into(), |v| format!("{v:.precision$}")));
                row.push(b.rho_band.map_or("-".into(), |band| band.label().into()));
                for v in [b.bca, b.mae, b.rmse] {
                    row.push(format!("{v:.precision$}"));
                }
            }
            (None, e) => row.push(format!("error: {}", e.as_deref().unwrap_or("unknown"))),
        }
        rows.push(row);
    }
    let mut widths = [0usize; 7];
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    for row in &rows {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| if i + 1 == row.len() { c.clone() } else { format!("{c:<w$}", w = widths[i]) })
            .collect();
        let _ = writeln!(out, "{}", cells.join("  ").trim_end());
    }
    let _ = writeln!(out, "pairs: {}  skipped: {}", report.n_pairs, report.skipped.len());
    for s in &report.skipped {
        let _ = writeln!(out, "skipped {} ({}): {}", s.image_id, s.role, s.reason);
    }
    for r in &report.measures {
        for e in &r.excluded {
            let _ = writeln!(out, "excluded from {}: {} ({})", r.measure, e.image_id, e.reason);
        }
    }
    out
}

pub fn render_csv(report: &EvalReport) -> String {
    let mut out = String::from("measure,n,spearman_rho,rho_band,bca,mae,rmse,error\n");
    for r in &report.measures {
        let _ = match &r.metrics {
            Some(b) => writeln!(
                out,
                "{},{},{},{},{},{},{},",
                r.measure,
                r.n,
                b.spearman_rho.map_or(UNDEFINED.into(), |v| v.to_string()),
                b.rho_band.map_or("", |band| band.label()),
                b.bca,
                b.mae,
                b.rmse
            ),
            None => {
                writeln!(out, "{},{},,,,,,\"{}\"", r.measure, r.n, r.error.as_deref().unwrap_or("").replace('"', "'"))
            }
        };
    }
    out
}

pub fn render_json(report: &EvalReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report is serializable");
    s.push('\n');
    s
}
