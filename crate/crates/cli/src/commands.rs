use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use posture_symmetry::dataset_io::{image_id_from_path, load_dataset, parse_manifest, parse_pts, LoadedDataset};
use posture_symmetry::{compute_all, validate, Landmarks, Measure, Measures, ValidationReport};
use serde::Serialize;

use crate::config::Config;
use crate::report::{build_report, render_csv, render_json, render_text, scatter_series, MeasureOptions};
use crate::scatter;
use crate::synth::{self, SynthParams};
use crate::{CliError, EXIT_DATA, EXIT_OK};

#[derive(Debug, Parser)]
#[command(name = "symmetry", version, about = "Face and upper-body symmetry measures from 70-point landmarks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check landmark files for structural errors and pose warnings.
    Validate(ValidateArgs),
    /// Compute the six symmetry measures for each landmark file.
    Measure(MeasureArgs),
    /// Score predicted landmarks against ground truth over a manifest.
    Evaluate(EvaluateArgs),
    /// Plot predicted vs ground-truth values of one measure.
    Scatter(ScatterArgs),
    /// Generate a synthetic ground-truth / prediction dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PlotFormat {
    Svg,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MeasureName {
    Fa,
    Osa,
    Rfs,
    Ga,
    Hhd,
    Td,
}

impl From<MeasureName> for Measure {
    fn from(m: MeasureName) -> Self {
        match m {
            MeasureName::Fa => Measure::Fa,
            MeasureName::Osa => Measure::Osa,
            MeasureName::Rfs => Measure::Rfs,
            MeasureName::Ga => Measure::Ga,
            MeasureName::Hhd => Measure::Hhd,
            MeasureName::Td => Measure::Td,
        }
    }
}

#[derive(Debug, Args)]
pub struct AngleFlags {
    /// Report the gaze angle relative to upright (ga - 90).
    #[arg(long)]
    pub relative: bool,
    /// Report absolute values of the angle measures.
    #[arg(long)]
    pub abs: bool,
    /// TOML configuration file.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

impl AngleFlags {
    fn resolve(&self) -> Result<(Config, MeasureOptions), CliError> {
        let config = Config::load(self.config.as_deref())?;
        let opts = MeasureOptions { relative: self.relative || config.ga_relative, abs: self.abs || config.abs_angles };
        Ok((config, opts))
    }
}

#[derive(Debug, Args)]
pub struct DatasetFlags {
    /// Directory that manifest paths are relative to (default: the manifest's directory).
    #[arg(long, value_name = "PATH")]
    pub base_dir: Option<PathBuf>,
    /// Skip entries that fail to load instead of aborting.
    #[arg(long)]
    pub skip_bad: bool,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Only print files with errors or warnings.
    #[arg(short, long)]
    pub quiet: bool,
}

#[derive(Debug, Args)]
pub struct MeasureArgs {
    #[arg(required = true)]
    pub paths: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub angles: AngleFlags,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    pub manifest: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
    /// Write the full-precision JSON report here.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub dataset: DatasetFlags,
    #[command(flatten)]
    pub angles: AngleFlags,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    pub manifest: PathBuf,
    #[arg(long, value_enum)]
    pub measure: MeasureName,
    #[arg(long, value_enum, default_value = "svg")]
    pub format: PlotFormat,
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Second manifest whose predictions are overlaid on the same axes.
    #[arg(long, value_name = "MANIFEST")]
    pub overlay: Option<PathBuf>,
    #[arg(long, default_value = "pred")]
    pub label: String,
    #[arg(long, default_value = "overlay")]
    pub overlay_label: String,
    #[command(flatten)]
    pub dataset: DatasetFlags,
    #[command(flatten)]
    pub angles: AngleFlags,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Output directory (created if missing).
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 36)]
    pub n: usize,
    /// Landmark noise, percent of the outer-canthal distance.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sigma: f64,
    /// Fraction of images with grossly displaced face landmarks.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub outliers: f64,
    /// Displacement of each face landmark in an outlier image, pixels.
    #[arg(long, default_value_t = 50.0)]
    pub outlier_px: f64,
    #[arg(long, default_value_t = 15.0)]
    pub max_tilt: f64,
    #[arg(long, default_value_t = 0.25)]
    pub max_offset: f64,
    #[arg(long, default_value_t = 12.0)]
    pub mouth_asymmetry: f64,
    #[arg(long, default_value_t = 8.0)]
    pub eye_asymmetry: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

pub fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    match cli.command {
        Command::Validate(a) => cmd_validate(&a, out, err),
        Command::Measure(a) => cmd_measure(&a, out, err),
        Command::Evaluate(a) => cmd_evaluate(&a, out, err),
        Command::Scatter(a) => cmd_scatter(&a, out, err),
        Command::Synth(a) => cmd_synth(&a, out),
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Data(format!("write failed: {e}"))
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Data(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(io_err),
    }
}

fn read_landmarks(path: &Path) -> Result<Landmarks, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read: {e}"))?;
    parse_pts(&text, &image_id_from_path(path)).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct ValidateRecord {
    path: String,
    errors: Vec<String>,
    warnings: Vec<String>,
}

pub fn cmd_validate(args: &ValidateArgs, out: &mut dyn Write, _err: &mut dyn Write) -> Result<i32, CliError> {
    let mut records = Vec::new();
    for path in &args.paths {
        let (errors, warnings) = match read_landmarks(path) {
            Err(e) => (vec![e], vec![]),
            Ok(ls) => {
                let ValidationReport { errors, warnings } = validate(&ls);
                (
                    errors.iter().map(ToString::to_string).collect(),
                    warnings.iter().map(|w| w.code().to_owned()).collect(),
                )
            }
        };
        records.push(ValidateRecord { path: path.display().to_string(), errors, warnings });
    }
    let failed = records.iter().any(|r| !r.errors.is_empty());

    let mut text = String::new();
    match args.format {
        Format::Json => {
            text = serde_json::to_string_pretty(&records).expect("serializable");
            text.push('\n');
        }
        Format::Csv => {
            text.push_str("path,severity,message\n");
            for r in &records {
                for e in &r.errors {
                    text.push_str(&format!("{},error,\"{}\"\n", r.path, e.replace('"', "'")));
                }
                for w in &r.warnings {
                    text.push_str(&format!("{},warning,{w}\n", r.path));
                }
            }
        }
        Format::Text => {
            for r in &records {
                if r.errors.is_empty() && r.warnings.is_empty() {
                    if !args.quiet {
                        text.push_str(&format!("{}: ok\n", r.path));
                    }
                    continue;
                }
                for e in &r.errors {
                    text.push_str(&format!("{}: error: {e}\n", r.path));
                }
                for w in &r.warnings {
                    text.push_str(&format!("{}: warning: {w}\n", r.path));
                }
            }
        }
    }
    emit(out, None, &text)?;
    Ok(if failed { EXIT_DATA } else { EXIT_OK })
}

#[derive(Serialize)]
struct MeasureRow {
    image_id: String,
    #[serde(flatten)]
    values: Measures,
}

pub fn cmd_measure(args: &MeasureArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (config, opts) = args.angles.resolve()?;
    let mut rows = Vec::new();
    let mut failed = false;
    for path in &args.paths {
        let result = read_landmarks(path).and_then(|ls| {
            let report = validate(&ls);
            if !report.is_ok() {
                return Err(format!("invalid landmarks ({report})"));
            }
            compute_all(&ls).map(|m| (ls.image_id, m)).map_err(|e| e.to_string())
        });
        match result {
            Ok((image_id, values)) => rows.push(MeasureRow { image_id, values: opts.apply_all(values) }),
            Err(e) => {
                failed = true;
                writeln!(err, "{}: {e}", path.display()).map_err(io_err)?;
            }
        }
    }

    let names = Measure::ALL.map(|m| m.name());
    let text = match args.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rows).expect("serializable");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = format!("image_id,{}\n", names.join(","));
            for r in &rows {
                let vals: Vec<String> = Measure::ALL.iter().map(|&m| r.values.get(m).to_string()).collect();
                s.push_str(&format!("{},{}\n", r.image_id, vals.join(",")));
            }
            s
        }
        Format::Text => {
            let p = config.display_precision;
            let mut table =
                vec![std::iter::once("image_id".to_owned()).chain(names.map(String::from)).collect::<Vec<_>>()];
            for r in &rows {
                let mut row = vec![r.image_id.clone()];
                row.extend(Measure::ALL.iter().map(|&m| format!("{:.p$}", r.values.get(m))));
                table.push(row);
            }
            align(&table)
        }
    };
    emit(out, args.out.as_deref(), &text)?;
    Ok(if failed { EXIT_DATA } else { EXIT_OK })
}

// First column left-aligned, the rest right-aligned.
fn align(table: &[Vec<String>]) -> String {
    let cols = table.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols).map(|c| table.iter().map(|r| r[c].len()).max().unwrap_or(0)).collect();
    let mut s = String::new();
    for row in table {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(i, c)| if i == 0 { format!("{c:<w$}", w = widths[i]) } else { format!("{c:>w$}", w = widths[i]) })
            .collect();
        s.push_str(&cells.join("  "));
        s.push('\n');
    }
    s
}

fn load(manifest_path: &Path, flags: &DatasetFlags) -> Result<LoadedDataset<f64>, CliError> {
    let text = std::fs::read_to_string(manifest_path)
        .map_err(|e| CliError::Data(format!("cannot read manifest {}: {e}", manifest_path.display())))?;
    let manifest = parse_manifest(&text).map_err(|e| CliError::Data(format!("{}: {e}", manifest_path.display())))?;
    let base = match &flags.base_dir {
        Some(b) => b.clone(),
        None => manifest_path.parent().map(Path::to_path_buf).unwrap_or_default(),
    };
    load_dataset(&manifest, &base, flags.skip_bad).map_err(|e| CliError::Data(e.to_string()))
}

pub fn cmd_evaluate(args: &EvaluateArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (config, opts) = args.angles.resolve()?;
    let bands = config.bands()?;
    let data = load(&args.manifest, &args.dataset)?;
    for s in &data.skipped {
        writeln!(err, "skipped {s}").map_err(io_err)?;
    }
    if data.pairs.len() < 2 {
        return Err(CliError::Data(format!("need at least 2 loadable pairs to evaluate, found {}", data.pairs.len())));
    }
    let report = build_report(&args.manifest.display().to_string(), &data.pairs, &data.skipped, opts, bands);
    let rendered = match args.format {
        Format::Text => render_text(&report, config.display_precision),
        Format::Csv => render_csv(&report),
        Format::Json => render_json(&report),
    };
    emit(out, None, &rendered)?;
    if let Some(path) = &args.out {
        emit(out, Some(path), &render_json(&report))?;
    }
    Ok(EXIT_OK)
}

pub fn cmd_scatter(args: &ScatterArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let (_, opts) = args.angles.resolve()?;
    let measure = Measure::from(args.measure);
    let mut series = Vec::new();
    for (path, label) in
        std::iter::once((&args.manifest, &args.label)).chain(args.overlay.as_ref().map(|p| (p, &args.overlay_label)))
    {
        let data = load(path, &args.dataset)?;
        for s in &data.skipped {
            writeln!(err, "skipped {s}").map_err(io_err)?;
        }
        series.push(scatter_series(&data.pairs, measure, opts, label));
    }
    let text = match args.format {
        PlotFormat::Svg => scatter::to_svg(&series),
        PlotFormat::Csv => scatter::to_csv(&series),
    };
    emit(out, args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

pub fn cmd_synth(args: &SynthArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let params = SynthParams {
        n: args.n,
        sigma_pct: args.sigma,
        outlier_fraction: args.outliers,
        outlier_px: args.outlier_px,
        max_tilt_deg: args.max_tilt,
        max_offset: args.max_offset,
        mouth_asymmetry_px: args.mouth_asymmetry,
        eye_asymmetry_px: args.eye_asymmetry,
        seed: args.seed,
        ..SynthParams::default()
    };
    let pairs = synth::generate(&params)?;
    let manifest = synth::write_dataset(&pairs, &args.out)?;
    writeln!(out, "{}", manifest.display()).map_err(io_err)?;
    Ok(EXIT_OK)
}
