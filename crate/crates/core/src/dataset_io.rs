//! Landmark files and dataset manifests.
//!
//! A `.pts70` file is the community `.pts` grammar with 70 points:
//!
//! ```text
//! version: 1
//! n_points: 70
//! {
//! 100.000000 100.000000
//! ... 70 coordinate lines in landmark order ...
//! }
//! ```
//!
//! A manifest is a comma-separated table with the header
//! `image_id,gt_path,pred_path`; paths are relative to a base directory,
//! normally the manifest's own directory.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use thiserror::Error;

use crate::landmark::{validate, LandmarkSet, Point2, ValidationReport, LANDMARK_COUNT};
use crate::scalar::Scalar;

pub const PTS_VERSION: u32 = 1;
pub const MANIFEST_HEADER: [&str; 3] = ["image_id", "gt_path", "pred_path"];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

/// Structural problem when serializing.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot serialize {image_id}: expected {LANDMARK_COUNT} points, found {found}")]
pub struct SerializeError {
    pub image_id: String,
    pub found: usize,
}

/// Parses a `.pts`-style document with any declared point count.
///
/// The declared count must match the number of coordinate lines. Blank lines
/// are ignored; line numbers in errors are 1-based physical lines.
pub fn parse_pts<T: Scalar>(text: &str, image_id: &str) -> Result<LandmarkSet<T>, ParseError> {
    parse_document(text, image_id, None)
}

/// Parses a strict 70-point document.
pub fn parse_pts70<T: Scalar>(text: &str, image_id: &str) -> Result<LandmarkSet<T>, ParseError> {
    parse_document(text, image_id, Some(LANDMARK_COUNT))
}

fn parse_document<T: Scalar>(
    text: &str,
    image_id: &str,
    required: Option<usize>,
) -> Result<LandmarkSet<T>, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim())).filter(|(_, l)| !l.is_empty());
    let last_line = text.lines().count().max(1);
    let mut next = |what: &str| {
        lines.next().ok_or_else(|| ParseError::new(last_line, format!("unexpected end of file, expected {what}")))
    };

    let (ln, version) = next("version header")?;
    let version: u32 = header_value(ln, version, "version")?;
    if version != PTS_VERSION {
        return Err(ParseError::new(ln, format!("unsupported version {version}")));
    }
    let (count_line, n) = next("n_points header")?;
    let n: usize = header_value(count_line, n, "n_points")?;
    if let Some(required) = required.filter(|&r| r != n) {
        return Err(ParseError::new(count_line, format!("n_points must be {required}, found {n}")));
    }
    let (ln, open) = next("'{'")?;
    if open != "{" {
        return Err(ParseError::new(ln, format!("expected '{{', found {open:?}")));
    }

    let mut points = Vec::with_capacity(n);
    loop {
        let (ln, l) = next("'}'")?;
        if l == "}" {
            break;
        }
        if points.len() == n {
            return Err(ParseError::new(ln, format!("expected '}}' after {n} points, found {l:?}")));
        }
        let mut fields = l.split_whitespace();
        let mut coord = |axis| {
            let field = fields.next().ok_or_else(|| ParseError::new(ln, format!("missing {axis} coordinate")))?;
            let v: f64 =
                field.parse().map_err(|_| ParseError::new(ln, format!("malformed {axis} coordinate {field:?}")))?;
            if !v.is_finite() {
                return Err(ParseError::new(ln, format!("non-finite {axis} coordinate {field:?}")));
            }
            Ok(T::lit(v))
        };
        let x = coord("x")?;
        let y = coord("y")?;
        if let Some(extra) = fields.next() {
            return Err(ParseError::new(ln, format!("unexpected trailing field {extra:?}")));
        }
        points.push(Point2::new(x, y));
    }
    if points.len() != n {
        return Err(ParseError::new(
            count_line,
            format!("n_points declares {n} but {} coordinate lines follow", points.len()),
        ));
    }
    if let Some((ln, l)) = lines.next() {
        return Err(ParseError::new(ln, format!("unexpected content after '}}': {l:?}")));
    }
    Ok(LandmarkSet::new(image_id, points))
}

fn header_value<V: std::str::FromStr>(ln: usize, line: &str, key: &str) -> Result<V, ParseError> {
    let (k, v) = line
        .split_once(':')
        .ok_or_else(|| ParseError::new(ln, format!("expected '{key}: <value>', found {line:?}")))?;
    if k.trim() != key {
        return Err(ParseError::new(ln, format!("expected '{key}', found {:?}", k.trim())));
    }
    v.trim().parse().map_err(|_| ParseError::new(ln, format!("malformed {key} value {:?}", v.trim())))
}

/// Serializes at 6 decimal places; output is byte-deterministic.
pub fn serialize_pts70<T: Scalar>(ls: &LandmarkSet<T>) -> Result<String, SerializeError> {
    if ls.len() != LANDMARK_COUNT {
        return Err(SerializeError { image_id: ls.image_id.clone(), found: ls.len() });
    }
    let mut out = format!("version: {PTS_VERSION}\nn_points: {LANDMARK_COUNT}\n{{\n");
    for p in &ls.points {
        // avoid "-0.000000" so the fixpoint is stable
        let fmt = |v: T| {
            let s = format!("{:.6}", v.to_f64_lossy());
            if s == "-0.000000" {
                "0.000000".to_owned()
            } else {
                s
            }
        };
        let _ = writeln!(out, "{} {}", fmt(p.x), fmt(p.y));
    }
    out.push_str("}\n");
    Ok(out)
}

/// Image id for a landmark file: its file name without extension.
pub fn image_id_from_path(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub image_id: String,
    pub gt_path: PathBuf,
    pub pred_path: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetManifest {
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub fn parse_manifest(text: &str) -> Result<DatasetManifest, ParseError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());

    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| ParseError::new(1, "missing header image_id,gt_path,pred_path"))?
        .map_err(csv_error)?;
    let header_line = line_of(&header);
    if header.iter().collect::<Vec<_>>() != MANIFEST_HEADER {
        return Err(ParseError::new(
            header_line,
            format!(
                "expected header image_id,gt_path,pred_path, found {:?}",
                header.iter().collect::<Vec<_>>().join(",")
            ),
        ));
    }

    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for record in records {
        let record = record.map_err(csv_error)?;
        let line = line_of(&record);
        let fields: Vec<&str> = record.iter().collect();
        if fields.iter().all(|f| f.is_empty()) {
            continue;
        }
        if let Some(col) = fields.iter().position(|f| f.is_empty()) {
            return Err(ParseError::new(line, format!("empty {} field", MANIFEST_HEADER[col])));
        }
        if !seen.insert(fields[0].to_owned()) {
            return Err(ParseError::new(line, format!("duplicate image_id {:?}", fields[0])));
        }
        entries.push(ManifestEntry {
            image_id: fields[0].to_owned(),
            gt_path: PathBuf::from(fields[1]),
            pred_path: PathBuf::from(fields[2]),
        });
    }
    Ok(DatasetManifest { entries })
}

fn line_of(record: &csv::StringRecord) -> usize {
    record.position().map_or(1, |p| p.line() as usize)
}

fn csv_error(e: csv::Error) -> ParseError {
    let line = e.position().map_or(1, |p| p.line() as usize);
    let message = match e.kind() {
        csv::ErrorKind::UnequalLengths { len, expected_len, .. } => {
            format!("expected {expected_len} columns, found {len}")
        }
        _ => e.to_string(),
    };
    ParseError::new(line, message)
}

/// Writes a manifest with LF line endings.
pub fn serialize_manifest(manifest: &DatasetManifest) -> String {
    let mut writer = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    writer.write_record(MANIFEST_HEADER).expect("in-memory write");
    for e in &manifest.entries {
        writer
            .write_record([e.image_id.as_str(), &e.gt_path.to_string_lossy(), &e.pred_path.to_string_lossy()])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Gt,
    Pred,
}

impl Role {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gt => "gt",
            Self::Pred => "pred",
        }
    }
}

impl std::fmt::Display for Role {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error)]
pub enum LoadErrorKind {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{path}: invalid landmarks ({report})")]
    Invalid { path: PathBuf, report: ValidationReport },
}

#[derive(Debug, Error)]
#[error("{image_id} ({role}): {kind}")]
pub struct LoadError {
    pub image_id: String,
    pub role: Role,
    pub kind: LoadErrorKind,
}

/// One ground-truth / prediction pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkPair<T> {
    pub gt: LandmarkSet<T>,
    pub pred: LandmarkSet<T>,
}

#[derive(Debug)]
pub struct LoadedDataset<T> {
    pub pairs: Vec<LandmarkPair<T>>,
    /// Entries dropped in skip-bad mode, in manifest order.
    pub skipped: Vec<LoadError>,
}

/// Reads and validates a landmark file. Any declared point count parses;
/// a count other than 70 surfaces as a validation error.
pub fn load_landmarks<T: Scalar>(path: &Path, image_id: &str) -> Result<LandmarkSet<T>, LoadErrorKind> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadErrorKind::Io { path: path.to_owned(), source })?;
    let ls = parse_pts(&text, image_id).map_err(|source| LoadErrorKind::Parse { path: path.to_owned(), source })?;
    let report = validate(&ls);
    if !report.is_ok() {
        return Err(LoadErrorKind::Invalid { path: path.to_owned(), report });
    }
    Ok(ls)
}

/// Loads every pair in manifest order. Fails on the first bad entry unless
/// `skip_bad` is set, in which case bad entries are collected in `skipped`.
pub fn load_dataset<T: Scalar>(
    manifest: &DatasetManifest,
    base_dir: &Path,
    skip_bad: bool,
) -> Result<LoadedDataset<T>, LoadError> {
    let results: Vec<Result<LandmarkPair<T>, LoadError>> = manifest
        .entries
        .par_iter()
        .map(|e| {
            let load = |role: Role, rel: &Path| {
                load_landmarks(&base_dir.join(rel), &e.image_id).map_err(|kind| LoadError {
                    image_id: e.image_id.clone(),
                    role,
                    kind,
                })
            };
            Ok(LandmarkPair { gt: load(Role::Gt, &e.gt_path)?, pred: load(Role::Pred, &e.pred_path)? })
        })
        .collect();

    let mut dataset = LoadedDataset { pairs: Vec::with_capacity(results.len()), skipped: Vec::new() };
    for r in results {
        match r {
            Ok(pair) => dataset.pairs.push(pair),
            Err(e) if skip_bad => dataset.skipped.push(e),
            Err(e) => return Err(e),
        }
    }
    Ok(dataset)
}
