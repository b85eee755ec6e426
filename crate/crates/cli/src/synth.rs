//! Synthetic ground-truth / prediction datasets built from the canonical
//! symmetric face.
//!
//! Each ground-truth set starts from the symmetric face and receives random
//! eye, mouth and shoulder asymmetries, a head tilt about the outer-canthal
//! midpoint, a lateral head offset and finally a random similarity transform
//! of the whole body. Predictions are the ground truth plus isotropic
//! Gaussian landmark noise, with an optional fraction of images whose face
//! landmarks are grossly displaced.

use std::path::{Path, PathBuf};

use posture_symmetry::dataset_io::{serialize_manifest, serialize_pts70, DatasetManifest, ManifestEntry};
use posture_symmetry::fixtures::symmetric_face;
use posture_symmetry::landmark::{index, FACE_LANDMARK_COUNT};
use posture_symmetry::{dist, midpoint, Landmarks, Point};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::CliError;

#[derive(Debug, Clone, PartialEq)]
pub struct SynthParams {
    pub n: usize,
    /// Landmark noise standard deviation, percent of the outer-canthal distance.
    pub sigma_pct: f64,
    /// Fraction of images whose predicted face landmarks fail grossly.
    pub outlier_fraction: f64,
    /// Displacement applied to each face landmark of an outlier image, pixels.
    pub outlier_px: f64,
    pub max_tilt_deg: f64,
    /// Lateral head offset bound, as a fraction of the outer-canthal distance.
    pub max_offset: f64,
    pub mouth_asymmetry_px: f64,
    pub eye_asymmetry_px: f64,
    pub shoulder_asymmetry_px: f64,
    pub seed: u64,
}

impl Default for SynthParams {
    fn default() -> Self {
        Self {
            n: 36,
            sigma_pct: 1.0,
            outlier_fraction: 0.0,
            outlier_px: 50.0,
            max_tilt_deg: 15.0,
            max_offset: 0.25,
            mouth_asymmetry_px: 12.0,
            eye_asymmetry_px: 8.0,
            shoulder_asymmetry_px: 15.0,
            seed: 0,
        }
    }
}

impl SynthParams {
    pub fn check(&self) -> Result<(), CliError> {
        let nonneg = |name: &str, v: f64| {
            if v.is_finite() && v >= 0.0 {
                Ok(())
            } else {
                Err(CliError::Usage(format!("{name} must be a finite non-negative number, got {v}")))
            }
        };
        if self.n == 0 {
            return Err(CliError::Usage("n must be at least 1".into()));
        }
        nonneg("sigma", self.sigma_pct)?;
        nonneg("outlier displacement", self.outlier_px)?;
        nonneg("max tilt", self.max_tilt_deg)?;
        nonneg("max offset", self.max_offset)?;
        nonneg("mouth asymmetry", self.mouth_asymmetry_px)?;
        nonneg("eye asymmetry", self.eye_asymmetry_px)?;
        nonneg("shoulder asymmetry", self.shoulder_asymmetry_px)?;
        if !(0.0..=1.0).contains(&self.outlier_fraction) {
            return Err(CliError::Usage(format!("outlier fraction must lie in [0, 1], got {}", self.outlier_fraction)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SynthPair {
    pub gt: Landmarks,
    pub pred: Landmarks,
    pub outlier: bool,
}

fn symmetric_draw(rng: &mut ChaCha8Rng, bound: f64) -> f64 {
    if bound == 0.0 {
        0.0
    } else {
        rng.random_range(-bound..=bound)
    }
}

fn rotate_about(p: Point, centre: Point, deg: f64) -> Point {
    let (s, c) = deg.to_radians().sin_cos();
    let (dx, dy) = (p.x - centre.x, p.y - centre.y);
    Point::new(centre.x + c * dx - s * dy, centre.y + s * dx + c * dy)
}

fn ground_truth(rng: &mut ChaCha8Rng, p: &SynthParams, id: String) -> Landmarks {
    let mut ls = symmetric_face::<f64>();
    ls.image_id = id;
    let canthal = dist(ls.point(index::OUTER_CANTHUS_R), ls.point(index::OUTER_CANTHUS_L));

    let mut nudge = |i: usize, dx: f64, dy: f64| {
        ls.points[i].x += dx;
        ls.points[i].y += dy;
    };
    let e = p.eye_asymmetry_px;
    nudge(index::INNER_CANTHUS_R, 0.0, symmetric_draw(rng, e));
    nudge(index::INNER_CANTHUS_L, 0.0, symmetric_draw(rng, e));
    let m = p.mouth_asymmetry_px;
    nudge(index::MOUTH_CORNER_R, symmetric_draw(rng, m / 2.0), symmetric_draw(rng, m));
    nudge(index::MOUTH_CORNER_L, symmetric_draw(rng, m / 2.0), symmetric_draw(rng, m));
    nudge(index::SHOULDER_L, 0.0, symmetric_draw(rng, p.shoulder_asymmetry_px));

    let tilt = symmetric_draw(rng, p.max_tilt_deg);
    let offset = symmetric_draw(rng, p.max_offset) * canthal;
    let centre = midpoint(ls.point(index::OUTER_CANTHUS_R), ls.point(index::OUTER_CANTHUS_L));
    let ls = ls.map_points(|i, q| {
        if i < FACE_LANDMARK_COUNT {
            let r = rotate_about(q, centre, tilt);
            Point::new(r.x + offset, r.y)
        } else {
            q
        }
    });

    let roll = rng.random_range(-10.0..=10.0);
    let scale = rng.random_range(0.6..=1.6);
    let (tx, ty) = (rng.random_range(100.0..=300.0), rng.random_range(50.0..=150.0));
    let origin = Point::new(0.0, 0.0);
    ls.map_points(|_, q| {
        let r = rotate_about(q, origin, roll);
        Point::new(scale * r.x + tx, scale * r.y + ty)
    })
}

/// Generates `params.n` pairs; identical parameters give identical pairs.
pub fn generate(params: &SynthParams) -> Result<Vec<SynthPair>, CliError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let n_outliers = (params.outlier_fraction * params.n as f64).round() as usize;
    let mut order: Vec<usize> = (0..params.n).collect();
    order.shuffle(&mut rng);
    let mut is_outlier = vec![false; params.n];
    for &i in &order[..n_outliers] {
        is_outlier[i] = true;
    }

    let mut pairs = Vec::with_capacity(params.n);
    for (i, &outlier) in is_outlier.iter().enumerate() {
        let gt = ground_truth(&mut rng, params, format!("synth_{i:03}"));
        let canthal = dist(gt.point(index::OUTER_CANTHUS_R), gt.point(index::OUTER_CANTHUS_L));
        let sigma = params.sigma_pct / 100.0 * canthal;
        let noise = Normal::new(0.0, sigma).map_err(|e| CliError::Usage(format!("sigma: {e}")))?;
        let mut pred = gt.map_points(|_, q| {
            if sigma == 0.0 {
                q
            } else {
                Point::new(q.x + noise.sample(&mut rng), q.y + noise.sample(&mut rng))
            }
        });
        if outlier {
            for q in pred.points.iter_mut().take(FACE_LANDMARK_COUNT) {
                let angle = rng.random_range(0.0..std::f64::consts::TAU);
                q.x += params.outlier_px * angle.cos();
                q.y += params.outlier_px * angle.sin();
            }
        }
        pairs.push(SynthPair { gt, pred, outlier });
    }
    Ok(pairs)
}

/// Writes `gt/*.pts70`, `pred/*.pts70` and `manifest.csv` under `out_dir`;
/// returns the manifest path.
pub fn write_dataset(pairs: &[SynthPair], out_dir: &Path) -> Result<PathBuf, CliError> {
    let io = |what: &Path, e: std::io::Error| CliError::Data(format!("cannot write {}: {e}", what.display()));
    for sub in ["gt", "pred"] {
        let d = out_dir.join(sub);
        std::fs::create_dir_all(&d).map_err(|e| io(&d, e))?;
    }
    let mut manifest = DatasetManifest::default();
    for pair in pairs {
        let id = &pair.gt.image_id;
        let gt_rel = PathBuf::from(format!("gt/{id}.pts70"));
        let pred_rel = PathBuf::from(format!("pred/{id}.pts70"));
        for (rel, ls) in [(&gt_rel, &pair.gt), (&pred_rel, &pair.pred)] {
            let text = serialize_pts70(ls).map_err(|e| CliError::Data(e.to_string()))?;
            let path = out_dir.join(rel);
            std::fs::write(&path, text).map_err(|e| io(&path, e))?;
        }
        manifest.entries.push(ManifestEntry { image_id: id.clone(), gt_path: gt_rel, pred_path: pred_rel });
    }
    let path = out_dir.join("manifest.csv");
    std::fs::write(&path, serialize_manifest(&manifest)).map_err(|e| io(&path, e))?;
    Ok(path)
}
