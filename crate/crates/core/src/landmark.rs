//! The 70-point landmark model: 68 iBUG facial points followed by the
//! subject's right and left shoulder.
//!
//! Left/right always refer to the subject's anatomy. In a frontal photo the
//! subject's right side appears on the left of the image, so for a well
//! oriented annotation `x(P36) < x(P45)` and `x(P68) < x(P69)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Total number of landmarks in a set.
pub const LANDMARK_COUNT: usize = 70;
/// Number of facial landmarks (indices `0..68`).
pub const FACE_LANDMARK_COUNT: usize = 68;

/// Named landmark indices used by the symmetry measures.
pub mod index {
    pub const OUTER_CANTHUS_R: usize = 36;
    pub const INNER_CANTHUS_R: usize = 39;
    pub const INNER_CANTHUS_L: usize = 42;
    pub const OUTER_CANTHUS_L: usize = 45;
    pub const MOUTH_CORNER_R: usize = 48;
    pub const MOUTH_CORNER_L: usize = 54;
    pub const SHOULDER_R: usize = 68;
    pub const SHOULDER_L: usize = 69;
}

/// Image-plane coordinate in pixels, y increasing downward.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point2<T> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point2<T> {
    pub const fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Converts to another scalar type.
    pub fn cast<U: Scalar>(self) -> Point2<U> {
        Point2::new(U::lit(self.x.to_f64_lossy()), U::lit(self.y.to_f64_lossy()))
    }
}

/// An ordered set of landmarks for one image.
///
/// Construction does not enforce the point count so that malformed inputs can
/// still be inspected by [`validate`]; every measure re-checks validity.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSet<T> {
    pub image_id: String,
    pub points: Vec<Point2<T>>,
}

impl<T: Scalar> LandmarkSet<T> {
    pub fn new(image_id: impl Into<String>, points: Vec<Point2<T>>) -> Self {
        Self { image_id: image_id.into(), points }
    }

    /// Landmark `i`. Panics if out of range; call [`validate`] first.
    pub fn point(&self, i: usize) -> Point2<T> {
        self.points[i]
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Applies `f` to every point, keeping the image id.
    pub fn map_points(&self, mut f: impl FnMut(usize, Point2<T>) -> Point2<T>) -> Self {
        Self {
            image_id: self.image_id.clone(),
            points: self.points.iter().enumerate().map(|(i, &p)| f(i, p)).collect(),
        }
    }

    pub fn cast<U: Scalar>(&self) -> LandmarkSet<U> {
        LandmarkSet { image_id: self.image_id.clone(), points: self.points.iter().map(|p| p.cast()).collect() }
    }
}

/// Structural defect that makes a landmark set unusable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValidationError {
    PointCount { expected: usize, found: usize },
    NonFinite { index: usize },
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PointCount { expected, found } => {
                write!(f, "point-count: expected {expected} points, found {found}")
            }
            Self::NonFinite { index } => write!(f, "non-finite: landmark {index} has a non-finite coordinate"),
        }
    }
}

/// Plausibility flag; does not block measurement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ValidationWarning {
    /// `x(P36) >= x(P45)`: eyes appear swapped or the face is mirrored.
    MirroredFace,
    /// `x(P68) >= x(P69)`.
    MirroredShoulders,
    /// Outer-canthal or shoulder span shorter than one pixel.
    DegenerateSpan,
}

impl ValidationWarning {
    pub fn code(self) -> &'static str {
        match self {
            Self::MirroredFace => "mirrored-face",
            Self::MirroredShoulders => "mirrored-shoulders",
            Self::DegenerateSpan => "degenerate-span",
        }
    }
}

impl fmt::Display for ValidationWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub errors: Vec<ValidationError>,
    pub warnings: Vec<ValidationWarning>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.errors.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let errors: Vec<String> = self.errors.iter().map(ToString::to_string).collect();
        let warnings: Vec<&str> = self.warnings.iter().map(|w| w.code()).collect();
        write!(f, "errors: [{}]; warnings: [{}]", errors.join(", "), warnings.join(", "))
    }
}

/// Checks structure (hard errors) and frontal-pose plausibility (warnings).
///
/// Warnings are only computed when the structure is sound.
pub fn validate<T: Scalar>(ls: &LandmarkSet<T>) -> ValidationReport {
    let mut report = ValidationReport::default();
    if ls.points.len() != LANDMARK_COUNT {
        report.errors.push(ValidationError::PointCount { expected: LANDMARK_COUNT, found: ls.points.len() });
    }
    for (i, p) in ls.points.iter().enumerate() {
        if !p.is_finite() {
            report.errors.push(ValidationError::NonFinite { index: i });
        }
    }
    if !report.errors.is_empty() {
        return report;
    }

    let p = |i| ls.point(i);
    if p(index::OUTER_CANTHUS_R).x >= p(index::OUTER_CANTHUS_L).x {
        report.warnings.push(ValidationWarning::MirroredFace);
    }
    if p(index::SHOULDER_R).x >= p(index::SHOULDER_L).x {
        report.warnings.push(ValidationWarning::MirroredShoulders);
    }
    let span = |a: Point2<T>, b: Point2<T>| (b.x - a.x).hypot(b.y - a.y);
    let canthal = span(p(index::OUTER_CANTHUS_R), p(index::OUTER_CANTHUS_L));
    let shoulders = span(p(index::SHOULDER_R), p(index::SHOULDER_L));
    if canthal < T::one() || shoulders < T::one() {
        report.warnings.push(ValidationWarning::DegenerateSpan);
    }
    report
}
