//! The six face and upper-body symmetry measures.
//!
//! All transverse vectors run from the subject's right to the subject's left.
//! The derived lines are
//!
//! * eye line `e`: right eye centre to left eye centre, each centre being the
//!   midpoint of that eye's two canthi (stable whether the eye is open or not);
//! * outer-canthal line `o = P45 - P36` and inner-canthal line `n = P42 - P39`;
//! * mouth line `m = P54 - P48`;
//! * shoulder line `s = P69 - P68`;
//! * midsternal plumb line: through the shoulder midpoint along `perp_cw(s)`,
//!   i.e. the perpendicular bisector of the shoulders, pointing down the body.
//!
//! Angles are in degrees with clockwise-on-screen positive (see
//! [`crate::geometry`]); `rfs` and `td` are unitless.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{dist, midpoint, perp_cw, point_line_dist, signed_angle_deg, vec, Line2, Vec2};
use crate::landmark::{index, validate, LandmarkSet, Point2, ValidationReport};
use crate::scalar::Scalar;

/// Identifies one of the six measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    /// Facial angle: eye line to mouth line.
    Fa,
    /// Orbit slopes angle: outer-canthal line to inner-canthal line.
    Osa,
    /// Relative face size: left canthus-to-mouth length over right.
    Rfs,
    /// Gaze angle: outer-canthal line to midsternal plumb line.
    Ga,
    /// Habitual head deviation: shoulder line to eye line.
    Hhd,
    /// Translational deformity: head-centre offset from the plumb line over
    /// outer-canthal distance.
    Td,
}

impl Measure {
    pub const ALL: [Measure; 6] = [Self::Fa, Self::Osa, Self::Rfs, Self::Ga, Self::Hhd, Self::Td];

    pub fn name(self) -> &'static str {
        match self {
            Self::Fa => "fa",
            Self::Osa => "osa",
            Self::Rfs => "rfs",
            Self::Ga => "ga",
            Self::Hhd => "hhd",
            Self::Td => "td",
        }
    }

    /// Angles are in degrees; the other two are ratios.
    pub fn is_angle(self) -> bool {
        matches!(self, Self::Fa | Self::Osa | Self::Ga | Self::Hhd)
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown measure {0:?} (expected one of fa, osa, rfs, ga, hhd, td)")]
pub struct UnknownMeasure(pub String);

impl FromStr for Measure {
    type Err = UnknownMeasure;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s)).ok_or_else(|| UnknownMeasure(s.to_owned()))
    }
}

/// Geometric element that collapsed to a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DegenerateElement {
    EyeLine,
    MouthLine,
    OuterCanthalLine,
    InnerCanthalLine,
    ShoulderLine,
    RightFaceLength,
}

impl fmt::Display for DegenerateElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::EyeLine => "eye line",
            Self::MouthLine => "mouth line",
            Self::OuterCanthalLine => "outer-canthal line",
            Self::InnerCanthalLine => "inner-canthal line",
            Self::ShoulderLine => "shoulder line",
            Self::RightFaceLength => "right canthus-to-mouth length",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MeasureError {
    #[error("{measure}: invalid landmark set ({report})")]
    Invalid { measure: Measure, report: ValidationReport },
    #[error("{measure}: degenerate {element} (coincident landmarks)")]
    Degenerate { measure: Measure, element: DegenerateElement },
}

impl MeasureError {
    pub fn measure(&self) -> Measure {
        match self {
            Self::Invalid { measure, .. } | Self::Degenerate { measure, .. } => *measure,
        }
    }
}

/// All six measures for one landmark set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymmetryMeasures<T> {
    pub fa: T,
    pub osa: T,
    pub rfs: T,
    pub ga: T,
    pub hhd: T,
    pub td: T,
}

impl<T: Scalar> SymmetryMeasures<T> {
    pub fn get(&self, m: Measure) -> T {
        match m {
            Measure::Fa => self.fa,
            Measure::Osa => self.osa,
            Measure::Rfs => self.rfs,
            Measure::Ga => self.ga,
            Measure::Hhd => self.hhd,
            Measure::Td => self.td,
        }
    }

    pub fn set(&mut self, m: Measure, value: T) {
        match m {
            Measure::Fa => self.fa = value,
            Measure::Osa => self.osa = value,
            Measure::Rfs => self.rfs = value,
            Measure::Ga => self.ga = value,
            Measure::Hhd => self.hhd = value,
            Measure::Td => self.td = value,
        }
    }
}

/// Computes one measure by name.
pub fn compute<T: Scalar>(m: Measure, ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    let lines = DerivedLines::from_set(m, ls)?;
    lines.measure(m)
}

/// Computes all six measures, failing on the first degenerate one.
pub fn compute_all<T: Scalar>(ls: &LandmarkSet<T>) -> Result<SymmetryMeasures<T>, MeasureError> {
    let lines = DerivedLines::from_set(Measure::Fa, ls)?;
    Ok(SymmetryMeasures {
        fa: lines.measure(Measure::Fa)?,
        osa: lines.measure(Measure::Osa)?,
        rfs: lines.measure(Measure::Rfs)?,
        ga: lines.measure(Measure::Ga)?,
        hhd: lines.measure(Measure::Hhd)?,
        td: lines.measure(Measure::Td)?,
    })
}

pub fn facial_angle<T: Scalar>(ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    compute(Measure::Fa, ls)
}

pub fn orbit_slopes_angle<T: Scalar>(ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    compute(Measure::Osa, ls)
}

pub fn relative_face_size<T: Scalar>(ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    compute(Measure::Rfs, ls)
}

/// Raw signed angle; an upright symmetric pose gives +90.
pub fn gaze_angle<T: Scalar>(ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    compute(Measure::Ga, ls)
}

pub fn habitual_head_deviation<T: Scalar>(ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    compute(Measure::Hhd, ls)
}

pub fn translational_deformity<T: Scalar>(ls: &LandmarkSet<T>) -> Result<T, MeasureError> {
    compute(Measure::Td, ls)
}

/// Intermediate lines shared by the measures.
#[derive(Debug, Clone, Copy)]
pub struct DerivedLines<T> {
    pub eye_line: Vec2<T>,
    pub outer_canthal: Vec2<T>,
    pub inner_canthal: Vec2<T>,
    pub mouth_line: Vec2<T>,
    pub shoulder_line: Vec2<T>,
    /// Midpoint of the outer canthi, the head-centre proxy for `td`.
    pub face_centre: Point2<T>,
    pub shoulder_midpoint: Point2<T>,
    pub right_face_length: T,
    pub left_face_length: T,
}

impl<T: Scalar> DerivedLines<T> {
    /// `measure` only labels the error if `ls` is structurally invalid.
    pub fn from_set(measure: Measure, ls: &LandmarkSet<T>) -> Result<Self, MeasureError> {
        let report = validate(ls);
        if !report.is_ok() {
            return Err(MeasureError::Invalid { measure, report });
        }
        let p = |i| ls.point(i);
        let right_eye = midpoint(p(index::OUTER_CANTHUS_R), p(index::INNER_CANTHUS_R));
        let left_eye = midpoint(p(index::INNER_CANTHUS_L), p(index::OUTER_CANTHUS_L));
        Ok(Self {
            eye_line: vec(right_eye, left_eye),
            outer_canthal: vec(p(index::OUTER_CANTHUS_R), p(index::OUTER_CANTHUS_L)),
            inner_canthal: vec(p(index::INNER_CANTHUS_R), p(index::INNER_CANTHUS_L)),
            mouth_line: vec(p(index::MOUTH_CORNER_R), p(index::MOUTH_CORNER_L)),
            shoulder_line: vec(p(index::SHOULDER_R), p(index::SHOULDER_L)),
            face_centre: midpoint(p(index::OUTER_CANTHUS_R), p(index::OUTER_CANTHUS_L)),
            shoulder_midpoint: midpoint(p(index::SHOULDER_R), p(index::SHOULDER_L)),
            right_face_length: dist(p(index::OUTER_CANTHUS_R), p(index::MOUTH_CORNER_R)),
            left_face_length: dist(p(index::OUTER_CANTHUS_L), p(index::MOUTH_CORNER_L)),
        })
    }

    /// Perpendicular bisector of the shoulders, pointing down the body.
    pub fn plumb_line(&self) -> Option<Line2<T>> {
        let dir = perp_cw(self.shoulder_line).ok()?;
        Line2::new(self.shoulder_midpoint, dir).ok()
    }

    pub fn measure(&self, m: Measure) -> Result<T, MeasureError> {
        let degenerate = |element| MeasureError::Degenerate { measure: m, element };
        let line = |v: Vec2<T>, element| if v.is_zero() { Err(degenerate(element)) } else { Ok(v) };
        let angle = |from, to| signed_angle_deg(from, to).expect("directions checked non-zero");

        match m {
            Measure::Fa => {
                let e = line(self.eye_line, DegenerateElement::EyeLine)?;
                let mouth = line(self.mouth_line, DegenerateElement::MouthLine)?;
                Ok(angle(e, mouth))
            }
            Measure::Osa => {
                let o = line(self.outer_canthal, DegenerateElement::OuterCanthalLine)?;
                let n = line(self.inner_canthal, DegenerateElement::InnerCanthalLine)?;
                Ok(angle(o, n))
            }
            Measure::Rfs => {
                if self.right_face_length == T::zero() {
                    return Err(degenerate(DegenerateElement::RightFaceLength));
                }
                Ok(self.left_face_length / self.right_face_length)
            }
            Measure::Ga => {
                let o = line(self.outer_canthal, DegenerateElement::OuterCanthalLine)?;
                let s = line(self.shoulder_line, DegenerateElement::ShoulderLine)?;
                let plumb = perp_cw(s).expect("shoulder line checked non-zero");
                Ok(angle(o, plumb))
            }
            Measure::Hhd => {
                let e = line(self.eye_line, DegenerateElement::EyeLine)?;
                let s = line(self.shoulder_line, DegenerateElement::ShoulderLine)?;
                Ok(angle(s, e))
            }
            Measure::Td => {
                let o = line(self.outer_canthal, DegenerateElement::OuterCanthalLine)?;
                line(self.shoulder_line, DegenerateElement::ShoulderLine)?;
                let plumb = self.plumb_line().expect("shoulder line checked non-zero");
                let offset = point_line_dist(self.face_centre, &plumb).expect("plumb direction non-zero");
                Ok(offset / o.norm())
            }
        }
    }
}
