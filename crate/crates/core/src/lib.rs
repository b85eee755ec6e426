//! Face and upper-body symmetry measures computed from 2D landmarks, and the
//! metrics used to score predicted landmarks against ground truth.
//!
//! A landmark set holds 70 points: the 68 iBUG facial landmarks followed by
//! the subject's right (68) and left (69) shoulder. Six measures are derived
//! from it:
//!
//! | measure | unit    | definition                                              |
//! |---------|---------|---------------------------------------------------------|
//! | `fa`    | degrees | signed angle, eye line to mouth-corner line             |
//! | `osa`   | degrees | signed angle, outer-canthal line to inner-canthal line  |
//! | `rfs`   | ratio   | left canthus-to-mouth length over right                 |
//! | `ga`    | degrees | signed angle, outer-canthal line to midsternal plumb    |
//! | `hhd`   | degrees | signed angle, shoulder line to eye line                 |
//! | `td`    | ratio   | head-centre distance from plumb line / canthal distance |
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix it to `f64`, which is what file I/O and the CLI use.

pub mod dataset_io;
pub mod fixtures;
pub mod geometry;
pub mod landmark;
pub mod measures;
pub mod metrics;
pub mod scalar;

pub use geometry::{dist, midpoint, perp_cw, point_line_dist, signed_angle_deg, vec, GeometryError, Line2, Vec2};
pub use landmark::{validate, LandmarkSet, Point2, ValidationError, ValidationReport, ValidationWarning};
pub use measures::{compute, compute_all, Measure, MeasureError, SymmetryMeasures};
pub use metrics::{evaluate_series, MeasureSeries, MetricBundle, MetricsError, RhoBand, RhoBands};
pub use scalar::Scalar;

pub type Point = Point2<f64>;
pub type Vector = Vec2<f64>;
pub type Line = Line2<f64>;
pub type Landmarks = LandmarkSet<f64>;
pub type Measures = SymmetryMeasures<f64>;
pub type Series = MeasureSeries<f64>;
pub type Metrics = MetricBundle<f64>;

pub type Point32 = Point2<f32>;
pub type Landmarks32 = LandmarkSet<f32>;
pub type Measures32 = SymmetryMeasures<f32>;
