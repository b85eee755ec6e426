//! Prediction-quality metrics for paired ground-truth / predicted values:
//! Spearman's rank correlation, binary classification accuracy about the
//! ground-truth mean, mean absolute error and root mean squared error.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::measures::Measure;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("series is empty")]
    Empty,
    #[error("ground truth has {gt} values but prediction has {pred}")]
    LengthMismatch { gt: usize, pred: usize },
    #[error("non-finite {role} value at position {index}")]
    NonFinite { role: &'static str, index: usize },
    #[error("need at least 2 samples, got {n}")]
    InsufficientSample { n: usize },
    #[error("correlation {0} outside [-1, 1]")]
    RhoOutOfRange(f64),
    #[error("band edges must be increasing within (0, 1], got {0:?}")]
    InvalidBands([f64; 4]),
}

/// Paired ground-truth and predicted values of one measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSeries<T> {
    measure: Measure,
    gt: Vec<T>,
    pred: Vec<T>,
}

impl<T: Scalar> MeasureSeries<T> {
    pub fn new(measure: Measure, gt: Vec<T>, pred: Vec<T>) -> Result<Self, MetricsError> {
        if gt.len() != pred.len() {
            return Err(MetricsError::LengthMismatch { gt: gt.len(), pred: pred.len() });
        }
        if gt.is_empty() {
            return Err(MetricsError::Empty);
        }
        for (role, values) in [("ground-truth", &gt), ("predicted", &pred)] {
            if let Some(index) = values.iter().position(|v| !v.is_finite()) {
                return Err(MetricsError::NonFinite { role, index });
            }
        }
        Ok(Self { measure, gt, pred })
    }

    pub fn measure(&self) -> Measure {
        self.measure
    }

    pub fn gt(&self) -> &[T] {
        &self.gt
    }

    pub fn pred(&self) -> &[T] {
        &self.pred
    }

    pub fn len(&self) -> usize {
        self.gt.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gt.is_empty()
    }

    fn errors(&self) -> impl Iterator<Item = T> + '_ {
        self.gt.iter().zip(&self.pred).map(|(&g, &p)| p - g)
    }
}

/// 1-based ranks; ties share the mean of the ranks they span.
pub fn average_ranks<T: Scalar>(values: &[T]) -> Vec<T> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].partial_cmp(&values[b]).unwrap_or(Ordering::Equal));

    let mut ranks = vec![T::zero(); values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = T::from_usize_exact(start + 1 + end) / T::lit(2.0);
        for &i in &order[start..end] {
            ranks[i] = rank;
        }
        start = end;
    }
    ranks
}

fn mean<T: Scalar>(values: &[T]) -> T {
    values.iter().fold(T::zero(), |acc, &v| acc + v) / T::from_usize_exact(values.len())
}

/// Pearson correlation; `None` when either input has zero variance.
fn pearson<T: Scalar>(x: &[T], y: &[T]) -> Option<T> {
    let (mx, my) = (mean(x), mean(y));
    let (mut sxy, mut sxx, mut syy) = (T::zero(), T::zero(), T::zero());
    for (&a, &b) in x.iter().zip(y) {
        let (da, db) = (a - mx, b - my);
        sxy = sxy + da * db;
        sxx = sxx + da * da;
        syy = syy + db * db;
    }
    if sxx == T::zero() || syy == T::zero() {
        return None;
    }
    let r = sxy / (sxx * syy).sqrt();
    Some(r.max(-T::one()).min(T::one()))
}

/// Spearman's rho as the Pearson correlation of average ranks.
///
/// `Ok(None)` means undefined: one side is constant.
pub fn spearman_rho<T: Scalar>(s: &MeasureSeries<T>) -> Result<Option<T>, MetricsError> {
    if s.len() < 2 {
        return Err(MetricsError::InsufficientSample { n: s.len() });
    }
    Ok(pearson(&average_ranks(&s.gt), &average_ranks(&s.pred)))
}

/// Fraction of samples where `pred > mean(gt)` agrees with `gt > mean(gt)`.
pub fn bca<T: Scalar>(s: &MeasureSeries<T>) -> T {
    let mu = mean(&s.gt);
    let agree = s.gt.iter().zip(&s.pred).filter(|(&g, &p)| (p > mu) == (g > mu)).count();
    T::from_usize_exact(agree) / T::from_usize_exact(s.len())
}

pub fn mae<T: Scalar>(s: &MeasureSeries<T>) -> T {
    s.errors().fold(T::zero(), |acc, e| acc + e.abs()) / T::from_usize_exact(s.len())
}

pub fn rmse<T: Scalar>(s: &MeasureSeries<T>) -> T {
    (s.errors().fold(T::zero(), |acc, e| acc + e * e) / T::from_usize_exact(s.len())).sqrt()
}

/// Verbal strength of a correlation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RhoBand {
    VeryWeak,
    Weak,
    Moderate,
    Strong,
    VeryStrong,
}

impl RhoBand {
    pub fn label(self) -> &'static str {
        match self {
            Self::VeryWeak => "very weak",
            Self::Weak => "weak",
            Self::Moderate => "moderate",
            Self::Strong => "strong",
            Self::VeryStrong => "very strong",
        }
    }
}

impl fmt::Display for RhoBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Lower edges (inclusive) of the weak..very-strong bands on `|rho|`.
/// Anything below `weak` is very weak.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RhoBands {
    pub weak: f64,
    pub moderate: f64,
    pub strong: f64,
    pub very_strong: f64,
}

impl Default for RhoBands {
    fn default() -> Self {
        Self { weak: 0.1, moderate: 0.3, strong: 0.6, very_strong: 0.8 }
    }
}

impl RhoBands {
    pub fn from_edges(edges: [f64; 4]) -> Result<Self, MetricsError> {
        let ok = edges[0] > 0.0 && edges.windows(2).all(|w| w[0] < w[1]) && edges[3] <= 1.0;
        if !ok {
            return Err(MetricsError::InvalidBands(edges));
        }
        Ok(Self { weak: edges[0], moderate: edges[1], strong: edges[2], very_strong: edges[3] })
    }

    pub fn edges(&self) -> [f64; 4] {
        [self.weak, self.moderate, self.strong, self.very_strong]
    }

    pub fn classify<T: Scalar>(&self, rho: T) -> Result<RhoBand, MetricsError> {
        let r = rho.to_f64_lossy();
        if !(-1.0..=1.0).contains(&r) {
            return Err(MetricsError::RhoOutOfRange(r));
        }
        let a = r.abs();
        Ok(if a >= self.very_strong {
            RhoBand::VeryStrong
        } else if a >= self.strong {
            RhoBand::Strong
        } else if a >= self.moderate {
            RhoBand::Moderate
        } else if a >= self.weak {
            RhoBand::Weak
        } else {
            RhoBand::VeryWeak
        })
    }
}

/// Classifies with the default bands.
pub fn classify_rho<T: Scalar>(rho: T) -> Result<RhoBand, MetricsError> {
    RhoBands::default().classify(rho)
}

/// All four metrics for one series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricBundle<T> {
    /// `None` when undefined (constant ranks on one side).
    pub spearman_rho: Option<T>,
    pub rho_band: Option<RhoBand>,
    pub bca: T,
    pub mae: T,
    pub rmse: T,
}

pub fn evaluate_series<T: Scalar>(s: &MeasureSeries<T>, bands: &RhoBands) -> Result<MetricBundle<T>, MetricsError> {
    let rho = spearman_rho(s)?;
    Ok(MetricBundle {
        spearman_rho: rho,
        rho_band: rho.map(|r| bands.classify(r)).transpose()?,
        bca: bca(s),
        mae: mae(s),
        rmse: rmse(s),
    })
}
