//! Metric spaces: finite matrix-backed spaces and closed Euclidean boxes.
//!
//! Finite spaces are validated with exact comparisons on the stored values.
//! Every finite space in this crate is therefore a genuine metric space (not a
//! pseudometric), and is complete and closed in itself.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance for checks on continuous domains.
pub const CONTINUOUS_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("distance matrix is not square: row {row} has {len} entries, expected {expected}")]
    NotSquare { row: usize, len: usize, expected: usize },
    #[error("distance matrix is empty")]
    Empty,
    #[error("non-finite distance at ({0}, {1})")]
    NonFinite(usize, usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("matrix violates the metric axioms ({} violation(s), first: {})", .0.len(), .0[0])]
    Axioms(Vec<AxiomViolation>),
    #[error("invalid domain: {0}")]
    Domain(String),
    #[error("point {point} does not belong to this space")]
    ForeignPoint { point: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axiom {
    /// `d(i,i) = 0`.
    ZeroDiagonal,
    /// `d(i,j) > 0` for `i != j`.
    Positivity,
    Symmetry,
    Triangle,
}

/// One violated axiom instance. `excess` is how far the stored values miss
/// the axiom (always positive).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomViolation {
    pub axiom: Axiom,
    pub indices: Vec<usize>,
    pub excess: f64,
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} at {:?} by {}", self.axiom, self.indices, self.excess)
    }
}

/// Checks the metric axioms on a square matrix of finite values.
///
/// Returns every violated instance; an empty list means `matrix` is a metric.
/// Symmetry is reported once per unordered pair. A triangle instance
/// `(k, j, i)` is skipped when it is the mirror of an already-checked
/// `(i, j, k)` over symmetric entries.
pub fn validate_metric(matrix: &[Vec<f64>]) -> Result<Vec<AxiomViolation>, MetricError> {
    let n = matrix.len();
    if n == 0 {
        return Err(MetricError::Empty);
    }
    for (i, row) in matrix.iter().enumerate() {
        if row.len() != n {
            return Err(MetricError::NotSquare { row: i, len: row.len(), expected: n });
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(MetricError::NonFinite(i, j));
        }
    }
    let d = |i: usize, j: usize| matrix[i][j];
    let mut out = Vec::new();

    for i in 0..n {
        if d(i, i) != 0.0 {
            out.push(AxiomViolation { axiom: Axiom::ZeroDiagonal, indices: vec![i, i], excess: d(i, i).abs() });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && d(i, j) <= 0.0 {
                out.push(AxiomViolation { axiom: Axiom::Positivity, indices: vec![i, j], excess: -d(i, j) });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if d(i, j) != d(j, i) {
                out.push(AxiomViolation {
                    axiom: Axiom::Symmetry,
                    indices: vec![i, j],
                    excess: (d(i, j) - d(j, i)).abs(),
                });
            }
        }
    }
    let symmetric = |a: usize, b: usize| d(a, b) == d(b, a);
    for i in 0..n {
        for k in 0..n {
            if i == k {
                continue;
            }
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                if i > k && symmetric(i, k) && symmetric(i, j) && symmetric(j, k) {
                    continue;
                }
                let bound = d(i, j) + d(j, k);
                if d(i, k) > bound {
                    out.push(AxiomViolation {
                        axiom: Axiom::Triangle,
                        indices: vec![i, j, k],
                        excess: d(i, k) - bound,
                    });
                }
            }
        }
    }
    Ok(out)
}

/// A finite metric space with a validated distance matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, dist: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let violations = validate_metric(&dist)?;
        if labels.len() != dist.len() {
            return Err(MetricError::LabelCount { expected: dist.len(), got: labels.len() });
        }
        for (i, l) in labels.iter().enumerate() {
            if labels[..i].contains(l) {
                return Err(MetricError::DuplicateLabel(l.clone()));
            }
        }
        if !violations.is_empty() {
            return Err(MetricError::Axioms(violations));
        }
        Ok(Self { labels, dist })
    }

    /// Labels `p0, p1, ...`.
    pub fn with_default_labels(dist: Vec<Vec<f64>>) -> Result<Self, MetricError> {
        let labels = (0..dist.len()).map(|i| format!("p{i}")).collect();
        Self::new(labels, dist)
    }

    /// Points on the real line with the induced metric `|a - b|`.
    pub fn from_line(coords: &[f64]) -> Result<Self, MetricError> {
        let dist = coords.iter().map(|a| coords.iter().map(|b| (a - b).abs()).collect()).collect();
        Self::with_default_labels(dist)
    }

    /// Points in the plane with the induced Euclidean metric.
    pub fn from_planar(points: &[[f64; 2]]) -> Result<Self, MetricError> {
        let dist = points.iter().map(|a| points.iter().map(|b| (a[0] - b[0]).hypot(a[1] - b[1])).collect()).collect();
        Self::with_default_labels(dist)
    }

    /// Random planar point cloud in the unit square. Axioms hold by
    /// construction; the (measure-zero) duplicate-point case is redrawn.
    pub fn random_planar<R: Rng>(rng: &mut R, n: usize) -> Self {
        loop {
            let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect();
            if let Ok(space) = Self::from_planar(&pts) {
                return space;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.dist
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn diameter(&self) -> f64 {
        self.dist.iter().flatten().copied().fold(0.0, f64::max)
    }
}

/// A closed axis-aligned box in `R^dimension` with the Euclidean metric.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuclideanDomain {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl EuclideanDomain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self, MetricError> {
        if lower.is_empty() || lower.len() != upper.len() {
            return Err(MetricError::Domain(format!(
                "bounds must be nonempty and of equal length ({} vs {})",
                lower.len(),
                upper.len()
            )));
        }
        for (axis, (lo, hi)) in lower.iter().zip(&upper).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(MetricError::Domain(format!("axis {axis}: need finite lower < upper, got [{lo}, {hi}]")));
            }
        }
        Ok(Self { lower, upper })
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self, MetricError> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn dimension(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, coords: &[f64]) -> bool {
        coords.len() == self.dimension()
            && coords
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(c, (lo, hi))| *c >= lo - CONTINUOUS_TOL && *c <= hi + CONTINUOUS_TOL)
    }

    pub fn diameter(&self) -> f64 {
        euclidean(&self.lower, &self.upper)
    }

    /// All `2^dimension` corners, lower-first in binary order.
    pub fn corners(&self) -> Vec<Vec<f64>> {
        let d = self.dimension();
        (0..1usize << d)
            .map(|mask| (0..d).map(|a| if mask >> a & 1 == 1 { self.upper[a] } else { self.lower[a] }).collect())
            .collect()
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<f64> {
        self.lower.iter().zip(&self.upper).map(|(lo, hi)| lo + (hi - lo) * rng.random::<f64>()).collect()
    }
}

pub fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PointRef {
    Index(usize),
    Coords(Vec<f64>),
}

impl PointRef {
    pub fn scalar(x: f64) -> Self {
        PointRef::Coords(vec![x])
    }

    pub fn index(&self) -> Option<usize> {
        match self {
            PointRef::Index(i) => Some(*i),
            PointRef::Coords(_) => None,
        }
    }

    pub fn coords(&self) -> Option<&[f64]> {
        match self {
            PointRef::Coords(c) => Some(c),
            PointRef::Index(_) => None,
        }
    }
}

impl fmt::Display for PointRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PointRef::Index(i) => write!(f, "#{i}"),
            PointRef::Coords(c) if c.len() == 1 => write!(f, "{}", c[0]),
            PointRef::Coords(c) => write!(f, "{c:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Space {
    Finite(FiniteMetricSpace),
    Euclidean(EuclideanDomain),
}

impl Space {
    pub fn contains(&self, p: &PointRef) -> bool {
        match (self, p) {
            (Space::Finite(s), PointRef::Index(i)) => *i < s.len(),
            (Space::Euclidean(d), PointRef::Coords(c)) => d.contains(c),
            _ => false,
        }
    }

    pub fn check(&self, p: &PointRef) -> Result<(), MetricError> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(MetricError::ForeignPoint { point: p.to_string() })
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            Space::Finite(s) => s.diameter(),
            Space::Euclidean(d) => d.diameter(),
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteMetricSpace> {
        match self {
            Space::Finite(s) => Some(s),
            Space::Euclidean(_) => None,
        }
    }

    pub fn as_euclidean(&self) -> Option<&EuclideanDomain> {
        match self {
            Space::Euclidean(d) => Some(d),
            Space::Finite(_) => None,
        }
    }

    /// Human-readable name of a point (its label on finite spaces).
    pub fn describe(&self, p: &PointRef) -> String {
        match (self, p) {
            (Space::Finite(s), PointRef::Index(i)) if *i < s.len() => s.label(*i).to_string(),
            _ => p.to_string(),
        }
    }
}

/// Evaluates `d(x, y)`; both points must belong to `space`.
pub fn distance(space: &Space, x: &PointRef, y: &PointRef) -> Result<f64, MetricError> {
    space.check(x)?;
    space.check(y)?;
    Ok(match (x, y) {
        (PointRef::Index(i), PointRef::Index(j)) => space.as_finite().unwrap().dist(*i, *j),
        (PointRef::Coords(a), PointRef::Coords(b)) => euclidean(a, b),
        _ => unreachable!("membership check rejects mixed arguments"),
    })
}
