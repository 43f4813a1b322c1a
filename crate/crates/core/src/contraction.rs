//! Self-map pairs `(S, T)` and certification of the contraction inequality
//!
//! ```text
//! psi(d(Sx,Sy)) <= alpha(d(Tx,Ty)) psi(d(Tx,Ty)) + beta(d(Tx,Ty)) psi(m(x,y))
//! m(x,y) = max{ d(Sy,Ty) (1 + d(Sx,Tx)) / (1 + d(Tx,Ty)), d(Tx,Ty) }
//! ```
//!
//! over ordered pairs `(x, y)`. `m` is not symmetric, so both orders are
//! always checked. A pair is a violation iff `RHS - LHS < 0` in floating
//! point; there is no tolerance.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::control::{ControlTriple, FunctionDescriptor};
use crate::expr::{EvalError, Expr};
use crate::metric::{euclidean, EuclideanDomain, FiniteMetricSpace, PointRef, Space};

/// Cap on violation rows kept in a report; `violation_count` is always exact.
pub const MAX_REPORTED_VIOLATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MapError {
    #[error("map {map} sends {point} to {image}, outside the space")]
    Escape { map: &'static str, point: String, image: String },
    #[error("map {map}: {message}")]
    Shape { map: &'static str, message: String },
    #[error("map {map} failed at {point}: {source}")]
    Eval {
        map: &'static str,
        point: String,
        #[source]
        source: EvalError,
    },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContractionError {
    #[error(transparent)]
    Map(#[from] MapError),
    #[error("{function} failed at t = {t}: {source}")]
    Control {
        function: &'static str,
        t: f64,
        #[source]
        source: EvalError,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A total self-map of a space.
#[derive(Debug, Clone, PartialEq)]
pub enum SelfMap {
    /// Finite spaces: `table[i]` is the image of point `i`.
    Table(Vec<usize>),
    /// 1-D domains: an expression in `x`.
    Expr(Expr),
    /// Boxes of any dimension: `x -> matrix * x + offset`.
    Affine { matrix: Vec<Vec<f64>>, offset: Vec<f64> },
}

impl SelfMap {
    pub fn identity_table(n: usize) -> Self {
        SelfMap::Table((0..n).collect())
    }

    pub fn constant_table(n: usize, a: usize) -> Self {
        SelfMap::Table(vec![a; n])
    }

    pub fn table(&self) -> Option<&[usize]> {
        match self {
            SelfMap::Table(t) => Some(t),
            _ => None,
        }
    }

    fn validate(&self, name: &'static str, space: &Space) -> Result<(), MapError> {
        let shape = |message: String| MapError::Shape { map: name, message };
        match (self, space) {
            (SelfMap::Table(t), Space::Finite(s)) => {
                if t.len() != s.len() {
                    return Err(shape(format!("table has {} entries, space has {} points", t.len(), s.len())));
                }
                if let Some(bad) = t.iter().find(|&&v| v >= s.len()) {
                    return Err(shape(format!("table entry {bad} out of range")));
                }
                Ok(())
            }
            (SelfMap::Expr(_), Space::Euclidean(d)) if d.dimension() == 1 => Ok(()),
            (SelfMap::Expr(_), Space::Euclidean(_)) => Err(shape("expressions define 1-D maps only".into())),
            (SelfMap::Affine { matrix, offset }, Space::Euclidean(d)) => {
                let k = d.dimension();
                if offset.len() != k || matrix.len() != k || matrix.iter().any(|r| r.len() != k) {
                    return Err(shape(format!("affine map must be {k}x{k} with a length-{k} offset")));
                }
                Ok(())
            }
            _ => Err(shape("map kind does not match the space".into())),
        }
    }

    /// Image of a coordinate vector, checked to lie in `domain`.
    pub fn apply_coords(&self, name: &'static str, domain: &EuclideanDomain, x: &[f64]) -> Result<Vec<f64>, MapError> {
        let image = match self {
            SelfMap::Expr(e) => {
                vec![e.eval(x[0]).map_err(|source| MapError::Eval { map: name, point: format!("{}", x[0]), source })?]
            }
            SelfMap::Affine { matrix, offset } => matrix
                .iter()
                .zip(offset)
                .map(|(row, b)| row.iter().zip(x).map(|(a, v)| a * v).sum::<f64>() + b)
                .collect(),
            SelfMap::Table(_) => {
                return Err(MapError::Shape { map: name, message: "table maps need a finite space".into() })
            }
        };
        if !domain.contains(&image) {
            return Err(MapError::Escape { map: name, point: format!("{x:?}"), image: format!("{image:?}") });
        }
        Ok(image)
    }

    pub fn apply(&self, name: &'static str, space: &Space, p: &PointRef) -> Result<PointRef, MapError> {
        match (self, space, p) {
            (SelfMap::Table(t), Space::Finite(_), PointRef::Index(i)) if *i < t.len() => Ok(PointRef::Index(t[*i])),
            (_, Space::Euclidean(d), PointRef::Coords(c)) if d.contains(c) => {
                Ok(PointRef::Coords(self.apply_coords(name, d, c)?))
            }
            _ => Err(MapError::Shape { map: name, message: format!("cannot apply to point {p}") }),
        }
    }
}

/// The pair `(S, T)`, optionally with an inverse of `T` for 1-D solving.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMapPair {
    pub s: SelfMap,
    pub t: SelfMap,
    pub t_inverse: Option<Expr>,
}

impl SelfMapPair {
    pub fn new(s: SelfMap, t: SelfMap) -> Self {
        Self { s, t, t_inverse: None }
    }

    pub fn with_t_inverse(mut self, inv: Expr) -> Self {
        self.t_inverse = Some(inv);
        self
    }

    /// Table pair on a finite space.
    pub fn tables(s: Vec<usize>, t: Vec<usize>) -> Self {
        Self::new(SelfMap::Table(s), SelfMap::Table(t))
    }

    pub fn validate(&self, space: &Space) -> Result<(), MapError> {
        self.s.validate("S", space)?;
        self.t.validate("T", space)?;
        if self.t_inverse.is_some() && !matches!(space, Space::Euclidean(d) if d.dimension() == 1) {
            return Err(MapError::Shape { map: "T_inverse", message: "only meaningful on 1-D domains".into() });
        }
        Ok(())
    }

    pub fn apply_s(&self, space: &Space, p: &PointRef) -> Result<PointRef, MapError> {
        self.s.apply("S", space, p)
    }

    pub fn apply_t(&self, space: &Space, p: &PointRef) -> Result<PointRef, MapError> {
        self.t.apply("T", space, p)
    }

    /// `(S table, T table)` for finite pairs.
    pub fn finite_tables(&self) -> Option<(&[usize], &[usize])> {
        Some((self.s.table()?, self.t.table()?))
    }

    pub(crate) fn affine_t(&self) -> Option<(DMatrix<f64>, DVector<f64>)> {
        match &self.t {
            SelfMap::Affine { matrix, offset } => {
                let k = offset.len();
                Some((DMatrix::from_fn(k, k, |i, j| matrix[i][j]), DVector::from_column_slice(offset)))
            }
            _ => None,
        }
    }
}

/// Both sides of the inequality at one ordered pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
}

impl InequalityCheck {
    pub fn holds(&self) -> bool {
        self.slack >= 0.0
    }
}

/// The distances entering the inequality at `(x, y)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairDistances {
    /// `d(Sx, Sy)`
    pub s: f64,
    /// `d(Tx, Ty)`
    pub t: f64,
    /// `d(Sx, Tx)`
    pub x_gap: f64,
    /// `d(Sy, Ty)`
    pub y_gap: f64,
}

impl PairDistances {
    pub fn m(&self) -> f64 {
        (self.y_gap * (1.0 + self.x_gap) / (1.0 + self.t)).max(self.t)
    }

    fn finite(space: &FiniteMetricSpace, s: &[usize], t: &[usize], x: usize, y: usize) -> Self {
        Self {
            s: space.dist(s[x], s[y]),
            t: space.dist(t[x], t[y]),
            x_gap: space.dist(s[x], t[x]),
            y_gap: space.dist(s[y], t[y]),
        }
    }

    fn between(sx: &[f64], sy: &[f64], tx: &[f64], ty: &[f64]) -> Self {
        Self { s: euclidean(sx, sy), t: euclidean(tx, ty), x_gap: euclidean(sx, tx), y_gap: euclidean(sy, ty) }
    }
}

fn control(f: &FunctionDescriptor, name: &'static str, t: f64) -> Result<f64, ContractionError> {
    f.eval(t).map_err(|source| ContractionError::Control { function: name, t, source })
}

/// Evaluates both sides of the inequality from precomputed distances.
pub fn evaluate_inequality(triple: &ControlTriple, d: &PairDistances) -> Result<InequalityCheck, ContractionError> {
    let lhs = control(&triple.psi, "psi", d.s)?;
    let rhs = control(&triple.alpha, "alpha", d.t)? * control(&triple.psi, "psi", d.t)?
        + control(&triple.beta, "beta", d.t)? * control(&triple.psi, "psi", d.m())?;
    Ok(InequalityCheck { lhs, rhs, slack: rhs - lhs })
}

fn distances(pair: &SelfMapPair, space: &Space, x: &PointRef, y: &PointRef) -> Result<PairDistances, ContractionError> {
    match space {
        Space::Finite(f) => {
            let (s, t) = pair
                .finite_tables()
                .ok_or_else(|| ContractionError::Precondition("finite spaces need table maps".into()))?;
            match (x, y) {
                (PointRef::Index(i), PointRef::Index(j)) if *i < f.len() && *j < f.len() => {
                    Ok(PairDistances::finite(f, s, t, *i, *j))
                }
                _ => Err(ContractionError::Precondition(format!("points {x}, {y} not in the space"))),
            }
        }
        Space::Euclidean(d) => match (x, y) {
            (PointRef::Coords(a), PointRef::Coords(b)) if d.contains(a) && d.contains(b) => {
                let sx = pair.s.apply_coords("S", d, a)?;
                let sy = pair.s.apply_coords("S", d, b)?;
                let tx = pair.t.apply_coords("T", d, a)?;
                let ty = pair.t.apply_coords("T", d, b)?;
                Ok(PairDistances::between(&sx, &sy, &tx, &ty))
            }
            _ => Err(ContractionError::Precondition(format!("points {x}, {y} not in the domain"))),
        },
    }
}

/// `m(x, y)` for the pair on `space`.
pub fn m_value(pair: &SelfMapPair, space: &Space, x: &PointRef, y: &PointRef) -> Result<f64, ContractionError> {
    Ok(distances(pair, space, x, y)?.m())
}

pub fn check_inequality_at(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    space: &Space,
    x: &PointRef,
    y: &PointRef,
) -> Result<InequalityCheck, ContractionError> {
    evaluate_inequality(triple, &distances(pair, space, x, y)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CertificationMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub x: PointRef,
    pub y: PointRef,
    pub lhs: f64,
    pub rhs: f64,
}

/// Outcome of checking the inequality on many ordered pairs.
///
/// `min_slack` is taken over pairs with `x != y`. On the diagonal the
/// inequality collapses to `0 <= beta(0) psi(m(x,x))`, which is zero at every
/// coincidence point; that minimum is kept apart in `min_diagonal_slack`.
/// Diagonal pairs still count as violations when they fail.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    pub mode: CertificationMode,
    pub pairs_checked: usize,
    pub min_slack: Option<f64>,
    pub min_diagonal_slack: Option<f64>,
    pub violation_count: usize,
    pub violations: Vec<Violation>,
    pub certified: bool,
}

#[derive(Default)]
struct Tally {
    pairs: usize,
    min_slack: Option<f64>,
    min_diag: Option<f64>,
    count: usize,
    rows: Vec<Violation>,
}

impl Tally {
    fn push(&mut self, x: &PointRef, y: &PointRef, diagonal: bool, c: InequalityCheck) {
        self.pairs += 1;
        let slot = if diagonal { &mut self.min_diag } else { &mut self.min_slack };
        *slot = Some(slot.map_or(c.slack, |m| m.min(c.slack)));
        if !c.holds() {
            self.count += 1;
            if self.rows.len() < MAX_REPORTED_VIOLATIONS {
                self.rows.push(Violation { x: x.clone(), y: y.clone(), lhs: c.lhs, rhs: c.rhs });
            }
        }
    }

    fn finish(self, mode: CertificationMode) -> CertificationReport {
        CertificationReport {
            mode,
            pairs_checked: self.pairs,
            min_slack: self.min_slack,
            min_diagonal_slack: self.min_diag,
            violation_count: self.count,
            certified: self.count == 0,
            violations: self.rows,
        }
    }
}

/// Checks all `n^2` ordered pairs of a finite space in row-major order.
pub fn certify_finite(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    space: &FiniteMetricSpace,
) -> Result<CertificationReport, ContractionError> {
    let (s, t) = pair
        .finite_tables()
        .ok_or_else(|| ContractionError::Precondition("finite certification needs table maps".into()))?;
    let n = space.len();
    if s.len() != n || t.len() != n || s.iter().chain(t).any(|&v| v >= n) {
        return Err(ContractionError::Precondition("map tables do not fit the space".into()));
    }
    let mut tally = Tally::default();
    for x in 0..n {
        for y in 0..n {
            let c = evaluate_inequality(triple, &PairDistances::finite(space, s, t, x, y))?;
            tally.push(&PointRef::Index(x), &PointRef::Index(y), x == y, c);
        }
    }
    Ok(tally.finish(CertificationMode::Exhaustive))
}

/// Quick yes/no version of [`certify_finite`] that stops at the first violation.
pub fn is_certified_finite(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    space: &FiniteMetricSpace,
) -> Result<bool, ContractionError> {
    let (s, t) = pair
        .finite_tables()
        .ok_or_else(|| ContractionError::Precondition("finite certification needs table maps".into()))?;
    for x in 0..space.len() {
        for y in 0..space.len() {
            if !evaluate_inequality(triple, &PairDistances::finite(space, s, t, x, y))?.holds() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The ordered pairs a sampled certification visits: all ordered pairs of
/// domain corners, then for every seeded draw `(x, y)` the pairs `(x, y)`,
/// `(y, x)` and `(x, x)`.
pub fn sample_pairs(domain: &EuclideanDomain, samples: usize, seed: u64) -> Vec<(Vec<f64>, Vec<f64>)> {
    let corners = domain.corners();
    let mut out = Vec::with_capacity(corners.len() * corners.len() + 3 * samples);
    for a in &corners {
        for b in &corners {
            out.push((a.clone(), b.clone()));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let x = domain.sample(&mut rng);
        let y = domain.sample(&mut rng);
        out.push((x.clone(), y.clone()));
        out.push((y, x.clone()));
        out.push((x.clone(), x));
    }
    out
}

/// Checks the inequality on seeded random pairs of a box domain.
///
/// Evidence, not proof. The report does not depend on the rayon pool size:
/// workers fill an indexed table that is folded in order.
pub fn certify_sampled(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    domain: &EuclideanDomain,
    samples: usize,
    seed: u64,
) -> Result<CertificationReport, ContractionError> {
    if samples == 0 {
        return Err(ContractionError::Precondition("samples must be >= 1".into()));
    }
    let space = Space::Euclidean(domain.clone());
    pair.validate(&space)?;
    let pairs = sample_pairs(domain, samples, seed);
    let checks: Vec<Result<InequalityCheck, ContractionError>> = pairs
        .par_iter()
        .map(|(x, y)| {
            let sx = pair.s.apply_coords("S", domain, x)?;
            let sy = pair.s.apply_coords("S", domain, y)?;
            let tx = pair.t.apply_coords("T", domain, x)?;
            let ty = pair.t.apply_coords("T", domain, y)?;
            evaluate_inequality(triple, &PairDistances::between(&sx, &sy, &tx, &ty))
        })
        .collect();
    let mut tally = Tally::default();
    for ((x, y), c) in pairs.into_iter().zip(checks) {
        let diagonal = x == y;
        tally.push(&PointRef::Coords(x), &PointRef::Coords(y), diagonal, c?);
    }
    Ok(tally.finish(CertificationMode::Sampled))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Points {0, 1, 3} on the line; T = id; S: p0 -> p0, p1 -> p0, p2 -> p1.
    fn three_point() -> (Space, SelfMapPair) {
        let space = Space::Finite(FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap());
        (space, SelfMapPair::tables(vec![0, 0, 1], vec![0, 1, 2]))
    }

    fn idx(i: usize) -> PointRef {
        PointRef::Index(i)
    }

    #[test]
    fn m_at_coincidence_points_is_distance_of_pocs() {
        // S = T, so every point is a coincidence point with w = Sx.
        let space = Space::Finite(FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap());
        let pair = SelfMapPair::tables(vec![1, 1, 2], vec![1, 1, 2]);
        let m = m_value(&pair, &space, &idx(0), &idx(2)).unwrap();
        assert_eq!(m, 2.0);
    }

    #[test]
    fn m_on_diagonal() {
        let (space, pair) = three_point();
        // d(Sp2, Tp2) = d(p1, p2) = 2, so m = 2 * 3.
        assert_eq!(m_value(&pair, &space, &idx(2), &idx(2)).unwrap(), 6.0);
    }

    #[test]
    fn m_hand_evaluated() {
        let (space, pair) = three_point();
        // max{ d(Sp2,Tp2) (1 + d(Sp1,Tp1)) / (1 + d(Tp1,Tp2)), d(Tp1,Tp2) } = max{2*2/3, 2}
        assert_eq!(m_value(&pair, &space, &idx(1), &idx(2)).unwrap(), 2.0);
        // asymmetric: m(p2, p1) = max{1 * 3 / 3, 2}
        assert_eq!(m_value(&pair, &space, &idx(2), &idx(1)).unwrap(), 2.0);
        let pair = SelfMapPair::tables(vec![2, 0, 0], vec![0, 1, 2]);
        let a = m_value(&pair, &space, &idx(0), &idx(1)).unwrap();
        let b = m_value(&pair, &space, &idx(1), &idx(0)).unwrap();
        assert_eq!((a, b), (1.0 * 4.0 / 2.0, 3.0 * 2.0 / 2.0));
    }

    #[test]
    fn slack_hand_evaluated() {
        let (space, pair) = three_point();
        let c = check_inequality_at(&pair, &ControlTriple::constants(0.6, 0.3), &space, &idx(1), &idx(2)).unwrap();
        assert_eq!(c.lhs, 1.0);
        assert!((c.rhs - 1.8).abs() < 1e-15);
        assert!((c.slack - 0.8).abs() < 1e-15);
        let d = check_inequality_at(&pair, &ControlTriple::constants(0.6, 0.3), &space, &idx(2), &idx(2)).unwrap();
        assert_eq!(d.lhs, 0.0);
        assert!(d.slack >= 0.0);
    }

    #[test]
    fn three_point_certifies() {
        let (space, pair) = three_point();
        let triple = ControlTriple::constants(0.6, 0.3);
        let r = certify_finite(&pair, &triple, space.as_finite().unwrap()).unwrap();
        // Oracle: all 9 ordered pairs by direct evaluation of both sides.
        let coords = [0.0f64, 1.0, 3.0];
        let (s, t) = ([0usize, 0, 1], [0usize, 1, 2]);
        for x in 0..3 {
            for y in 0..3 {
                let d = |a: usize, b: usize| (coords[a] - coords[b]).abs();
                let dt = d(t[x], t[y]);
                let m = (d(s[y], t[y]) * (1.0 + d(s[x], t[x])) / (1.0 + dt)).max(dt);
                assert!(d(s[x], s[y]) <= 0.6 * dt + 0.3 * m);
            }
        }
        assert!(r.certified);
        assert_eq!(r.pairs_checked, 9);
        assert_eq!(r.mode, CertificationMode::Exhaustive);
    }

    #[test]
    fn swap_violates() {
        let space = FiniteMetricSpace::from_line(&[0.0, 1.0]).unwrap();
        let pair = SelfMapPair::tables(vec![1, 0], vec![0, 1]);
        let r = certify_finite(&pair, &ControlTriple::constants(0.1, 0.1), &space).unwrap();
        assert!(!r.certified);
        assert_eq!(r.violation_count, 2);
        let v = &r.violations[0];
        assert_eq!((v.x.clone(), v.y.clone()), (idx(0), idx(1)));
        assert_eq!(v.lhs, 1.0);
        assert!((v.rhs - 0.2).abs() < 1e-15);
    }

    #[test]
    fn constant_s_certifies() {
        let space =
            FiniteMetricSpace::from_planar(&[[0.0, 0.0], [1.0, 0.0], [0.0, 2.0], [3.0, 1.0], [2.0, 2.0]]).unwrap();
        let pair = SelfMapPair::new(SelfMap::constant_table(5, 3), SelfMap::Table(vec![4, 3, 0, 0, 1]));
        let r = certify_finite(&pair, &ControlTriple::constants(0.2, 0.2), &space).unwrap();
        assert!(r.certified);
        assert_eq!(r.pairs_checked, 25);
    }

    fn continuous(s: &str, t: &str) -> (EuclideanDomain, SelfMapPair) {
        (
            EuclideanDomain::interval(0.0, 1.0).unwrap(),
            SelfMapPair::new(SelfMap::Expr(Expr::map(s).unwrap()), SelfMap::Expr(Expr::map(t).unwrap())),
        )
    }

    #[test]
    fn sampled_contraction() {
        let (dom, pair) = continuous("x/4", "x/2");
        let r = certify_sampled(&pair, &ControlTriple::constants(0.6, 0.1), &dom, 10_000, 1).unwrap();
        assert!(r.certified);
        assert!(r.min_slack.unwrap() > 0.0);
        assert_eq!(r.min_diagonal_slack, Some(0.0));
        assert_eq!(r.pairs_checked, 4 + 30_000);
    }

    #[test]
    fn sampled_violation_at_corners() {
        let (dom, pair) = continuous("x", "x/2");
        let r = certify_sampled(&pair, &ControlTriple::constants(0.2, 0.2), &dom, 100, 1).unwrap();
        assert!(!r.certified);
        let corner =
            r.violations.iter().find(|v| v.x == PointRef::scalar(0.0) && v.y == PointRef::scalar(1.0)).unwrap();
        assert_eq!(corner.lhs, 1.0);
        assert!((corner.rhs - 0.2).abs() < 1e-15);
    }

    #[test]
    fn sampled_preconditions() {
        let (dom, pair) = continuous("x/4", "x/2");
        assert!(matches!(
            certify_sampled(&pair, &ControlTriple::constants(0.6, 0.1), &dom, 0, 1),
            Err(ContractionError::Precondition(_))
        ));
        let (dom, pair) = continuous("x + 0.5", "x/2");
        assert!(matches!(
            certify_sampled(&pair, &ControlTriple::constants(0.6, 0.1), &dom, 10, 1),
            Err(ContractionError::Map(MapError::Escape { map: "S", .. }))
        ));
    }

    #[test]
    fn sampled_is_reproducible() {
        let (dom, pair) = continuous("x/4", "x/2");
        let a = certify_sampled(&pair, &ControlTriple::constants(0.6, 0.1), &dom, 500, 9).unwrap();
        let b = certify_sampled(&pair, &ControlTriple::constants(0.6, 0.1), &dom, 500, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn affine_maps_in_the_plane() {
        let dom = EuclideanDomain::new(vec![-1.0, -1.0], vec![1.0, 1.0]).unwrap();
        let pair = SelfMapPair::new(
            SelfMap::Affine { matrix: vec![vec![0.2, 0.0], vec![0.0, 0.2]], offset: vec![0.0, 0.0] },
            SelfMap::Affine { matrix: vec![vec![0.0, 1.0], vec![1.0, 0.0]], offset: vec![0.0, 0.0] },
        );
        let r = certify_sampled(&pair, &ControlTriple::constants(0.5, 0.1), &dom, 1000, 3).unwrap();
        assert!(r.certified);
        assert_eq!(r.pairs_checked, 16 + 3000);
    }
}
