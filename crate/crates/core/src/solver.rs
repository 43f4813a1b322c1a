//! The Jungck iteration `y_n = S x_n = T x_{n+1}` and Cauchy diagnostics.
//!
//! Each step needs a `T`-preimage of `S x_n`, which exists whenever
//! `S(M) ⊆ T(M)`. On finite spaces the preimage with the smallest index is
//! chosen and convergence means exact repetition `y_n = y_{n+1}`. On
//! continuous domains the iteration stops once `d(y_n, y_{n+1}) < tol`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::contraction::{ContractionError, MapError, SelfMap, SelfMapPair};
use crate::control::ControlTriple;
use crate::metric::{distance, EuclideanDomain, MetricError, PointRef, Space};

/// Residual bound `|T x - y|` for continuous preimages.
pub const PREIMAGE_TOL: f64 = 1e-12;
pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 10_000;
/// Samples used to decide whether a 1-D `T` is monotone.
const MONOTONE_PROBES: usize = 1025;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("{point} has no T-preimage: S(M) is not contained in T(M) ({detail})")]
    Inclusion { point: String, detail: String },
    #[error("capability: {0}")]
    Capability(String),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error("iteration did not converge")]
    NotConverged,
    #[error("contradiction: T u = z = {z} but d(S u, z) = {residual} > tol for u = {u}")]
    Contradiction { u: String, z: String, residual: f64 },
}

/// Returns `x` with `T x = y` (finite) or `|T x - y| <= 1e-12` (continuous).
pub fn resolve_t_preimage(pair: &SelfMapPair, space: &Space, y: &PointRef) -> Result<PointRef, SolverError> {
    space.check(y)?;
    match (space, y) {
        (Space::Finite(_), PointRef::Index(target)) => {
            let table =
                pair.t.table().ok_or_else(|| SolverError::Capability("finite spaces need a table for T".into()))?;
            table.iter().position(|v| v == target).map(PointRef::Index).ok_or_else(|| SolverError::Inclusion {
                point: space.describe(y),
                detail: "not in the image of T".into(),
            })
        }
        (Space::Euclidean(domain), PointRef::Coords(target)) => {
            let x = continuous_preimage(pair, domain, target)?;
            let tx = pair.t.apply_coords("T", domain, &x)?;
            let residual = crate::metric::euclidean(&tx, target);
            if residual > PREIMAGE_TOL {
                return Err(SolverError::Inclusion {
                    point: y.to_string(),
                    detail: format!("best candidate {x:?} leaves residual {residual}"),
                });
            }
            Ok(PointRef::Coords(x))
        }
        _ => unreachable!("membership checked above"),
    }
}

fn continuous_preimage(pair: &SelfMapPair, domain: &EuclideanDomain, y: &[f64]) -> Result<Vec<f64>, SolverError> {
    let outside = |x: &[f64]| SolverError::Inclusion {
        point: format!("{y:?}"),
        detail: format!("preimage candidate {x:?} lies outside the domain"),
    };
    if let Some(inv) = &pair.t_inverse {
        let x = inv.eval(y[0]).map_err(|e| SolverError::Inclusion {
            point: format!("{}", y[0]),
            detail: format!("T_inverse failed: {e}"),
        })?;
        return if domain.contains(&[x]) { Ok(vec![x]) } else { Err(outside(&[x])) };
    }
    if let Some((a, b)) = pair.affine_t() {
        let rhs = nalgebra::DVector::from_column_slice(y) - b;
        let x = a
            .lu()
            .solve(&rhs)
            .ok_or_else(|| SolverError::Capability("affine T is singular; no unique preimage".into()))?;
        let x: Vec<f64> = x.iter().copied().collect();
        return if domain.contains(&x) { Ok(x) } else { Err(outside(&x)) };
    }
    match &pair.t {
        SelfMap::Expr(_) => bisect_monotone(pair, domain, y[0]).map(|x| vec![x]),
        _ => Err(SolverError::Capability("no preimage strategy for this map".into())),
    }
}

fn bisect_monotone(pair: &SelfMapPair, domain: &EuclideanDomain, y: f64) -> Result<f64, SolverError> {
    let (lo, hi) = (domain.lower()[0], domain.upper()[0]);
    let t = |x: f64| pair.t.apply_coords("T", domain, &[x]).map(|v| v[0]);
    let samples = (0..MONOTONE_PROBES)
        .map(|i| t(lo + (hi - lo) * i as f64 / (MONOTONE_PROBES - 1) as f64))
        .collect::<Result<Vec<_>, _>>()?;
    let increasing = samples.windows(2).all(|w| w[1] >= w[0]);
    let decreasing = samples.windows(2).all(|w| w[1] <= w[0]);
    if !(increasing || decreasing) {
        return Err(SolverError::Capability("T is not monotone on the domain; supply T_inverse".into()));
    }
    let (t_lo, t_hi) = (samples[0], samples[MONOTONE_PROBES - 1]);
    let (min, max) = (t_lo.min(t_hi), t_lo.max(t_hi));
    if y < min - PREIMAGE_TOL || y > max + PREIMAGE_TOL {
        return Err(SolverError::Inclusion { point: format!("{y}"), detail: format!("outside T(M) = [{min}, {max}]") });
    }
    // Keep the invariant sign(T(a) - y) != sign(T(b) - y) in the increasing orientation.
    let (mut a, mut b) = if increasing { (lo, hi) } else { (hi, lo) };
    for x in [a, b] {
        if (t(x)? - y).abs() <= PREIMAGE_TOL {
            return Ok(x);
        }
    }
    loop {
        let mid = 0.5 * (a + b);
        if mid == a || mid == b {
            return Ok(if (t(a)? - y).abs() <= (t(b)? - y).abs() { a } else { b });
        }
        let v = t(mid)?;
        if (v - y).abs() <= PREIMAGE_TOL {
            return Ok(mid);
        }
        if v < y {
            a = mid;
        } else {
            b = mid;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionReport {
    pub holds: bool,
    pub points_checked: usize,
    /// Images `Sx` without a `T`-preimage.
    pub witnesses: Vec<PointRef>,
}

/// Checks `S(M) ⊆ T(M)`: exactly on finite spaces, on the domain corners plus
/// `samples` seeded points otherwise.
pub fn check_inclusion(
    pair: &SelfMapPair,
    space: &Space,
    samples: usize,
    seed: u64,
) -> Result<InclusionReport, SolverError> {
    match space {
        Space::Finite(f) => {
            let (s, t) =
                pair.finite_tables().ok_or_else(|| SolverError::Capability("finite spaces need table maps".into()))?;
            let mut in_t = vec![false; f.len()];
            t.iter().for_each(|&v| in_t[v] = true);
            let mut witnesses: Vec<usize> = s.iter().copied().filter(|&v| !in_t[v]).collect();
            witnesses.sort_unstable();
            witnesses.dedup();
            Ok(InclusionReport {
                holds: witnesses.is_empty(),
                points_checked: f.len(),
                witnesses: witnesses.into_iter().map(PointRef::Index).collect(),
            })
        }
        Space::Euclidean(d) => {
            let mut points = d.corners();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            points.extend((0..samples).map(|_| d.sample(&mut rng)));
            let mut witnesses = Vec::new();
            for x in &points {
                let sx = PointRef::Coords(pair.s.apply_coords("S", d, x)?);
                match resolve_t_preimage(pair, space, &sx) {
                    Ok(_) => {}
                    Err(SolverError::Inclusion { .. }) => witnesses.push(sx),
                    Err(e) => return Err(e),
                }
            }
            Ok(InclusionReport { holds: witnesses.is_empty(), points_checked: points.len(), witnesses })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IterationStatus {
    Converged,
    MaxIterations,
    PreimageFailure,
}

impl std::fmt::Display for IterationStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            IterationStatus::Converged => "converged",
            IterationStatus::MaxIterations => "max-iterations",
            IterationStatus::PreimageFailure => "preimage-failure",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Step {
    pub n: usize,
    pub x: PointRef,
    pub y: PointRef,
    /// `d(y_n, y_{n+1})`, absent on the last row.
    pub gap: Option<f64>,
    /// `psi(gap)`.
    pub psi_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationTrace {
    pub steps: Vec<Step>,
    pub status: IterationStatus,
    pub limit: Option<PointRef>,
    /// Set by callers that certified the pair before iterating.
    pub certified: Option<bool>,
    pub failure: Option<String>,
}

impl IterationTrace {
    pub fn gaps(&self) -> Vec<f64> {
        self.steps.iter().filter_map(|s| s.gap).collect()
    }

    pub fn converged(&self) -> bool {
        self.status == IterationStatus::Converged
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateOptions {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for IterateOptions {
    fn default() -> Self {
        Self { tol: DEFAULT_TOL, max_iter: DEFAULT_MAX_ITER }
    }
}

/// Runs the Jungck iteration from `x0`.
///
/// Row `n` holds `x_n`, `y_n = S x_n` and the gap to `y_{n+1}`. At most
/// `max_iter` gaps are computed. On convergence a final row with the last
/// pair is appended and `limit` is the last `y`.
pub fn iterate(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    space: &Space,
    x0: &PointRef,
    opts: IterateOptions,
) -> Result<IterationTrace, SolverError> {
    space.check(x0)?;
    pair.validate(space)?;
    let finite = matches!(space, Space::Finite(_));
    let mut steps = Vec::new();
    let mut x = x0.clone();
    let mut y = pair.apply_s(space, &x)?;
    let mut n = 0;
    let finish = |steps, status, limit, failure| IterationTrace { steps, status, limit, certified: None, failure };
    loop {
        if n == opts.max_iter {
            steps.push(Step { n, x, y, gap: None, psi_gap: None });
            return Ok(finish(steps, IterationStatus::MaxIterations, None, None));
        }
        let next_x = match resolve_t_preimage(pair, space, &y) {
            Ok(p) => p,
            Err(e @ SolverError::Inclusion { .. }) => {
                steps.push(Step { n, x, y, gap: None, psi_gap: None });
                return Ok(finish(steps, IterationStatus::PreimageFailure, None, Some(e.to_string())));
            }
            Err(e) => return Err(e),
        };
        let next_y = pair.apply_s(space, &next_x)?;
        let gap = distance(space, &y, &next_y)?;
        let psi_gap =
            triple.psi.eval(gap).map_err(|source| ContractionError::Control { function: "psi", t: gap, source })?;
        steps.push(Step { n, x, y, gap: Some(gap), psi_gap: Some(psi_gap) });
        let done = if finite { gap == 0.0 } else { gap < opts.tol };
        if done {
            steps.push(Step { n: n + 1, x: next_x, y: next_y.clone(), gap: None, psi_gap: None });
            return Ok(finish(steps, IterationStatus::Converged, Some(next_y), None));
        }
        x = next_x;
        y = next_y;
        n += 1;
    }
}

/// A coincidence point `u` and its point of coincidence `z = S u = T u`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointOfCoincidence {
    pub u: PointRef,
    pub z: PointRef,
    pub s_residual: f64,
    pub t_residual: f64,
}

/// Recovers `u` with `T u = z` from a converged trace and checks `S u = z`
/// within `tol` (exactly on finite spaces).
pub fn extract_poc(
    trace: &IterationTrace,
    pair: &SelfMapPair,
    space: &Space,
    tol: f64,
) -> Result<PointOfCoincidence, SolverError> {
    let z = match (&trace.status, &trace.limit) {
        (IterationStatus::Converged, Some(z)) => z.clone(),
        _ => return Err(SolverError::NotConverged),
    };
    let tol = if matches!(space, Space::Finite(_)) { 0.0 } else { tol };
    let u = resolve_t_preimage(pair, space, &z)?;
    let s_residual = distance(space, &pair.apply_s(space, &u)?, &z)?;
    let t_residual = distance(space, &pair.apply_t(space, &u)?, &z)?;
    if s_residual > tol || t_residual > tol {
        return Err(SolverError::Contradiction {
            u: space.describe(&u),
            z: space.describe(&z),
            residual: s_residual.max(t_residual),
        });
    }
    Ok(PointOfCoincidence { u, z, s_residual, t_residual })
}

/// Smallest `n > k`, then smallest `m > n`, with
/// `d(x_m, x_n) >= epsilon0` and `d(x_{m-1}, x_n) < epsilon0`.
///
/// `None` when the prefix holds no such pair, as for any Cauchy prefix whose
/// tail stays within `epsilon0`.
pub fn cauchy_crossing_indices<P>(
    points: &[P],
    metric: impl Fn(&P, &P) -> f64,
    epsilon0: f64,
    k: usize,
) -> Option<(usize, usize)> {
    if points.len() < k + 2 || epsilon0 <= 0.0 {
        return None;
    }
    for n in (k + 1)..points.len() {
        let mut prev_close = true; // d(x_n, x_n) = 0 < epsilon0
        for m in (n + 1)..points.len() {
            let far = metric(&points[m], &points[n]) >= epsilon0;
            if far && prev_close {
                return Some((n, m));
            }
            prev_close = !far;
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRow {
    pub k: usize,
    pub n: usize,
    pub m: usize,
    /// `d(x_m, x_n)`
    pub d_m_n: f64,
    /// `d(x_{m-1}, x_n)`
    pub d_m1_n: f64,
    /// `d(x_{m-1}, x_{n+1})`
    pub d_m1_n1: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CauchyDiagnostics {
    pub epsilon0: f64,
    pub rows: Vec<CrossingRow>,
    /// Requested `k` for which no crossing pair exists in the prefix.
    pub missing: Vec<usize>,
}

impl CauchyDiagnostics {
    pub fn row(&self, k: usize) -> Option<&CrossingRow> {
        self.rows.iter().find(|r| r.k == k)
    }
}

/// Tabulates the three distances that approach `epsilon0` along crossing
/// indices of a non-Cauchy sequence with vanishing increments.
pub fn lemma_limit_estimates<P>(
    points: &[P],
    metric: impl Fn(&P, &P) -> f64,
    epsilon0: f64,
    ks: &[usize],
) -> CauchyDiagnostics {
    let mut rows = Vec::new();
    let mut missing = Vec::new();
    for &k in ks {
        match cauchy_crossing_indices(points, &metric, epsilon0, k) {
            Some((n, m)) => rows.push(CrossingRow {
                k,
                n,
                m,
                d_m_n: metric(&points[m], &points[n]),
                d_m1_n: metric(&points[m - 1], &points[n]),
                d_m1_n1: metric(&points[m - 1], &points[n + 1]),
            }),
            None => missing.push(k),
        }
    }
    CauchyDiagnostics { epsilon0, rows, missing }
}

/// Partial sums `H_0 = 0, H_1 = 1, H_2 = 1.5, ...` of the harmonic series.
pub fn harmonic_partial_sums(len: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(len);
    let mut acc = 0.0;
    for j in 0..len {
        if j > 0 {
            acc += 1.0 / j as f64;
        }
        out.push(acc);
    }
    out
}
