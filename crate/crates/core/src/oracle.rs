//! Brute-force ground truth on finite spaces.
//!
//! The sequence-based notions (compatibility, property (E.A.)) become exactly
//! decidable on a finite metric space. A convergent sequence there is
//! eventually constant, so `lim S x_n = lim T x_n = t` forces `S x = T x = t`
//! for every value `x` that occurs infinitely often in `(x_n)`. Hence:
//!
//! * property (E.A.) holds iff `C(S,T)` is nonempty (take `x_n ≡ x` for a
//!   coincidence point `x`);
//! * the pair is compatible iff `S T x = T S x` at every coincidence point,
//!   and noncompatible iff some coincidence point breaks commutation. With no
//!   coincidence points the pair is vacuously compatible.
//!
//! Theorem checks are premise-gated: a failed conclusion only counts as a
//! falsification when every premise verifiably holds.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::contraction::{
    certify_finite, is_certified_finite, CertificationReport, ContractionError, SelfMap, SelfMapPair,
};
use crate::control::{uniform_grid, ControlError, ControlTriple, FunctionDescriptor, DEFAULT_GRID_POINTS};
use crate::metric::{FiniteMetricSpace, PointRef, Space};
use crate::solver::{iterate, IterateOptions, SolverError};

pub const DEFAULT_REJECTION_BUDGET: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("oracle needs table maps on a finite space")]
    NotFinite,
    #[error(transparent)]
    Contraction(#[from] ContractionError),
    #[error(transparent)]
    Control(#[from] ControlError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

fn tables(pair: &SelfMapPair) -> Result<(&[usize], &[usize]), OracleError> {
    pair.finite_tables().ok_or(OracleError::NotFinite)
}

/// `C(S,T) = { x : S x = T x }`.
pub fn coincidence_points(pair: &SelfMapPair, space: &FiniteMetricSpace) -> Result<Vec<usize>, OracleError> {
    let (s, t) = tables(pair)?;
    Ok((0..space.len()).filter(|&x| s[x] == t[x]).collect())
}

/// Points of coincidence `{ S x : x ∈ C(S,T) }`, sorted.
pub fn points_of_coincidence(pair: &SelfMapPair, space: &FiniteMetricSpace) -> Result<Vec<usize>, OracleError> {
    let s = tables(pair)?.0;
    let mut out: Vec<usize> = coincidence_points(pair, space)?.into_iter().map(|x| s[x]).collect();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// A coincidence point where `S` and `T` commute, if any.
pub fn is_owc(pair: &SelfMapPair, space: &FiniteMetricSpace) -> Result<Option<usize>, OracleError> {
    let (s, t) = tables(pair)?;
    Ok(coincidence_points(pair, space)?.into_iter().find(|&x| s[t[x]] == t[s[x]]))
}

/// `(compatible, noncompatible)` via the finite-space reduction.
pub fn is_compatible_finite(pair: &SelfMapPair, space: &FiniteMetricSpace) -> Result<(bool, bool), OracleError> {
    let (s, t) = tables(pair)?;
    let breaks = coincidence_points(pair, space)?.into_iter().any(|x| s[t[x]] != t[s[x]]);
    Ok((!breaks, breaks))
}

pub fn has_property_ea_finite(pair: &SelfMapPair, space: &FiniteMetricSpace) -> Result<bool, OracleError> {
    Ok(!coincidence_points(pair, space)?.is_empty())
}

pub fn common_fixed_points(pair: &SelfMapPair, space: &FiniteMetricSpace) -> Result<Vec<usize>, OracleError> {
    let (s, t) = tables(pair)?;
    Ok((0..space.len()).filter(|&x| s[x] == x && t[x] == x).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremId {
    /// Contraction ⟹ at most one point of coincidence.
    PocUniqueness,
    /// Inclusion + contraction ⟹ exactly one point of coincidence.
    UniquePoc,
    /// Inclusion + contraction + OWC ⟹ a unique common fixed point, equal to the POC.
    CommonFixedPoint,
    /// OWC + (E.A.) + contraction ⟹ a unique common fixed point.
    EaOwcFixedPoint,
    /// Noncompatible ⟹ (E.A.).
    NoncompatibleImpliesEa,
    /// Inclusion + contraction ⟹ the iteration reaches the POC from every start.
    IterationReachesPoc,
}

impl TheoremId {
    pub fn name(self) -> &'static str {
        match self {
            TheoremId::PocUniqueness => "poc_uniqueness",
            TheoremId::UniquePoc => "unique_poc",
            TheoremId::CommonFixedPoint => "common_fixed_point",
            TheoremId::EaOwcFixedPoint => "ea_owc_fixed_point",
            TheoremId::NoncompatibleImpliesEa => "noncompatible_implies_ea",
            TheoremId::IterationReachesPoc => "iteration_reaches_poc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Vacuous,
    Falsified,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Vacuous => "VACUOUS",
            Verdict::Falsified => "FALSIFIED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremVerdict {
    pub theorem: TheoremId,
    pub premises_held: bool,
    pub conclusion_held: bool,
    pub verdict: Verdict,
}

impl TheoremVerdict {
    fn new(theorem: TheoremId, premises_held: bool, conclusion_held: bool) -> Self {
        let verdict = match (premises_held, conclusion_held) {
            (false, _) => Verdict::Vacuous,
            (true, true) => Verdict::Pass,
            (true, false) => Verdict::Falsified,
        };
        Self { theorem, premises_held, conclusion_held, verdict }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub coincidence_points: Vec<usize>,
    pub pocs: Vec<usize>,
    pub owc: bool,
    pub owc_witness: Option<usize>,
    pub compatible: bool,
    pub noncompatible: bool,
    pub ea: bool,
    pub common_fixed_points: Vec<usize>,
    pub inclusion: bool,
    pub functions_certified: bool,
    pub contraction: CertificationReport,
    pub theorem_verdicts: Vec<TheoremVerdict>,
}

impl OracleReport {
    /// Functions certified and the inequality holds on every ordered pair.
    pub fn contraction_premise(&self) -> bool {
        self.functions_certified && self.contraction.certified
    }

    pub fn falsified(&self) -> impl Iterator<Item = &TheoremVerdict> {
        self.theorem_verdicts.iter().filter(|v| v.verdict == Verdict::Falsified)
    }

    pub fn verdict(&self, id: TheoremId) -> Option<&TheoremVerdict> {
        self.theorem_verdicts.iter().find(|v| v.theorem == id)
    }
}

/// Certifies `psi`, `alpha`, `beta` on `[0, diam]` with the default grid.
pub fn functions_certified(triple: &ControlTriple, space: &FiniteMetricSpace) -> Result<bool, OracleError> {
    let grid = uniform_grid(space.diameter(), DEFAULT_GRID_POINTS);
    let (psi, pair) = triple.certify(&grid)?;
    Ok(psi.pass && pair.pass)
}

/// Evaluates every premise and conclusion exactly and renders the verdicts.
/// Finite spaces are complete and every subset is closed, so those premises
/// hold automatically.
pub fn verify_theorems(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    space: &FiniteMetricSpace,
) -> Result<OracleReport, OracleError> {
    let (s, t) = tables(pair)?;
    let cps = coincidence_points(pair, space)?;
    let pocs = points_of_coincidence(pair, space)?;
    let owc_witness = is_owc(pair, space)?;
    let (compatible, noncompatible) = is_compatible_finite(pair, space)?;
    let ea = has_property_ea_finite(pair, space)?;
    let cfp = common_fixed_points(pair, space)?;
    let inclusion = s.iter().all(|v| t.contains(v));
    let functions = functions_certified(triple, space)?;
    let contraction = certify_finite(pair, triple, space)?;
    let owc = owc_witness.is_some();

    let contractive = functions && contraction.certified;
    let unique_cfp = cfp.len() == 1;
    let verdicts = vec![
        TheoremVerdict::new(TheoremId::PocUniqueness, contractive, pocs.len() <= 1),
        TheoremVerdict::new(TheoremId::UniquePoc, contractive && inclusion, pocs.len() == 1),
        TheoremVerdict::new(TheoremId::CommonFixedPoint, contractive && inclusion && owc, unique_cfp && cfp == pocs),
        TheoremVerdict::new(TheoremId::EaOwcFixedPoint, contractive && owc && ea, unique_cfp),
        TheoremVerdict::new(TheoremId::NoncompatibleImpliesEa, noncompatible, ea),
    ];
    Ok(OracleReport {
        coincidence_points: cps,
        pocs,
        owc,
        owc_witness,
        compatible,
        noncompatible,
        ea,
        common_fixed_points: cfp,
        inclusion,
        functions_certified: functions,
        contraction,
        theorem_verdicts: verdicts,
    })
}

/// Per-start-point audit of the iteration on a finite space.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationAudit {
    pub start: usize,
    pub limit: Option<usize>,
    pub steps: usize,
    pub gaps_nonincreasing: bool,
    pub strict_psi_descent: bool,
    pub within_step_bound: bool,
    pub consistent: bool,
}

impl IterationAudit {
    pub fn ok(&self, poc: Option<usize>) -> bool {
        self.limit.is_some()
            && self.limit == poc
            && self.gaps_nonincreasing
            && self.strict_psi_descent
            && self.within_step_bound
            && self.consistent
    }
}

/// Runs the iteration from every start point and checks the trace
/// invariants: `y_n = S x_n`, `T x_{n+1} = y_n`, non-increasing gaps, strict
/// descent of `psi(gap)` while the gap is positive, and a zero gap within
/// `4n` steps.
pub fn audit_iterations(
    pair: &SelfMapPair,
    triple: &ControlTriple,
    space: &FiniteMetricSpace,
) -> Result<Vec<IterationAudit>, OracleError> {
    let (s, t) = tables(pair)?;
    let n = space.len();
    let whole = Space::Finite(space.clone());
    let opts = IterateOptions { tol: 0.0, max_iter: 4 * n };
    (0..n)
        .map(|start| {
            let trace = iterate(pair, triple, &whole, &PointRef::Index(start), opts)?;
            let idx = |p: &PointRef| p.index().expect("finite trace");
            let consistent = trace.steps.iter().all(|st| s[idx(&st.x)] == idx(&st.y))
                && trace.steps.windows(2).all(|w| t[idx(&w[1].x)] == idx(&w[0].y));
            let gaps = trace.gaps();
            let psi: Vec<f64> = trace.steps.iter().filter_map(|st| st.psi_gap).collect();
            let strict = gaps.windows(2).zip(psi.windows(2)).all(|(g, p)| g[0] == 0.0 || p[1] < p[0]);
            Ok(IterationAudit {
                start,
                limit: trace.limit.as_ref().map(idx),
                steps: gaps.len(),
                gaps_nonincreasing: gaps.windows(2).all(|w| w[1] <= w[0]),
                strict_psi_descent: strict,
                within_step_bound: trace.converged() && gaps.len() <= 4 * n,
                consistent,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    Random,
    ConstantS,
    RejectionCertified,
}

impl std::str::FromStr for Strategy {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "random" => Ok(Strategy::Random),
            "constant-S" | "constant-s" => Ok(Strategy::ConstantS),
            "rejection-certified" => Ok(Strategy::RejectionCertified),
            _ => Err(format!("unknown strategy {s:?} (random, constant-S, rejection-certified)")),
        }
    }
}

impl std::fmt::Display for Strategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Strategy::Random => "random",
            Strategy::ConstantS => "constant-S",
            Strategy::RejectionCertified => "rejection-certified",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenerationError {
    #[error("need at least 2 points, got {0}")]
    TooSmall(usize),
    #[error("no certified instance after {0} attempts")]
    BudgetExhausted(usize),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedInstance {
    pub seed: u64,
    pub strategy: Strategy,
    pub space: FiniteMetricSpace,
    pub pair: SelfMapPair,
    pub triple: ControlTriple,
    pub attempts: usize,
}

fn random_triple<R: Rng>(rng: &mut R) -> ControlTriple {
    let psi = match rng.random_range(0..3) {
        0 => FunctionDescriptor::Identity,
        1 => FunctionDescriptor::Power(2.0),
        _ => FunctionDescriptor::Ratio,
    };
    // alpha + beta stays below 0.95
    let alpha = 0.9 * rng.random::<f64>();
    let beta = (0.95 - alpha) * rng.random::<f64>();
    ControlTriple::new(psi, FunctionDescriptor::Constant(alpha), FunctionDescriptor::Constant(beta))
}

fn random_table<R: Rng>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

fn random_instance<R: Rng>(rng: &mut R, n: usize) -> (FiniteMetricSpace, SelfMapPair, ControlTriple) {
    let space = FiniteMetricSpace::random_planar(rng, n);
    let pair = SelfMapPair::tables(random_table(rng, n), random_table(rng, n));
    (space, pair, random_triple(rng))
}

/// Deterministic instance from `seed`.
///
/// * `random`: planar point cloud, uniform map tables, constant `alpha`, `beta`.
/// * `constant-S`: `S ≡ a` with `a` drawn from `T(M)`; certified for every triple.
/// * `rejection-certified`: redraws `random` until the inequality certifies,
///   at most `budget` attempts.
pub fn generate_instance(
    seed: u64,
    n: usize,
    strategy: Strategy,
    budget: usize,
) -> Result<GeneratedInstance, GenerationError> {
    if n < 2 {
        return Err(GenerationError::TooSmall(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let done = |space, pair, triple, attempts| GeneratedInstance { seed, strategy, space, pair, triple, attempts };
    match strategy {
        Strategy::Random => {
            let (space, pair, triple) = random_instance(&mut rng, n);
            Ok(done(space, pair, triple, 1))
        }
        Strategy::ConstantS => {
            let space = FiniteMetricSpace::random_planar(&mut rng, n);
            let t = random_table(&mut rng, n);
            let a = t[rng.random_range(0..n)];
            let pair = SelfMapPair::new(SelfMap::constant_table(n, a), SelfMap::Table(t));
            Ok(done(space, pair, random_triple(&mut rng), 1))
        }
        Strategy::RejectionCertified => {
            for attempt in 1..=budget {
                let (space, pair, triple) = random_instance(&mut rng, n);
                if is_certified_finite(&pair, &triple, &space).map_err(OracleError::from)? {
                    return Ok(done(space, pair, triple, attempt));
                }
            }
            Err(GenerationError::BudgetExhausted(budget))
        }
    }
}

/// Instance sizes for a campaign: fixed, or cycled through an inclusive range by seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeRange {
    pub min: usize,
    pub max: usize,
}

impl SizeRange {
    pub fn fixed(n: usize) -> Self {
        Self { min: n, max: n }
    }

    pub fn for_seed(&self, seed: u64) -> usize {
        self.min + (seed % (self.max - self.min + 1) as u64) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzConfig {
    /// Half-open seed range `[start, end)`.
    pub seeds: (u64, u64),
    pub n: SizeRange,
    pub strategy: Strategy,
    pub rejection_budget: usize,
    /// Worker threads; `None` uses the rayon default.
    #[serde(skip)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseOutcome {
    pub seed: u64,
    pub n: usize,
    pub attempts: usize,
    pub report: OracleReport,
    pub iteration_verdict: TheoremVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Falsification {
    pub seed: u64,
    pub n: usize,
    pub theorem: TheoremId,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct VerdictCounts {
    pub pass: usize,
    pub vacuous: usize,
    pub falsified: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComboCount {
    pub owc: bool,
    pub ea: bool,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FuzzSummary {
    pub config: FuzzConfig,
    pub instances: usize,
    pub generation_failures: Vec<u64>,
    pub certified: usize,
    pub certified_with_inclusion: usize,
    pub verdict_counts: BTreeMap<&'static str, VerdictCounts>,
    pub owc_ea_combinations: Vec<ComboCount>,
    pub unreached_combinations: Vec<ComboCount>,
    pub noncompatible_without_ea: usize,
    pub falsifications: Vec<Falsification>,
}

/// Everything needed to reproduce one generated case.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzCase {
    pub instance: GeneratedInstance,
    pub outcome: CaseOutcome,
}

/// Oracle verdicts plus the iteration audit for one instance.
pub fn run_case(instance: &GeneratedInstance) -> Result<CaseOutcome, OracleError> {
    let report = verify_theorems(&instance.pair, &instance.triple, &instance.space)?;
    let premises = report.contraction_premise() && report.inclusion;
    let conclusion = if premises {
        let poc = report.pocs.first().copied();
        audit_iterations(&instance.pair, &instance.triple, &instance.space)?.iter().all(|a| a.ok(poc))
    } else {
        false
    };
    Ok(CaseOutcome {
        seed: instance.seed,
        n: instance.space.len(),
        attempts: instance.attempts,
        report,
        iteration_verdict: TheoremVerdict::new(TheoremId::IterationReachesPoc, premises, conclusion),
    })
}

/// Runs a seeded campaign. Cases are distributed over a rayon pool but
/// aggregated in seed order, so the summary does not depend on `workers`.
pub fn fuzz(config: &FuzzConfig) -> Result<(FuzzSummary, Vec<FuzzCase>), OracleError> {
    let (start, end) = config.seeds;
    let seeds: Vec<u64> = (start..end).collect();
    let work = || {
        seeds
            .par_iter()
            .map(|&seed| {
                let n = config.n.for_seed(seed);
                match generate_instance(seed, n, config.strategy, config.rejection_budget) {
                    Ok(instance) => run_case(&instance).map(|outcome| Some(FuzzCase { instance, outcome })),
                    Err(GenerationError::Oracle(e)) => Err(e),
                    Err(_) => Ok(None),
                }
            })
            .collect::<Vec<_>>()
    };
    let results = match config.workers {
        Some(w) => rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build().expect("thread pool").install(work),
        None => work(),
    };

    let mut summary = FuzzSummary {
        config: config.clone(),
        instances: 0,
        generation_failures: Vec::new(),
        certified: 0,
        certified_with_inclusion: 0,
        verdict_counts: BTreeMap::new(),
        owc_ea_combinations: Vec::new(),
        unreached_combinations: Vec::new(),
        noncompatible_without_ea: 0,
        falsifications: Vec::new(),
    };
    let mut combos = [[0usize; 2]; 2];
    let mut falsified_cases = Vec::new();
    for (seed, result) in seeds.iter().zip(results) {
        let Some(case) = result? else {
            summary.generation_failures.push(*seed);
            continue;
        };
        let out = &case.outcome;
        summary.instances += 1;
        if out.report.contraction_premise() {
            summary.certified += 1;
            if out.report.inclusion {
                summary.certified_with_inclusion += 1;
            }
        }
        combos[out.report.owc as usize][out.report.ea as usize] += 1;
        if out.report.noncompatible && !out.report.ea {
            summary.noncompatible_without_ea += 1;
        }
        let mut falsified = false;
        for v in out.report.theorem_verdicts.iter().chain(std::iter::once(&out.iteration_verdict)) {
            let c = summary.verdict_counts.entry(v.theorem.name()).or_default();
            match v.verdict {
                Verdict::Pass => c.pass += 1,
                Verdict::Vacuous => c.vacuous += 1,
                Verdict::Falsified => {
                    c.falsified += 1;
                    falsified = true;
                    summary.falsifications.push(Falsification { seed: *seed, n: out.n, theorem: v.theorem });
                }
            }
        }
        if falsified {
            falsified_cases.push(case);
        }
    }
    for owc in [false, true] {
        for ea in [false, true] {
            let count = combos[owc as usize][ea as usize];
            let row = ComboCount { owc, ea, count };
            if count == 0 {
                summary.unreached_combinations.push(row.clone());
            }
            summary.owc_ea_combinations.push(row);
        }
    }
    Ok((summary, falsified_cases))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line3() -> FiniteMetricSpace {
        FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap()
    }

    #[test]
    fn three_point_instance() {
        let space = line3();
        let pair = SelfMapPair::tables(vec![0, 0, 1], vec![0, 1, 2]);
        assert_eq!(coincidence_points(&pair, &space).unwrap(), vec![0]);
        assert_eq!(is_owc(&pair, &space).unwrap(), Some(0));
        assert!(has_property_ea_finite(&pair, &space).unwrap());
        let r = verify_theorems(&pair, &ControlTriple::constants(0.6, 0.3), &space).unwrap();
        assert_eq!(r.pocs, vec![0]);
        assert_eq!(r.common_fixed_points, vec![0]);
        for id in
            [TheoremId::PocUniqueness, TheoremId::UniquePoc, TheoremId::CommonFixedPoint, TheoremId::EaOwcFixedPoint]
        {
            assert_eq!(r.verdict(id).unwrap().verdict, Verdict::Pass, "{id:?}");
        }
        assert_eq!(r.verdict(TheoremId::NoncompatibleImpliesEa).unwrap().verdict, Verdict::Vacuous);
    }

    #[test]
    fn equal_maps() {
        let space = line3();
        let pair = SelfMapPair::tables(vec![1, 2, 0], vec![1, 2, 0]);
        assert_eq!(coincidence_points(&pair, &space).unwrap(), vec![0, 1, 2]);
        assert_eq!(is_compatible_finite(&pair, &space).unwrap(), (true, false));
        assert!(has_property_ea_finite(&pair, &space).unwrap());
        let id = SelfMapPair::tables(vec![0, 1, 2], vec![0, 1, 2]);
        assert!(is_owc(&id, &space).unwrap().is_some());
    }

    #[test]
    fn disjoint_graphs() {
        let space = line3();
        let pair = SelfMapPair::tables(vec![1, 2, 0], vec![2, 0, 1]);
        assert!(coincidence_points(&pair, &space).unwrap().is_empty());
        assert_eq!(is_owc(&pair, &space).unwrap(), None);
        assert_eq!(is_compatible_finite(&pair, &space).unwrap(), (true, false));
        assert!(!has_property_ea_finite(&pair, &space).unwrap());
    }

    #[test]
    fn noncommuting_coincidence() {
        // x = p0: S p0 = T p0 = p1, but S T p0 = S p1 = p2 and T S p0 = T p1 = p0.
        let space = line3();
        let pair = SelfMapPair::tables(vec![1, 2, 2], vec![1, 0, 0]);
        assert_eq!(coincidence_points(&pair, &space).unwrap(), vec![0]);
        assert_eq!(is_compatible_finite(&pair, &space).unwrap(), (false, true));
        assert_eq!(is_owc(&pair, &space).unwrap(), None);
        assert!(has_property_ea_finite(&pair, &space).unwrap());
    }

    #[test]
    fn constant_s_with_fixed_a() {
        let space = FiniteMetricSpace::from_planar(&[[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [2.0, 2.0]]).unwrap();
        // a = p2, T p2 = p2
        let pair = SelfMapPair::new(SelfMap::constant_table(4, 2), SelfMap::Table(vec![3, 0, 2, 1]));
        let r = verify_theorems(&pair, &ControlTriple::constants(0.4, 0.4), &space).unwrap();
        assert!(r.ea && r.owc);
        assert_eq!(r.common_fixed_points, vec![2]);
        assert_eq!(r.verdict(TheoremId::EaOwcFixedPoint).unwrap().verdict, Verdict::Pass);
    }

    #[test]
    fn two_pocs_are_vacuous_not_falsified() {
        let space = line3();
        let pair = SelfMapPair::tables(vec![0, 2, 2], vec![0, 2, 2]);
        let r = verify_theorems(&pair, &ControlTriple::constants(0.1, 0.1), &space).unwrap();
        assert_eq!(r.pocs, vec![0, 2]);
        assert!(!r.contraction.certified);
        assert_eq!(r.verdict(TheoremId::PocUniqueness).unwrap().verdict, Verdict::Vacuous);
        assert_eq!(r.falsified().count(), 0);
    }

    #[test]
    fn generation_is_deterministic() {
        for strategy in [Strategy::Random, Strategy::ConstantS, Strategy::RejectionCertified] {
            let a = generate_instance(42, 5, strategy, DEFAULT_REJECTION_BUDGET).unwrap();
            let b = generate_instance(42, 5, strategy, DEFAULT_REJECTION_BUDGET).unwrap();
            assert_eq!(a, b);
        }
        assert!(matches!(generate_instance(1, 1, Strategy::Random, 1), Err(GenerationError::TooSmall(1))));
    }

    #[test]
    fn constant_s_generator_certifies() {
        let g = generate_instance(42, 5, Strategy::ConstantS, 1).unwrap();
        let r = verify_theorems(&g.pair, &g.triple, &g.space).unwrap();
        assert!(r.contraction_premise() && r.inclusion);
        assert_eq!(r.pocs.len(), 1);
    }

    #[test]
    fn rejection_generator_certifies() {
        let g = generate_instance(3, 8, Strategy::RejectionCertified, DEFAULT_REJECTION_BUDGET).unwrap();
        assert!(certify_finite(&g.pair, &g.triple, &g.space).unwrap().certified);
    }

    #[test]
    fn tiny_budget_is_reported() {
        let r = (0..50).map(|s| generate_instance(s, 8, Strategy::RejectionCertified, 1)).find(|r| r.is_err());
        assert!(matches!(r, Some(Err(GenerationError::BudgetExhausted(1)))));
    }

    #[test]
    fn fuzz_summary_is_worker_independent() {
        let mut cfg = FuzzConfig {
            seeds: (0, 40),
            n: SizeRange { min: 2, max: 6 },
            strategy: Strategy::Random,
            rejection_budget: 10,
            workers: Some(1),
        };
        let (a, _) = fuzz(&cfg).unwrap();
        cfg.workers = Some(4);
        let (b, _) = fuzz(&cfg).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.instances, 40);
        assert!(a.falsifications.is_empty());
        // owc implies ea on finite spaces
        assert!(a.unreached_combinations.iter().any(|c| c.owc && !c.ea));
    }
}
