//! Altering distance functions `psi` and the control functions `alpha`, `beta`.
//!
//! Arbitrary expressions are checked on sampled grids. The limsup conditions
//!
//! ```text
//! limsup_{s -> 0+} beta(s) < 1
//! limsup_{s -> t+} alpha(s) / (1 - beta(s)) < 1   for every t > 0
//! ```
//!
//! are asymptotic, so the sampled certificate only estimates them by probing
//! at geometrically shrinking right offsets `delta, delta/2, delta/4, ...`.
//! The estimate is the maximum over the probes, an upper bound for the sup on
//! `(t, t + delta]`. Built-in families are certified analytically instead.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::expr::{EvalError, Expr, ParseError};

pub const DEFAULT_DELTA: f64 = 1e-3;
pub const DEFAULT_PROBES: usize = 12;
pub const DEFAULT_GRID_POINTS: usize = 256;
/// Minimum slack `1 - estimate` a limsup estimate must keep.
pub const REQUIRED_MARGIN: f64 = 1e-9;

/// A real function on `[0, inf)`: a built-in family or a parsed expression in `t`.
#[derive(Debug, Clone, PartialEq)]
pub enum FunctionDescriptor {
    Identity,
    /// `t^p`, `p >= 1`.
    Power(f64),
    /// `t / (1 + t)`.
    Ratio,
    Constant(f64),
    Expr(Expr),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DescriptorError {
    #[error("unknown function family {0:?}")]
    UnknownFamily(String),
    #[error("family {family:?} takes {expected} parameter(s), got {got}")]
    ParamCount { family: String, expected: usize, got: usize },
    #[error("invalid parameter for {family:?}: {message}")]
    BadParam { family: String, message: String },
    #[error("descriptor needs exactly one of `family` or `expr`")]
    Shape,
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Wire form: `{"family": "...", "params": [...]}` or `{"expr": "..."}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescriptorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
}

impl FunctionDescriptor {
    pub fn from_spec(spec: &DescriptorSpec) -> Result<Self, DescriptorError> {
        match (&spec.family, &spec.expr) {
            (Some(family), None) => {
                let params = spec.params.as_deref().unwrap_or(&[]);
                let want = |n: usize| {
                    if params.len() == n {
                        Ok(())
                    } else {
                        Err(DescriptorError::ParamCount { family: family.clone(), expected: n, got: params.len() })
                    }
                };
                let bad = |message: &str| DescriptorError::BadParam { family: family.clone(), message: message.into() };
                match family.as_str() {
                    "identity" => want(0).map(|_| FunctionDescriptor::Identity),
                    "ratio" => want(0).map(|_| FunctionDescriptor::Ratio),
                    "power" => {
                        want(1)?;
                        if !(params[0].is_finite() && params[0] >= 1.0) {
                            return Err(bad("exponent must be a finite number >= 1"));
                        }
                        Ok(FunctionDescriptor::Power(params[0]))
                    }
                    "constant" => {
                        want(1)?;
                        if !params[0].is_finite() {
                            return Err(bad("value must be finite"));
                        }
                        Ok(FunctionDescriptor::Constant(params[0]))
                    }
                    other => Err(DescriptorError::UnknownFamily(other.to_string())),
                }
            }
            (None, Some(text)) => Ok(FunctionDescriptor::Expr(Expr::control(text)?)),
            _ => Err(DescriptorError::Shape),
        }
    }

    pub fn to_spec(&self) -> DescriptorSpec {
        let family = |name: &str, params: Vec<f64>| DescriptorSpec {
            family: Some(name.to_string()),
            params: Some(params),
            expr: None,
        };
        match self {
            FunctionDescriptor::Identity => family("identity", vec![]),
            FunctionDescriptor::Ratio => family("ratio", vec![]),
            FunctionDescriptor::Power(p) => family("power", vec![*p]),
            FunctionDescriptor::Constant(c) => family("constant", vec![*c]),
            FunctionDescriptor::Expr(e) => DescriptorSpec { family: None, params: None, expr: Some(e.to_string()) },
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64, EvalError> {
        match self {
            FunctionDescriptor::Identity => Ok(t),
            FunctionDescriptor::Power(p) => Ok(t.powf(*p)),
            FunctionDescriptor::Ratio => Ok(t / (1.0 + t)),
            FunctionDescriptor::Constant(c) => Ok(*c),
            FunctionDescriptor::Expr(e) => e.eval(t),
        }
    }

    pub fn is_builtin(&self) -> bool {
        !matches!(self, FunctionDescriptor::Expr(_))
    }

    pub fn describe(&self) -> String {
        match self {
            FunctionDescriptor::Identity => "t".into(),
            FunctionDescriptor::Power(p) => format!("t^{p}"),
            FunctionDescriptor::Ratio => "t/(1+t)".into(),
            FunctionDescriptor::Constant(c) => format!("{c}"),
            FunctionDescriptor::Expr(e) => e.to_string(),
        }
    }
}

/// The control functions of a contraction condition.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlTriple {
    pub psi: FunctionDescriptor,
    pub alpha: FunctionDescriptor,
    pub beta: FunctionDescriptor,
}

impl ControlTriple {
    pub fn new(psi: FunctionDescriptor, alpha: FunctionDescriptor, beta: FunctionDescriptor) -> Self {
        Self { psi, alpha, beta }
    }

    /// `psi = id`, constant `alpha` and `beta`.
    pub fn constants(alpha: f64, beta: f64) -> Self {
        Self::new(FunctionDescriptor::Identity, FunctionDescriptor::Constant(alpha), FunctionDescriptor::Constant(beta))
    }

    /// Certifies `psi` and the pair `(alpha, beta)` on one grid with default probing.
    pub fn certify(&self, grid: &[f64]) -> Result<(FunctionCertificate, FunctionCertificate), ControlError> {
        Ok((
            check_altering_distance(&self.psi, grid)?,
            check_control_pair(&self.alpha, &self.beta, grid, DEFAULT_DELTA, DEFAULT_PROBES)?,
        ))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ControlError {
    #[error("grid must be nonempty, start at 0 and be strictly increasing")]
    BadGrid,
    #[error("delta must be positive and probes >= 2")]
    BadProbing,
    #[error("{function} failed at t = {t}: {source}")]
    Eval {
        function: &'static str,
        t: f64,
        #[source]
        source: EvalError,
    },
}

/// `points` evenly spaced values on `[0, end]`.
pub fn uniform_grid(end: f64, points: usize) -> Vec<f64> {
    let points = points.max(2);
    let end = if end > 0.0 { end } else { 1.0 };
    (0..points).map(|i| end * i as f64 / (points - 1) as f64).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSummary {
    pub points: usize,
    pub min: f64,
    pub max: f64,
}

/// One named quantity a certificate checks.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Margin {
    pub name: String,
    pub value: f64,
    /// `value` required strictly above (`strict`) or at least (`!strict`) this.
    pub threshold: f64,
    pub strict: bool,
}

impl Margin {
    fn new(name: &str, value: f64, threshold: f64, strict: bool) -> Self {
        Self { name: name.to_string(), value, threshold, strict }
    }

    pub fn holds(&self) -> bool {
        if self.strict {
            self.value > self.threshold
        } else {
            self.value >= self.threshold
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionCertificate {
    pub subject: String,
    pub grid: GridSummary,
    pub margins: Vec<Margin>,
    pub failures: Vec<String>,
    pub analytic: bool,
    pub caveats: Vec<String>,
    pub pass: bool,
}

fn check_grid(grid: &[f64]) -> Result<GridSummary, ControlError> {
    let ok = !grid.is_empty()
        && grid[0] == 0.0
        && grid.iter().all(|t| t.is_finite())
        && grid.windows(2).all(|w| w[0] < w[1]);
    if !ok {
        return Err(ControlError::BadGrid);
    }
    Ok(GridSummary { points: grid.len(), min: grid[0], max: grid[grid.len() - 1] })
}

fn eval_at(f: &FunctionDescriptor, name: &'static str, t: f64) -> Result<f64, ControlError> {
    f.eval(t).map_err(|source| ControlError::Eval { function: name, t, source })
}

/// Checks that `psi` is an altering distance function on `grid`.
///
/// `psi(0) = 0` is checked exactly, positivity and monotonicity pointwise.
/// Continuity is only estimated (largest difference quotient between
/// neighbouring samples) and recorded as a caveat.
pub fn check_altering_distance(psi: &FunctionDescriptor, grid: &[f64]) -> Result<FunctionCertificate, ControlError> {
    let summary = check_grid(grid)?;
    let values = grid.iter().map(|&t| eval_at(psi, "psi", t)).collect::<Result<Vec<_>, _>>()?;
    let mut failures = Vec::new();
    let mut caveats = Vec::new();

    if values[0] != 0.0 {
        failures.push(format!("psi(0) = {} != 0", values[0]));
    }
    let min_positive = values[1..].iter().copied().fold(f64::INFINITY, f64::min);
    let mut min_step = f64::INFINITY;
    let mut max_slope: f64 = 0.0;
    for (w, t) in values.windows(2).zip(grid.windows(2)) {
        let step = w[1] - w[0];
        min_step = min_step.min(step);
        max_slope = max_slope.max(step.abs() / (t[1] - t[0]));
        if step < 0.0 {
            failures.push(format!("psi decreases on [{}, {}] by {}", t[0], t[1], -step));
            break;
        }
    }

    let mut margins = vec![Margin::new("psi_at_zero", 0.0 - values[0].abs(), 0.0, false)];
    if grid.len() > 1 {
        margins.push(Margin::new("min_psi_positive", min_positive, 0.0, true));
        margins.push(Margin::new("min_monotone_step", min_step, 0.0, false));
        if min_positive <= 0.0 {
            failures.push(format!("psi vanishes at a positive grid point (min {min_positive})"));
        }
    }

    let analytic = psi.is_builtin();
    let pass = match psi {
        FunctionDescriptor::Identity | FunctionDescriptor::Power(_) | FunctionDescriptor::Ratio => true,
        FunctionDescriptor::Constant(_) => false,
        FunctionDescriptor::Expr(_) => failures.is_empty() && margins.iter().all(Margin::holds),
    };
    if analytic {
        if !pass {
            failures.push("a constant is never an altering distance function".into());
        }
    } else {
        caveats.push(format!(
            "continuity not proven: largest difference quotient between neighbouring samples is {max_slope}"
        ));
    }
    Ok(FunctionCertificate {
        subject: format!("psi = {}", psi.describe()),
        grid: summary,
        margins,
        failures,
        analytic,
        caveats,
        pass,
    })
}

/// Checks `alpha`, `beta` pointwise on `grid` and estimates the two limsup
/// conditions by one-sided probing.
pub fn check_control_pair(
    alpha: &FunctionDescriptor,
    beta: &FunctionDescriptor,
    grid: &[f64],
    delta: f64,
    probes: usize,
) -> Result<FunctionCertificate, ControlError> {
    let summary = check_grid(grid)?;
    if !(delta > 0.0 && delta.is_finite()) || probes < 2 {
        return Err(ControlError::BadProbing);
    }
    let mut failures = Vec::new();
    let mut min_sum_margin = f64::INFINITY;
    let mut min_alpha = f64::INFINITY;
    let mut min_beta = f64::INFINITY;
    let mut alpha_gap = f64::INFINITY;
    let mut beta_gap = f64::INFINITY;
    for &t in grid {
        let (a, b) = (eval_at(alpha, "alpha", t)?, eval_at(beta, "beta", t)?);
        min_alpha = min_alpha.min(a);
        min_beta = min_beta.min(b);
        alpha_gap = alpha_gap.min(1.0 - a);
        beta_gap = beta_gap.min(1.0 - b);
        let margin = 1.0 - (a + b);
        if margin <= 0.0 && min_sum_margin > 0.0 {
            failures.push(format!("alpha(t) + beta(t) = {} >= 1 at t = {t}", a + b));
        }
        min_sum_margin = min_sum_margin.min(margin);
    }

    // Right limsup estimates: beta at 0+, alpha/(1-beta) at every t+.
    let offsets: Vec<f64> = (0..probes).map(|j| delta / (1u64 << j.min(62)) as f64).collect();
    let mut beta_at_zero = f64::NEG_INFINITY;
    let mut worst_ratio = f64::NEG_INFINITY;
    let mut denominator_vanishes = None;
    for &t in grid {
        for &h in &offsets {
            let s = t + h;
            let (a, b) = (eval_at(alpha, "alpha", s)?, eval_at(beta, "beta", s)?);
            if t == 0.0 {
                beta_at_zero = beta_at_zero.max(b);
            }
            if b >= 1.0 {
                denominator_vanishes.get_or_insert(s);
                continue;
            }
            worst_ratio = worst_ratio.max(a / (1.0 - b));
        }
    }
    if let Some(s) = denominator_vanishes {
        failures.push(format!("denominator vanishes: beta(s) >= 1 at probe s = {s}"));
    }

    let margins = vec![
        Margin::new("min_alpha", min_alpha, 0.0, false),
        Margin::new("min_beta", min_beta, 0.0, false),
        Margin::new("min_one_minus_alpha", alpha_gap, 0.0, true),
        Margin::new("min_one_minus_beta", beta_gap, 0.0, true),
        Margin::new("min_one_minus_alpha_plus_beta", min_sum_margin, 0.0, true),
        Margin::new("limsup_beta_at_zero_margin", 1.0 - beta_at_zero, REQUIRED_MARGIN, false),
        Margin::new("limsup_ratio_margin", 1.0 - worst_ratio, REQUIRED_MARGIN, false),
    ];
    for m in &margins {
        if !m.holds() && !m.name.starts_with("min_one_minus_alpha_plus") {
            failures.push(format!("{} = {} misses threshold {}", m.name, m.value, m.threshold));
        }
    }

    let analytic = matches!((alpha, beta), (FunctionDescriptor::Constant(_), FunctionDescriptor::Constant(_)));
    let pass = match (alpha, beta) {
        (FunctionDescriptor::Constant(a), FunctionDescriptor::Constant(b)) => {
            (0.0..1.0).contains(a) && (0.0..1.0).contains(b) && a + b < 1.0
        }
        _ => failures.is_empty() && margins.iter().all(Margin::holds),
    };
    let mut caveats = Vec::new();
    if !analytic {
        caveats.push(format!(
            "limsup conditions estimated from {probes} right probes within delta = {delta}; not a proof"
        ));
    }
    Ok(FunctionCertificate {
        subject: format!("alpha = {}, beta = {}", alpha.describe(), beta.describe()),
        grid: summary,
        margins,
        failures,
        analytic,
        caveats,
        pass,
    })
}
