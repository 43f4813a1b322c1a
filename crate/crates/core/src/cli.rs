//! The `jungck` command line.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 malformed input, 3 missing
//! capability. `--format machine` prints one pretty-printed JSON document per
//! run; `--format text` prints the same verdicts for humans.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::contraction::{certify_finite, certify_sampled, CertificationReport, ContractionError, MapError};
use crate::control::{uniform_grid, ControlError, ControlTriple, FunctionCertificate, DEFAULT_GRID_POINTS};
use crate::demos;
use crate::instance::{parse_point_arg, InstanceError, InstanceFile, SpaceSpec};
use crate::metric::{validate_metric, AxiomViolation, MetricError, Space};
use crate::oracle::{
    fuzz, FuzzConfig, FuzzSummary, OracleError, OracleReport, SizeRange, Strategy, DEFAULT_REJECTION_BUDGET,
};
use crate::solver::{
    check_inclusion, extract_poc, iterate, InclusionReport, IterationTrace, PointOfCoincidence, SolverError,
};

/// Environment variable capping fuzz worker threads.
pub const WORKERS_ENV: &str = "JUNGCK_WORKERS";
const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Parser)]
#[command(name = "jungck", version, about = "Certify contraction pairs and solve for their common fixed points")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check metric axioms, map shapes and control-function certificates.
    Validate { instance: PathBuf },
    /// Check the contraction inequality (exhaustive on finite spaces, sampled otherwise).
    Certify {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the Jungck iteration and extract the point of coincidence.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long)]
        max_iter: Option<usize>,
        /// Start point: a label, a number, or comma-separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        x0: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Brute-force coincidence structure and theorem verdicts (finite spaces).
    Oracle { instance: PathBuf },
    /// Seeded random campaign over generated finite instances.
    Fuzz {
        /// Half-open seed range `A..B`.
        #[arg(long, default_value = "0..100", value_parser = parse_seeds)]
        seeds: (u64, u64),
        /// Instance size `N`, or inclusive range `A..B` cycled by seed.
        #[arg(long, default_value = "5", value_parser = parse_sizes)]
        n: SizeRange,
        #[arg(long, default_value = "random")]
        strategy: Strategy,
        /// Directory for reproduction files of falsified instances.
        #[arg(long, default_value = "jungck-falsifications")]
        out: PathBuf,
        #[arg(long, default_value_t = DEFAULT_REJECTION_BUDGET)]
        budget: usize,
    },
    /// Write the built-in example instances and diagnostics to a directory.
    Demo {
        #[arg(long)]
        out: PathBuf,
    },
}

fn parse_seeds(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s.split_once("..").ok_or("expected A..B")?;
    let (a, b) = (a.parse::<u64>().map_err(|e| e.to_string())?, b.parse::<u64>().map_err(|e| e.to_string())?);
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok((a, b))
}

fn parse_sizes(s: &str) -> Result<SizeRange, String> {
    let range = match s.split_once("..") {
        Some((a, b)) => {
            SizeRange { min: a.parse().map_err(|e| format!("{e}"))?, max: b.parse().map_err(|e| format!("{e}"))? }
        }
        None => SizeRange::fixed(s.parse().map_err(|e| format!("{e}"))?),
    };
    if range.min < 2 || range.min > range.max {
        return Err("sizes must satisfy 2 <= A <= B".into());
    }
    Ok(range)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitKind {
    Success = 0,
    Negative = 1,
    Input = 2,
    Capability = 3,
}

impl ExitKind {
    fn from_flag(ok: bool) -> Self {
        if ok {
            ExitKind::Success
        } else {
            ExitKind::Negative
        }
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    Capability(String),
}

impl CliError {
    fn exit(&self) -> ExitKind {
        match self {
            CliError::Input(_) => ExitKind::Input,
            CliError::Capability(_) => ExitKind::Capability,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Capability(m) => m,
        }
    }
}

macro_rules! input_errors {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Input(e.to_string())
            }
        }
    )*};
}
input_errors!(InstanceError, MetricError, ContractionError, ControlError, MapError);

impl From<SolverError> for CliError {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::Capability(_) => CliError::Capability(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Solver(s) => s.into(),
            OracleError::NotFinite => CliError::Capability(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

struct Outcome {
    exit: ExitKind,
    machine: String,
    text: String,
}

impl Outcome {
    fn new(exit: ExitKind, doc: &impl Serialize, text: String) -> Self {
        Self { exit, machine: serde_json::to_string_pretty(doc).expect("reports serialize") + "\n", text }
    }
}

/// Parses `args` (including the program name), runs the command and writes
/// its report to `out`. Errors go to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, workers: Option<usize>, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
                return ExitKind::Input as i32;
            }
            let _ = out.write_all(rendered.as_bytes());
            return code;
        }
    };
    let result = match &cli.command {
        Command::Validate { instance } => validate(instance),
        Command::Certify { instance, samples, seed } => certify(instance, *samples, *seed),
        Command::Solve { instance, tol, max_iter, x0, samples, seed } => {
            solve(instance, *tol, *max_iter, x0.as_deref(), *samples, *seed)
        }
        Command::Oracle { instance } => oracle(instance),
        Command::Fuzz { seeds, n, strategy, out, budget } => {
            let config = FuzzConfig { seeds: *seeds, n: *n, strategy: *strategy, rejection_budget: *budget, workers };
            run_fuzz(&config, out)
        }
        Command::Demo { out } => demo(out),
    };
    match result {
        Ok(o) => {
            let body = match cli.format {
                Format::Machine => o.machine,
                Format::Text => o.text,
            };
            let _ = out.write_all(body.as_bytes());
            o.exit as i32
        }
        Err(e) => {
            if cli.format == Format::Machine {
                #[derive(Serialize)]
                struct ErrorDoc<'a> {
                    error: &'a str,
                    exit_code: i32,
                    message: &'a str,
                }
                let kind = if e.exit() == ExitKind::Capability { "capability" } else { "input" };
                let doc = ErrorDoc { error: kind, exit_code: e.exit() as i32, message: e.message() };
                let _ = writeln!(out, "{}", serde_json::to_string_pretty(&doc).expect("serializes"));
            }
            let _ = writeln!(err, "error: {}", e.message());
            e.exit() as i32
        }
    }
}

/// Entry point for the binary: reads `JUNGCK_WORKERS` and uses real stdio.
pub fn main_with_env() -> i32 {
    let workers = std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()).filter(|&w| w > 0);
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), workers, &mut stdout.lock(), &mut stderr.lock())
}

fn pass_word(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn default_grid(space: &Space) -> Vec<f64> {
    uniform_grid(space.diameter(), DEFAULT_GRID_POINTS)
}

fn write_certificate(text: &mut String, cert: &FunctionCertificate) {
    let kind = if cert.analytic { "analytic" } else { "sampled" };
    let _ = writeln!(text, "  {}: {} ({kind}, {} grid points)", cert.subject, pass_word(cert.pass), cert.grid.points);
    for f in &cert.failures {
        let _ = writeln!(text, "    failure: {f}");
    }
    for c in &cert.caveats {
        let _ = writeln!(text, "    caveat: {c}");
    }
}

#[derive(Serialize)]
struct ValidateDoc {
    command: &'static str,
    metric_violations: Vec<AxiomViolation>,
    maps: Option<String>,
    psi: Option<FunctionCertificate>,
    control: Option<FunctionCertificate>,
    pass: bool,
}

fn validate(path: &Path) -> Result<Outcome, CliError> {
    let file = InstanceFile::load(path)?;
    let mut text = String::from("validate\n");
    let violations = match &file.space {
        SpaceSpec::Finite { matrix, .. } => validate_metric(matrix)?,
        _ => Vec::new(),
    };
    let _ = writeln!(text, "  metric axioms: {} ({} violation(s))", pass_word(violations.is_empty()), violations.len());
    for v in &violations {
        let _ = writeln!(text, "    {v}");
    }
    let mut doc = ValidateDoc {
        command: "validate",
        metric_violations: violations,
        maps: None,
        psi: None,
        control: None,
        pass: false,
    };
    if doc.metric_violations.is_empty() {
        let space = file.space()?;
        if file.maps.is_some() {
            file.pair(&space)?;
            doc.maps = Some("ok".into());
            let _ = writeln!(text, "  maps: ok");
        }
        if file.controls.is_some() {
            let (psi, control) = file.triple()?.certify(&default_grid(&space))?;
            write_certificate(&mut text, &psi);
            write_certificate(&mut text, &control);
            doc.psi = Some(psi);
            doc.control = Some(control);
        }
    }
    doc.pass = doc.metric_violations.is_empty()
        && doc.psi.as_ref().is_none_or(|c| c.pass)
        && doc.control.as_ref().is_none_or(|c| c.pass);
    let _ = writeln!(text, "verdict: {}", pass_word(doc.pass));
    Ok(Outcome::new(ExitKind::from_flag(doc.pass), &doc, text))
}

#[derive(Serialize)]
struct FunctionsDoc {
    psi: FunctionCertificate,
    control: FunctionCertificate,
}

#[derive(Serialize)]
struct CertifyDoc {
    command: &'static str,
    functions: FunctionsDoc,
    report: CertificationReport,
    pass: bool,
}

fn certify_space(
    space: &Space,
    file: &InstanceFile,
    triple: &ControlTriple,
    samples: usize,
    seed: u64,
) -> Result<(FunctionsDoc, CertificationReport), CliError> {
    let pair = file.pair(space)?;
    let (psi, control) = triple.certify(&default_grid(space))?;
    let report = match space {
        Space::Finite(f) => certify_finite(&pair, triple, f)?,
        Space::Euclidean(d) => certify_sampled(&pair, triple, d, samples, seed)?,
    };
    Ok((FunctionsDoc { psi, control }, report))
}

fn write_report(text: &mut String, space: &Space, r: &CertificationReport) {
    let fmt_opt = |v: Option<f64>| v.map_or("-".to_string(), |v| v.to_string());
    let _ = writeln!(
        text,
        "  inequality: {} ({}, {} ordered pairs, min slack {}, min diagonal slack {}, {} violation(s))",
        pass_word(r.certified),
        if r.mode == crate::contraction::CertificationMode::Exhaustive { "exhaustive" } else { "sampled" },
        r.pairs_checked,
        fmt_opt(r.min_slack),
        fmt_opt(r.min_diagonal_slack),
        r.violation_count
    );
    for v in &r.violations {
        let _ = writeln!(
            text,
            "    violation at ({}, {}): lhs {} > rhs {}",
            space.describe(&v.x),
            space.describe(&v.y),
            v.lhs,
            v.rhs
        );
    }
}

fn certify(path: &Path, samples: usize, seed: u64) -> Result<Outcome, CliError> {
    let file = InstanceFile::load(path)?;
    let space = file.space()?;
    let triple = file.triple()?;
    let (functions, report) = certify_space(&space, &file, &triple, samples, seed)?;
    let pass = report.certified && functions.psi.pass && functions.control.pass;
    let mut text = String::from("certify\n");
    write_certificate(&mut text, &functions.psi);
    write_certificate(&mut text, &functions.control);
    write_report(&mut text, &space, &report);
    let _ = writeln!(text, "verdict: {}", pass_word(pass));
    Ok(Outcome::new(ExitKind::from_flag(pass), &CertifyDoc { command: "certify", functions, report, pass }, text))
}

#[derive(Serialize)]
struct SolveDoc {
    command: &'static str,
    certified: bool,
    inclusion: InclusionReport,
    trace: IterationTrace,
    poc: Option<PointOfCoincidence>,
    poc_error: Option<String>,
    converged: bool,
}

fn solve(
    path: &Path,
    tol: Option<f64>,
    max_iter: Option<usize>,
    x0: Option<&str>,
    samples: usize,
    seed: u64,
) -> Result<Outcome, CliError> {
    let file = InstanceFile::load(path)?;
    let space = file.space()?;
    let pair = file.pair(&space)?;
    let triple = file.triple()?;
    let mut opts = file.iterate_options();
    if let Some(t) = tol {
        if t.is_nan() || t <= 0.0 {
            return Err(CliError::Input("--tol must be positive".into()));
        }
        opts.tol = t;
    }
    if let Some(m) = max_iter {
        opts.max_iter = m;
    }
    let x0 = match x0 {
        Some(s) => parse_point_arg(s, &space)?,
        None => file.x0(&space)?,
    };
    let (functions, report) = certify_space(&space, &file, &triple, samples, seed)?;
    let certified = report.certified && functions.psi.pass && functions.control.pass;
    let inclusion = check_inclusion(&pair, &space, samples.min(1000), seed)?;
    let mut trace = iterate(&pair, &triple, &space, &x0, opts)?;
    trace.certified = Some(certified);
    let (poc, poc_error) = if trace.converged() {
        match extract_poc(&trace, &pair, &space, opts.tol) {
            Ok(p) => (Some(p), None),
            Err(SolverError::Capability(m)) => return Err(CliError::Capability(m)),
            Err(e) => (None, Some(e.to_string())),
        }
    } else {
        (None, None)
    };

    let mut text = String::from("solve\n");
    let _ = writeln!(text, "  contraction certified: {}", if certified { "yes" } else { "no (uncertified run)" });
    let _ = writeln!(text, "  S(M) in T(M): {}", if inclusion.holds { "yes" } else { "no" });
    let _ = writeln!(text, "  {:>5}  {:>24}  {:>24}  {:>24}", "n", "x_n", "y_n", "gap");
    for s in &trace.steps {
        let gap = s.gap.map_or("-".to_string(), |g| g.to_string());
        let _ = writeln!(text, "  {:>5}  {:>24}  {:>24}  {:>24}", s.n, space.describe(&s.x), space.describe(&s.y), gap);
    }
    let _ = writeln!(text, "  status: {}", trace.status);
    if let Some(f) = &trace.failure {
        let _ = writeln!(text, "  failure: {f}");
    }
    if let Some(p) = &poc {
        let _ = writeln!(
            text,
            "  coincidence point u = {}, point of coincidence z = {}",
            space.describe(&p.u),
            space.describe(&p.z)
        );
    }
    if let Some(e) = &poc_error {
        let _ = writeln!(text, "  {e}");
    }
    let converged = trace.converged();
    let _ = writeln!(text, "verdict: {}", if converged { "CONVERGED" } else { "NOT CONVERGED" });
    let doc = SolveDoc { command: "solve", certified, inclusion, trace, poc, poc_error, converged };
    Ok(Outcome::new(ExitKind::from_flag(converged), &doc, text))
}

#[derive(Serialize)]
struct OracleDoc {
    command: &'static str,
    labels: Vec<String>,
    report: OracleReport,
    falsified: bool,
}

fn oracle(path: &Path) -> Result<Outcome, CliError> {
    let file = InstanceFile::load(path)?;
    let space = file.space()?;
    let Space::Finite(finite) = &space else {
        return Err(CliError::Capability("the oracle decides finite spaces only".into()));
    };
    let pair = file.pair(&space)?;
    let triple = file.triple()?;
    let report = crate::oracle::verify_theorems(&pair, &triple, finite)?;
    let falsified = report.falsified().next().is_some();

    let names = |v: &[usize]| v.iter().map(|&i| finite.label(i)).collect::<Vec<_>>().join(", ");
    let mut text = String::from("oracle\n");
    let _ = writeln!(text, "  coincidence points: {{{}}}", names(&report.coincidence_points));
    let _ = writeln!(text, "  points of coincidence: {{{}}}", names(&report.pocs));
    let _ = writeln!(text, "  common fixed points: {{{}}}", names(&report.common_fixed_points));
    let _ = writeln!(
        text,
        "  owc: {}  compatible: {}  noncompatible: {}  (E.A.): {}  S(M) in T(M): {}",
        report.owc, report.compatible, report.noncompatible, report.ea, report.inclusion
    );
    let _ = writeln!(
        text,
        "  control functions certified: {}  inequality certified: {}",
        report.functions_certified, report.contraction.certified
    );
    for v in &report.theorem_verdicts {
        let _ = writeln!(text, "  {:<26} {}", v.theorem.name(), v.verdict);
    }
    let _ = writeln!(text, "verdict: {}", if falsified { "FALSIFIED" } else { "NO FALSIFICATION" });
    let doc = OracleDoc { command: "oracle", labels: finite.labels().to_vec(), report, falsified };
    Ok(Outcome::new(ExitKind::from_flag(!falsified), &doc, text))
}

#[derive(Serialize)]
struct FuzzDoc {
    command: &'static str,
    summary: FuzzSummary,
    reproductions: Vec<String>,
}

fn run_fuzz(config: &FuzzConfig, out_dir: &Path) -> Result<Outcome, CliError> {
    let (summary, falsified) = fuzz(config)?;
    let mut reproductions = Vec::new();
    if !falsified.is_empty() {
        std::fs::create_dir_all(out_dir).map_err(|e| CliError::Input(format!("{}: {e}", out_dir.display())))?;
        for case in &falsified {
            let g = &case.instance;
            let path = out_dir.join(format!("falsification-{}-seed{}.json", g.strategy, g.seed));
            let body = InstanceFile::finite(&g.space, &g.pair, &g.triple).to_json();
            std::fs::write(&path, body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
            reproductions.push(path.display().to_string());
        }
    }

    let mut text = String::from("fuzz\n");
    let (a, b) = config.seeds;
    let _ = writeln!(text, "  seeds {a}..{b}, n {}..={}, strategy {}", config.n.min, config.n.max, config.strategy);
    let _ = writeln!(
        text,
        "  instances {}  generation failures {}  certified {}  certified with inclusion {}",
        summary.instances,
        summary.generation_failures.len(),
        summary.certified,
        summary.certified_with_inclusion
    );
    let _ = writeln!(text, "  {:<26} {:>7} {:>7} {:>9}", "check", "pass", "vacuous", "FALSIFIED");
    for (name, c) in &summary.verdict_counts {
        let _ = writeln!(text, "  {:<26} {:>7} {:>7} {:>9}", name, c.pass, c.vacuous, c.falsified);
    }
    for c in &summary.owc_ea_combinations {
        let _ = writeln!(text, "  owc={:<5} ea={:<5} instances {}", c.owc, c.ea, c.count);
    }
    for c in &summary.unreached_combinations {
        let _ = writeln!(text, "  not reached: owc={} ea={}", c.owc, c.ea);
    }
    let _ = writeln!(text, "  noncompatible without (E.A.): {}", summary.noncompatible_without_ea);
    for f in &summary.falsifications {
        let _ = writeln!(text, "  FALSIFIED {} at seed {} (n = {})", f.theorem.name(), f.seed, f.n);
    }
    for r in &reproductions {
        let _ = writeln!(text, "  reproduction: {r}");
    }
    let ok = summary.falsifications.is_empty();
    let _ = writeln!(text, "verdict: {}", if ok { "NO FALSIFICATION" } else { "FALSIFIED" });
    Ok(Outcome::new(ExitKind::from_flag(ok), &FuzzDoc { command: "fuzz", summary, reproductions }, text))
}

#[derive(Serialize)]
struct DemoDoc {
    command: &'static str,
    written: Vec<String>,
}

fn demo(out_dir: &Path) -> Result<Outcome, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::Input(format!("{}: {e}", out_dir.display())))?;
    let harmonic = serde_json::to_string_pretty(&demos::harmonic_diagnostics()).expect("serializes") + "\n";
    let files = [
        ("three_point.json", demos::three_point().to_json()),
        ("constant_s.json", demos::constant_s().to_json()),
        ("swap_violation.json", demos::swap_violation().to_json()),
        ("continuous_halving.json", demos::continuous_halving().to_json()),
        ("harmonic_crossings.json", harmonic),
    ];
    let mut written = Vec::new();
    let mut text = String::from("demo\n");
    for (name, body) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, body).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let _ = writeln!(text, "  wrote {}", path.display());
        written.push(path.display().to_string());
    }
    Ok(Outcome::new(ExitKind::Success, &DemoDoc { command: "demo", written }, text))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_and_size_arguments() {
        assert_eq!(parse_seeds("3..10"), Ok((3, 10)));
        assert!(parse_seeds("10..3").is_err());
        assert!(parse_seeds("7").is_err());
        assert_eq!(parse_sizes("5"), Ok(SizeRange::fixed(5)));
        assert_eq!(parse_sizes("2..8"), Ok(SizeRange { min: 2, max: 8 }));
        assert!(parse_sizes("1").is_err());
    }

    #[test]
    fn usage_errors_exit_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["jungck", "frobnicate"], None, &mut out, &mut err), 2);
        assert_eq!(run(["jungck", "fuzz", "--seeds", "x"], None, &mut out, &mut err), 2);
    }

    #[test]
    fn missing_file_exits_2() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run(["jungck", "certify", "/nonexistent/instance.json"], None, &mut out, &mut err), 2);
        assert!(String::from_utf8(err).unwrap().contains("cannot read"));
    }
}
