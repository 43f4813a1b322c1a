//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits non-zero when any criterion fails.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use jungck::contraction::certify_sampled;
use jungck::demos;
use jungck::metric::{PointRef, Space};
use jungck::oracle::{
    audit_iterations, fuzz, generate_instance, run_case, verify_theorems, FuzzCase, FuzzConfig, GenerationError,
    SizeRange, Strategy,
};
use jungck::solver::{extract_poc, harmonic_partial_sums, iterate, IterateOptions};

const SEEDS_PER_STRATEGY: u64 = 600;
const REJECTION_BUDGET: usize = 200_000;

struct Criterion {
    id: usize,
    name: &'static str,
    pass: bool,
    detail: String,
}

fn population() -> (Vec<FuzzCase>, Duration, String) {
    let start = Instant::now();
    let sizes = SizeRange { min: 2, max: 8 };
    let mut cases = Vec::new();
    let (mut draws, mut accepted, mut budget_failures) = (0, 0, 0);
    for strategy in [Strategy::ConstantS, Strategy::RejectionCertified] {
        for seed in 0..SEEDS_PER_STRATEGY {
            let instance = match generate_instance(seed, sizes.for_seed(seed), strategy, REJECTION_BUDGET) {
                Ok(instance) => instance,
                Err(GenerationError::BudgetExhausted(_)) => {
                    budget_failures += 1;
                    continue;
                }
                Err(e) => panic!("seed {seed}: {e}"),
            };
            if strategy == Strategy::RejectionCertified {
                draws += instance.attempts;
                accepted += 1;
            }
            let outcome = run_case(&instance).unwrap();
            cases.push(FuzzCase { instance, outcome });
        }
    }
    let note = format!(
        "rejection acceptance rate {:.4} ({accepted} instances / {draws} draws), {budget_failures} budget failures",
        accepted as f64 / draws.max(1) as f64
    );
    (cases, start.elapsed(), note)
}

fn criterion_1(cases: &[FuzzCase], elapsed: Duration, note: &str) -> Criterion {
    let certified: Vec<_> = cases.iter().filter(|c| c.outcome.report.contraction.certified).collect();
    let bad = certified.iter().filter(|c| c.outcome.report.pocs.len() > 1).count();
    let falsified = cases.iter().filter(|c| c.outcome.report.falsified().next().is_some()).count();
    Criterion {
        id: 1,
        name: "point-of-coincidence uniqueness over certified instances",
        pass: certified.len() >= 1000 && bad == 0 && falsified == 0 && elapsed < Duration::from_secs(60),
        detail: format!(
            "{} certified, {} with >1 POC, {} falsified, generated+checked in {:.1}s single-threaded; {note}",
            certified.len(),
            bad,
            falsified,
            elapsed.as_secs_f64()
        ),
    }
}

fn certified_with_inclusion(cases: &[FuzzCase]) -> Vec<&FuzzCase> {
    cases.iter().filter(|c| c.outcome.report.contraction_premise() && c.outcome.report.inclusion).collect()
}

fn criterion_2(cases: &[FuzzCase]) -> Criterion {
    let subset = certified_with_inclusion(cases);
    let mut runs = 0;
    let mut failures = 0;
    for c in &subset {
        let g = &c.instance;
        for audit in audit_iterations(&g.pair, &g.triple, &g.space).unwrap() {
            runs += 1;
            if !(audit.gaps_nonincreasing && audit.strict_psi_descent && audit.within_step_bound && audit.consistent) {
                failures += 1;
            }
        }
    }
    Criterion {
        id: 2,
        name: "gap monotonicity, strict psi-descent, zero gap within 4n steps",
        pass: !subset.is_empty() && failures == 0,
        detail: format!("{} instances, {runs} start points, {failures} failures", subset.len()),
    }
}

fn criterion_3(cases: &[FuzzCase]) -> Criterion {
    let subset = certified_with_inclusion(cases);
    let (mut runs, mut mismatches, mut owc, mut owc_bad) = (0, 0, 0, 0);
    for c in &subset {
        let g = &c.instance;
        let report = &c.outcome.report;
        let space = Space::Finite(g.space.clone());
        let poc = report.pocs.as_slice();
        for start in 0..g.space.len() {
            runs += 1;
            let trace =
                iterate(&g.pair, &g.triple, &space, &PointRef::Index(start), IterateOptions::default()).unwrap();
            let z = trace
                .converged()
                .then(|| extract_poc(&trace, &g.pair, &space, 0.0).ok())
                .flatten()
                .and_then(|p| p.z.index());
            if poc.len() != 1 || z != Some(poc[0]) {
                mismatches += 1;
            }
            if report.owc {
                if start == 0 {
                    owc += 1;
                }
                if z.is_none() || report.common_fixed_points != vec![z.unwrap()] {
                    owc_bad += 1;
                }
            }
        }
    }
    Criterion {
        id: 3,
        name: "solver limit equals the unique POC; OWC instances have it as sole common fixed point",
        pass: !subset.is_empty() && mismatches == 0 && owc_bad == 0,
        detail: format!(
            "{} instances, {runs} runs, {mismatches} mismatches, {owc} OWC instances, {owc_bad} OWC failures",
            subset.len()
        ),
    }
}

fn criterion_4() -> Criterion {
    let file = demos::constant_s();
    let space = file.space().unwrap();
    let finite = space.as_finite().unwrap();
    let report = verify_theorems(&file.pair(&space).unwrap(), &file.triple().unwrap(), finite).unwrap();
    let a = finite.index_of("a").unwrap();
    Criterion {
        id: 4,
        name: "constant-S instance with Ta = a: E.A., OWC, unique common fixed point a",
        pass: report.ea && report.owc && report.common_fixed_points == vec![a] && report.falsified().next().is_none(),
        detail: format!("ea={} owc={} cfp={:?}", report.ea, report.owc, report.common_fixed_points),
    }
}

fn criterion_5() -> Criterion {
    let start = Instant::now();
    let file = demos::continuous_halving();
    let space = file.space().unwrap();
    let pair = file.pair(&space).unwrap();
    let triple = file.triple().unwrap();
    let report = certify_sampled(&pair, &triple, space.as_euclidean().unwrap(), 10_000, 0).unwrap();
    let trace =
        iterate(&pair, &triple, &space, &PointRef::scalar(1.0), IterateOptions { tol: 1e-10, max_iter: 10_000 })
            .unwrap();
    let z = trace.limit.as_ref().and_then(|p| p.coords()).map(|c| c[0]);
    let closed_form = trace.steps.iter().all(|s| s.y.coords().unwrap()[0] == 0.25 * 0.5f64.powi(s.n as i32));
    let elapsed = start.elapsed();
    let min_slack = report.min_slack.unwrap_or(f64::NEG_INFINITY);
    let steps = trace.steps.len();
    Criterion {
        id: 5,
        name: "continuous x/4, x/2 instance: sampled certificate and geometric convergence",
        pass: report.certified
            && min_slack > 0.0
            && trace.converged()
            && steps <= 40
            && z.is_some_and(|z| z.abs() <= 1e-10)
            && closed_form
            && elapsed < Duration::from_secs(1),
        detail: format!(
            "min slack over x != y {min_slack:.3e} ({} pairs), {steps} rows, z = {:.3e}, closed form matched: {closed_form}, {:.3}s",
            report.pairs_checked,
            z.unwrap_or(f64::NAN),
            elapsed.as_secs_f64()
        ),
    }
}

fn criterion_6() -> Criterion {
    let eps = 0.5;
    let diag = demos::harmonic_diagnostics();
    let sums = harmonic_partial_sums(1000);
    let mut bad = 0;
    for k in 0..=100 {
        let Some(r) = diag.row(k) else {
            bad += 1;
            continue;
        };
        let d = |i: usize, j: usize| (sums[i] - sums[j]).abs();
        if !(r.n > k && r.m > r.n && d(r.m, r.n) >= eps && d(r.m - 1, r.n) < eps) {
            bad += 1;
        }
        // minimality of n and m
        let crossing = |n: usize, m: usize| d(m, n) >= eps && d(m - 1, n) < eps;
        if (k + 1..r.n).any(|n| (n + 1..sums.len()).any(|m| crossing(n, m))) || (r.n + 1..r.m).any(|m| crossing(r.n, m))
        {
            bad += 1;
        }
    }
    let last = diag.row(100);
    let close = last.is_some_and(|r| [r.d_m_n, r.d_m1_n, r.d_m1_n1].iter().all(|v| (v - eps).abs() <= 0.05));
    Criterion {
        id: 6,
        name: "crossing indices on harmonic partial sums",
        pass: diag.missing.is_empty() && bad == 0 && close,
        detail: match last {
            Some(r) => format!(
                "{} rows, {bad} re-verification failures; k=100: n={} m={} distances {:.4} {:.4} {:.4}",
                diag.rows.len(),
                r.n,
                r.m,
                r.d_m_n,
                r.d_m1_n,
                r.d_m1_n1
            ),
            None => "no row at k=100".into(),
        },
    }
}

fn criterion_7(cases: &[FuzzCase]) -> Criterion {
    let random = FuzzConfig {
        seeds: (0, 1000),
        n: SizeRange { min: 2, max: 8 },
        strategy: Strategy::Random,
        rejection_budget: 1,
        workers: None,
    };
    let (summary, _) = fuzz(&random).unwrap();
    let structured = cases.iter().filter(|c| c.outcome.report.noncompatible && !c.outcome.report.ea).count();
    let noncompatible = cases.iter().filter(|c| c.outcome.report.noncompatible).count();
    let total = summary.noncompatible_without_ea + structured;
    Criterion {
        id: 7,
        name: "noncompatible pairs always have property (E.A.)",
        pass: total == 0,
        detail: format!(
            "{} random + {} structured instances, {} noncompatible among structured, {total} exceptions",
            summary.instances,
            cases.len(),
            noncompatible
        ),
    }
}

fn run_bin(args: &[&str], workers: &str, dir: &Path) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_jungck"))
        .args(args)
        .env("JUNGCK_WORKERS", workers)
        .current_dir(dir)
        .output()
        .expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_8() -> Criterion {
    let dir = tempfile::tempdir().unwrap();
    let base = dir.path();
    run_bin(&["demo", "--out", "inst"], "1", base);
    let commands: Vec<Vec<&str>> = vec![
        vec!["--format", "machine", "validate", "inst/three_point.json"],
        vec!["--format", "machine", "certify", "inst/swap_violation.json"],
        vec!["--format", "machine", "certify", "inst/continuous_halving.json", "--seed", "7"],
        vec!["--format", "machine", "solve", "inst/continuous_halving.json"],
        vec!["--format", "machine", "oracle", "inst/constant_s.json"],
        vec!["--format", "machine", "fuzz", "--seeds", "0..300", "--n", "2..8", "--strategy", "random"],
        vec!["--format", "machine", "fuzz", "--seeds", "0..100", "--n", "2..6", "--strategy", "rejection-certified"],
    ];
    let mut differing = Vec::new();
    for args in &commands {
        let reference = run_bin(args, "1", base);
        for workers in ["2", "8"] {
            if run_bin(args, workers, base) != reference {
                differing.push(args.join(" "));
            }
        }
    }
    let mut demo_files_same = true;
    run_bin(&["demo", "--out", "again"], "8", base);
    for entry in std::fs::read_dir(base.join("inst")).unwrap() {
        let name = entry.unwrap().file_name();
        demo_files_same &= std::fs::read(base.join("inst").join(&name)).unwrap()
            == std::fs::read(base.join("again").join(&name)).unwrap();
    }
    Criterion {
        id: 8,
        name: "byte-identical machine output across runs and JUNGCK_WORKERS settings",
        pass: differing.is_empty() && demo_files_same,
        detail: format!(
            "{} commands x 3 worker settings, differing: {:?}, demo files identical: {demo_files_same}",
            commands.len(),
            differing
        ),
    }
}

fn main() {
    let (cases, elapsed, note) = population();
    let results = vec![
        criterion_1(&cases, elapsed, &note),
        criterion_2(&cases),
        criterion_3(&cases),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(&cases),
        criterion_8(),
    ];
    let mut failed = 0;
    for c in &results {
        println!("[{}] criterion {}: {} ({})", if c.pass { "PASS" } else { "FAIL" }, c.id, c.name, c.detail);
        failed += usize::from(!c.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
