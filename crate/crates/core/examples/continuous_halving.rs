//! S(x) = x/4, T(x) = x/2 on [0, 1]: sampled certificate, then the iteration.

use jungck::contraction::certify_sampled;
use jungck::demos;
use jungck::solver::{extract_poc, iterate};

fn main() {
    let file = demos::continuous_halving();
    let space = file.space().unwrap();
    let pair = file.pair(&space).unwrap();
    let triple = file.triple().unwrap();

    let report = certify_sampled(&pair, &triple, space.as_euclidean().unwrap(), 10_000, 0).unwrap();
    println!(
        "sampled {} pairs: certified={} min slack={:.3e}",
        report.pairs_checked,
        report.certified,
        report.min_slack.unwrap()
    );

    let opts = file.iterate_options();
    let trace = iterate(&pair, &triple, &space, &file.x0(&space).unwrap(), opts).unwrap();
    for s in trace.steps.iter().step_by(8) {
        println!("  n={:>2} y={:.3e} gap={:?}", s.n, s.y.coords().unwrap()[0], s.gap);
    }
    let poc = extract_poc(&trace, &pair, &space, opts.tol).unwrap();
    println!("{} after {} rows: u={} z={}", trace.status, trace.steps.len(), poc.u, poc.z);
}
