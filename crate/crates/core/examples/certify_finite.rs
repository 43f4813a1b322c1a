//! Exhaustive certification of the contraction inequality on finite spaces.

use jungck::contraction::{certify_finite, SelfMapPair};
use jungck::control::ControlTriple;
use jungck::metric::FiniteMetricSpace;

fn main() {
    let space = FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap();
    let pair = SelfMapPair::tables(vec![0, 0, 1], vec![0, 1, 2]);
    let report = certify_finite(&pair, &ControlTriple::constants(0.6, 0.3), &space).unwrap();
    println!(
        "three points: certified={} pairs={} min slack={:?}",
        report.certified, report.pairs_checked, report.min_slack
    );

    let two = FiniteMetricSpace::from_line(&[0.0, 1.0]).unwrap();
    let swap = SelfMapPair::tables(vec![1, 0], vec![0, 1]);
    let report = certify_finite(&swap, &ControlTriple::constants(0.1, 0.1), &two).unwrap();
    println!("swap: certified={} violations={}", report.certified, report.violation_count);
    for v in &report.violations {
        println!(
            "  ({}, {}): lhs {} > rhs {}",
            two.label(v.x.index().unwrap()),
            two.label(v.y.index().unwrap()),
            v.lhs,
            v.rhs
        );
    }
}
