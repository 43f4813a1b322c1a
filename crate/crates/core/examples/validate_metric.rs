//! Checks distance matrices against the metric axioms.

use jungck::metric::{validate_metric, FiniteMetricSpace};

fn main() {
    let line = FiniteMetricSpace::from_line(&[0.0, 1.0, 3.0]).unwrap();
    println!("points on a line: {:?} violations", validate_metric(line.matrix()).unwrap().len());

    let broken = vec![vec![0.0, 1.0, 5.0], vec![1.0, 0.0, 1.0], vec![5.0, 2.0, 0.0]];
    for v in validate_metric(&broken).unwrap() {
        println!("  {v}");
    }

    // structural problems are errors, not violations
    let ragged = vec![vec![0.0, 1.0], vec![1.0]];
    println!("ragged matrix: {}", validate_metric(&ragged).unwrap_err());
}
