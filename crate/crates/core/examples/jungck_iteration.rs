//! The Jungck iteration on a three-point space, printed as a table.

use jungck::demos;
use jungck::solver::{extract_poc, iterate};

fn main() {
    let file = demos::three_point();
    let space = file.space().unwrap();
    let pair = file.pair(&space).unwrap();
    let triple = file.triple().unwrap();
    for start in ["p0", "p1", "p2"] {
        let x0 = jungck::instance::parse_point_arg(start, &space).unwrap();
        let trace = iterate(&pair, &triple, &space, &x0, file.iterate_options()).unwrap();
        println!("from {start}:");
        for s in &trace.steps {
            println!("  n={} x={} y={} gap={:?}", s.n, space.describe(&s.x), space.describe(&s.y), s.gap);
        }
        let poc = extract_poc(&trace, &pair, &space, 0.0).unwrap();
        println!("  z = {}", space.describe(&poc.z));
    }
}
