//! Brute-force coincidence structure and theorem verdicts on finite instances.

use jungck::demos;
use jungck::oracle::verify_theorems;

fn main() {
    for (name, file) in
        [("three point", demos::three_point()), ("constant S", demos::constant_s()), ("swap", demos::swap_violation())]
    {
        let space = file.space().unwrap();
        let finite = space.as_finite().unwrap();
        let report = verify_theorems(&file.pair(&space).unwrap(), &file.triple().unwrap(), finite).unwrap();
        println!(
            "{name}: pocs={:?} cfp={:?} owc={} compatible={} ea={} certified={}",
            report.pocs,
            report.common_fixed_points,
            report.owc,
            report.compatible,
            report.ea,
            report.contraction.certified
        );
        for v in &report.theorem_verdicts {
            println!("  {:<26} {}", v.theorem.name(), v.verdict);
        }
    }
}
