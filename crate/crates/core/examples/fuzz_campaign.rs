//! A small seeded fuzz campaign; the summary is independent of thread count.

use jungck::oracle::{fuzz, FuzzConfig, SizeRange, Strategy};

fn main() {
    for strategy in [Strategy::Random, Strategy::ConstantS, Strategy::RejectionCertified] {
        let config = FuzzConfig {
            seeds: (0, 200),
            n: SizeRange { min: 2, max: 6 },
            strategy,
            rejection_budget: 50_000,
            workers: None,
        };
        let (summary, falsified) = fuzz(&config).unwrap();
        println!(
            "{strategy}: {} instances, {} certified, {} with inclusion, {} falsified",
            summary.instances,
            summary.certified,
            summary.certified_with_inclusion,
            falsified.len()
        );
        for (name, c) in &summary.verdict_counts {
            println!("  {name:<26} pass {:>4} vacuous {:>4} falsified {}", c.pass, c.vacuous, c.falsified);
        }
        for c in &summary.owc_ea_combinations {
            println!("  owc={} ea={} -> {}", c.owc, c.ea, c.count);
        }
    }
}
