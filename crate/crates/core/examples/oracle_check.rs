//! Cross-checks the counting engine against brute force.
//!
//! Every pattern on up to four vertices meets every host on up to three,
//! plus a seeded sample of larger pairs. Any disagreement is printed with
//! the graph6 strings needed to reproduce it.

use homspasm::cli::{run_check, CheckConfig, DefaultEngine};

fn main() {
    let cfg = CheckConfig {
        max_pattern: 4,
        exhaustive_host: 3,
        max_host: 6,
        samples: 200,
        seed: 7,
    };
    let report = run_check(&DefaultEngine::default(), &cfg).unwrap();
    println!(
        "{} (pattern, host) pairs, {} comparisons, {} mismatches",
        report.pairs,
        report.comparisons,
        report.mismatches.len()
    );
    for m in report.mismatches.iter().take(5) {
        println!("  {m}");
    }
}
