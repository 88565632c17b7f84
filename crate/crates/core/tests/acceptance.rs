//! Runs every acceptance criterion and prints one line per criterion.
//!
//! Built without the libtest harness so the lines appear in plain
//! `cargo test` output; a failing criterion makes the process exit 1.

use posetdim::acceptance::{run_criterion, SuiteConfig, SuiteSummary, CRITERIA};

fn main() {
    let cfg = SuiteConfig::default();
    let timed: Vec<_> = CRITERIA.iter().map(|&(id, _)| run_criterion(id, &cfg)).collect();
    let summary = SuiteSummary::from_outcomes(cfg.seed, timed);
    for o in &summary.outcomes {
        let ms = summary.timings_ms[&o.id];
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {:<42} {:>10.1} ms", o.id, o.name, ms);
        if let Some(w) = &o.witness {
            println!("    witness: {w}");
        }
    }
    println!("{} passed, {} failed", summary.passed, summary.failed);
    if !summary.all_passed() {
        std::process::exit(1);
    }
}
