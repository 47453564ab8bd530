//! Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
//! Exits non-zero if any criterion fails.

use nilcat::cache::RepStore;
use nilcat::suite::{run_suite, SuiteConfig};

fn main() {
    let store = RepStore::in_memory();
    let cfg = SuiteConfig::default();
    let results = run_suite(&store, &cfg, true);
    let mut failed = 0;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{verdict} {:>2} {:<22} {:>7} ms (budget {} ms)",
            r.number,
            r.id,
            r.elapsed_ms.unwrap_or(0),
            r.budget_ms
        );
        if !r.passed {
            failed += 1;
            if let Some(e) = &r.error {
                println!("     error: {e}");
            }
            for c in r.checks.iter().filter(|c| !c.passed) {
                println!("     {}: {}", c.id, c.detail);
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
