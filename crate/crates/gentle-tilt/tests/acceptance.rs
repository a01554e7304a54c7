//! Acceptance harness: one PASS or FAIL line per numbered check.
//!
//! Set `ACCEPTANCE_SEED` to change the seed of the randomized checks and
//! `ACCEPTANCE_ONLY` to a comma-separated list of check numbers to run a subset.

use gentle_tilt::verify::{run_check, Suite};

fn main() {
    let seed = std::env::var("ACCEPTANCE_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(2024);
    let only: Option<Vec<u8>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for id in Suite::All.checks() {
        if only.as_ref().is_some_and(|o| !o.contains(&id)) {
            continue;
        }
        let report = run_check(id, seed);
        println!("{}", report.line());
        failed += usize::from(!report.passed);
    }
    if failed > 0 {
        println!("{failed} acceptance checks failed");
        std::process::exit(1);
    }
}
