//! One PASS/FAIL line per acceptance criterion. Lines go straight to stdout
//! so they show up without `--nocapture`.

use std::io::Write;

use orlicz_core::verify::{run_criterion, CRITERIA, DEFAULT_SEED};

#[test]
fn acceptance() {
    let mut out = std::io::stdout().lock();
    let mut failed = Vec::new();
    writeln!(out).unwrap();
    for name in CRITERIA {
        let outcome = run_criterion(name, DEFAULT_SEED).unwrap();
        writeln!(out, "{}", outcome.line()).unwrap();
        out.flush().unwrap();
        if !outcome.passed {
            failed.push(outcome.id);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
