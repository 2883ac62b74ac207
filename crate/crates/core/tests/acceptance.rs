//! Runs every reproduction check and prints one PASS/FAIL line per check.
//! Exits nonzero if any check fails.

use std::process::ExitCode;

use ndisco::checks::{timed, ALL_CHECKS};

fn main() -> ExitCode {
    let mut failed = 0;
    for check in ALL_CHECKS {
        let (outcome, seconds) = timed(check);
        println!("{} [{seconds:.2}s]", outcome.line());
        for note in &outcome.notes {
            println!("    - {note}");
        }
        if !outcome.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", ALL_CHECKS.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
