//! Runner for the acceptance criteria: one PASS/FAIL line per criterion.

use std::process::ExitCode;
use std::time::Instant;

pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

pub type Criterion = (&'static str, fn() -> Outcome);

pub fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

/// Runs every criterion in order and fails when any of them does. A
/// panicking criterion counts as a failure and does not stop the others.
pub fn run(criteria: &[Criterion]) -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = std::panic::catch_unwind(check).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} [{}] {name} ({:.1}s): {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            t.elapsed().as_secs_f64(),
            o.detail
        );
    }
    println!(
        "acceptance: {} passed, {failed} failed in {:.1}s",
        criteria.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
