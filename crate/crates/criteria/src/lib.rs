//! Reporting for the acceptance run: each criterion yields an [`Outcome`] and
//! [`report`] prints one PASS/FAIL line per criterion.
//!
//! This crate is named so that it sorts after the library and CLI crates; cargo
//! runs test binaries in name order, so their suites report before acceptance.

use std::panic::{self, UnwindSafe};

pub struct Outcome {
    pub pass: bool,
    pub detail: String,
}

pub fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn panic_message(e: &(dyn std::any::Any + Send)) -> String {
    e.downcast_ref::<String>()
        .cloned()
        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
        .unwrap_or_default()
}

/// Runs each criterion, treating a panic as a failure, and prints the results.
/// Returns the 1-based numbers of the failed criteria.
pub fn report<F>(criteria: Vec<(&str, F)>) -> Vec<usize>
where
    F: FnOnce() -> Outcome + UnwindSafe,
{
    let total = criteria.len();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let o = panic::catch_unwind(run).unwrap_or_else(|e| outcome(false, format!("panicked: {}", panic_message(&*e))));
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    println!("acceptance: {}/{total} criteria passed", total - failed.len());
    failed
}
