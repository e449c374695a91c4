//! One line per acceptance criterion at full size. Known failures print but
//! are not asserted. Runs without the libtest harness so the lines are never
//! captured.

use std::process::ExitCode;

use arlat::battery::{self, Profile, KNOWN_FAILURES};

const SEED: u64 = 20240601;

fn main() -> ExitCode {
    let results = battery::run(Profile::Full, SEED);
    for c in &results {
        println!("{} ({:.1?})", c.line(), c.elapsed);
    }
    println!("KNOWN: {}", KNOWN_FAILURES.join(", "));
    let failed: Vec<&str> = results
        .iter()
        .filter(|c| !c.acceptable())
        .map(|c| c.id.as_str())
        .collect();
    if !failed.is_empty() || results.len() != 17 {
        println!("acceptance: FAILED {failed:?} ({} criteria)", results.len());
        return ExitCode::FAILURE;
    }
    println!("acceptance: ok");
    ExitCode::SUCCESS
}
