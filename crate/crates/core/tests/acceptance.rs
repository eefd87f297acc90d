use std::process::ExitCode;
use std::time::Instant;

use qemlab::acceptance::{selftest, selftest_verdict};

fn main() -> ExitCode {
    let start = Instant::now();
    let reports = selftest(|r| println!("{}", r.line()));
    let verdict = selftest_verdict(&reports, start.elapsed());
    println!("{}", verdict.line());
    if reports.iter().all(|r| r.passed) && verdict.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
