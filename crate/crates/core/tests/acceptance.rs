//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;

use dbr_core::acceptance::run_all;
use dbr_core::par::Exec;

fn main() -> ExitCode {
    let outcomes = run_all(Exec::default());
    let mut ok = true;
    for o in &outcomes {
        println!("{}", o.line());
        for f in &o.report.failures {
            println!("    {f}");
        }
        ok &= o.passed();
    }
    let passed = outcomes.iter().filter(|o| o.passed()).count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
