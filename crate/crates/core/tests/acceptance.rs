//! Runs every acceptance criterion at full size and prints one line each.
//! Exits non-zero if any criterion fails.

use heteroswitch::acceptance::{run_criterion, AcceptanceOptions, CRITERIA};

fn main() {
    let opts = AcceptanceOptions::default();
    let mut failed = Vec::new();
    println!("\nrunning {} acceptance criteria", CRITERIA.len());
    for id in 1..=CRITERIA.len() {
        let r = run_criterion(id, &opts);
        println!("{}", r.line());
        if !r.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed\n", CRITERIA.len());
    } else {
        println!("acceptance: failed criteria {failed:?}\n");
        std::process::exit(1);
    }
}
