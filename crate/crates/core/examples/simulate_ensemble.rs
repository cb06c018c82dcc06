//! Integrate an ensemble near a built-in network and check every observed
//! itinerary against the followability verdicts.
//!
//! `cargo run --release --example simulate_ensemble -- rsp_replicator 200`

use std::collections::BTreeMap;
use std::time::Instant;

use heteroswitch::sim::{build_field, empirical_switching_test, SimConfig};

fn main() -> heteroswitch::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "bowtie".to_string());
    let samples = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);
    let field = build_field(&name, &BTreeMap::new())?;
    let config = SimConfig {
        samples,
        ..SimConfig::default()
    };
    let start = Instant::now();
    let result = empirical_switching_test(&field, &field.network, &config)?;
    println!("{name}: {samples} trajectories in {:.2?}", start.elapsed());
    println!("terminal states: {:?}", result.terminals);
    println!("prefixes checked: {}", result.prefixes_checked);
    println!("violations: {}", result.violations.len());
    for v in result.violations.iter().take(5) {
        println!("  member {}: {}", v.member, v.path.join(" -> "));
    }
    let mut observed = result.observed.clone();
    observed.sort_by(|a, b| b.count.cmp(&a.count));
    for o in observed.iter().take(8) {
        println!("{:5}  {}", o.count, o.path.join(" -> "));
    }
    Ok(())
}
