//! List every path of a given length from a node with its followability
//! verdict, split by the connection used to arrive.
//!
//! `cargo run --example path_enumeration -- r6_simplex xi1 3`

use heteroswitch::fixtures;
use heteroswitch::switching::{depth_bound, enumerate_followable, DEFAULT_PATH_CAP};

fn main() -> heteroswitch::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "r6_simplex".to_string());
    let start = args.next().unwrap_or_else(|| "xi1".to_string());
    let depth = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let net = fixtures::network(&name)?;

    if let Ok(b) = depth_bound(&net, &start) {
        println!("depth bound at {start}: k = {} (sum {} vs N = {})", b.k, b.sum, b.dimension);
    }
    let e = enumerate_followable(&net, &start, depth, DEFAULT_PATH_CAP)?;
    println!("{} of {} paths followable", e.feasible_count, e.paths.len());
    for p in &e.paths {
        let from: Vec<String> = p
            .by_incoming
            .iter()
            .map(|i| format!("{}:{}", i.from, if i.feasible { "yes" } else { "no" }))
            .collect();
        println!("  {:<30} {}", p.path.join(" -> "), from.join(" "));
    }
    Ok(())
}
