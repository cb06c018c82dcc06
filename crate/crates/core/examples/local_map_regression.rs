//! Integrate the linearised flow through one node and recover the passage
//! exponents from a log-log fit.
//!
//! `cargo run --release --example local_map_regression -- bowtie xi1 xi2 xi3`

use heteroswitch::fixtures;
use heteroswitch::sim::local_map_regression;

fn main() -> heteroswitch::Result<()> {
    let a: Vec<String> = std::env::args().skip(1).collect();
    let (name, i, j, k) = if a.len() == 4 {
        (a[0].as_str(), a[1].as_str(), a[2].as_str(), a[3].as_str())
    } else {
        ("bowtie", "xi1", "xi2", "xi3")
    };
    let net = fixtures::network(name)?;
    let r = local_map_regression(&net, i, j, k, 100, 1)?;
    println!("passage {} -> {} -> {}", r.path[0], r.path[1], r.path[2]);
    for f in &r.fits {
        println!(
            "  {:<4} expected {:8.5} fitted {:8.5} (rel. error {:.1e})",
            f.label, f.expected, f.fitted, f.relative_error
        );
    }
    Ok(())
}
