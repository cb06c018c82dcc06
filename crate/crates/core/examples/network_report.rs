//! Validate a network document and print the full switching report.
//!
//! `cargo run --example network_report -- kirk_silber`

use heteroswitch::fixtures;
use heteroswitch::report::render_network_report;
use heteroswitch::switching::network_report;

fn main() -> heteroswitch::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "kirk_silber".to_string());
    let net = fixtures::network(&name)?;
    let report = network_report(&net)?;
    print!("{}", render_network_report(&report));
    Ok(())
}
