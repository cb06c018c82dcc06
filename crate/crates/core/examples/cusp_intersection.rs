//! Decide whether a family of cusp-shaped regions meets near the origin, then
//! cross-check the verdict by sampling.
//!
//! `cargo run --example cusp_intersection -- fig6`

use heteroswitch::cusp::{intersects_near_origin, pairwise_rule, sample_oracle, PowerRegion};
use heteroswitch::fixtures;

fn main() -> heteroswitch::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "fig6".to_string());
    let regions = fixtures::cusps(&name)?;
    for r in &regions {
        println!("{:?} V_{}{}: {} x{} < x{}^{}", r.orientation, r.i, r.j, r.a, r.i, r.j, r.alpha);
    }
    let v = intersects_near_origin(&regions)?;
    println!("intersects near the origin: {}", v.intersects_near_origin);
    if let Some(w) = &v.witness {
        println!("witness ray in log coordinates: {:?}", w.ray);
    }
    if let Some(c) = &v.certificate {
        println!("{:?} certificate: {:?}", c.kind, c.multipliers);
    }
    for delta in [1e-2, 1e-3] {
        println!("oracle at delta = {delta}: {:?}", sample_oracle(&regions, delta, 100_000, 1)?);
    }

    // two nested thin cusps: the sharper one decides
    let a = PowerRegion::thin(1, 2, 1.0, 2.0);
    let b = PowerRegion::thin(1, 2, 1.0, 3.0);
    println!("V_12(1,2) vs V_12(1,3): {:?}", pairwise_rule(&a, &b));
    Ok(())
}
