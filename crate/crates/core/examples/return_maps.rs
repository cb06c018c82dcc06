//! Build local and global maps at the bowtie centre, compose them around a
//! loop and show the constraints pulled back to the first section.
//!
//! `cargo run --example return_maps`

use heteroswitch::fixtures;
use heteroswitch::maps::{compose_path, domain_c, evaluate_chain, followable, local_map};

fn main() -> heteroswitch::Result<()> {
    let net = fixtures::network("bowtie")?;

    let lm = local_map(&net, "xi1", "xi2", "xi3")?;
    println!(
        "local map at xi2: {} -> {} with v = w^{:.4}",
        lm.in_axes.join(","),
        lm.out_axes.join(","),
        lm.principal_exponent()
    );
    for (label, e) in &lm.exponents {
        println!("  {label}' = {label} * w^{e:.4}");
    }
    for k in ["xi3", "xi4"] {
        let c = domain_c(&net, "xi1", "xi2", k)?;
        println!("C(xi1, xi2, {k}): {:?}", c.power_regions());
    }

    for path in [
        vec!["xi3", "xi1", "xi2", "xi3", "xi1", "xi2", "xi3"],
        vec!["xi3", "xi1", "xi2", "xi3", "xi1", "xi2", "xi4"],
    ] {
        let t = compose_path(&net, &path)?;
        let v = followable(&net, &path)?;
        println!("\n{}: followable = {}", path.join(" -> "), v.intersects_near_origin);
        for row in &t.map.matrix {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:9.4}")).collect();
            println!("  [{} ]", cells.join(""));
        }
        println!("  {} constraints on {}", t.pulled_back.rows.len(), t.pulled_back.axes.join(","));
        if let Some(w) = &v.witness {
            let x: Vec<f64> = w.point(3.0).iter().map(|e| (-e).exp()).collect();
            let eta_end: Option<Vec<f64>> = evaluate_chain(&net, &path, &x)?
                .map(|y| y.iter().map(|v| -v.ln()).collect());
            println!("  -ln x: {:.3?} ends at {eta_end:.3?}", w.point(3.0));
        }
    }
    Ok(())
}
