#![allow(dead_code)]

use std::collections::BTreeSet;

use heteroswitch::cusp::{Orientation, PowerRegion};
use heteroswitch::network::{load_network, HeteroclinicNetwork};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

/// Random simplex-type network on `4..=6` coordinate axes: a Hamiltonian
/// cycle plus random chords, never both directions of a pair. Node `xi_k` sits
/// on axis `k`; a connection `xi_a -> xi_b` expands along `x_b` at `xi_a` and
/// contracts along `x_a` at `xi_b`.
pub fn random_simplex_network(seed: u64, positive_transverse: bool) -> HeteroclinicNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(4..=6);
    let mut edges = BTreeSet::new();
    for i in 0..n {
        edges.insert((i, (i + 1) % n));
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(b, a)) {
            edges.insert((a, b));
        }
    }
    let nodes: Vec<_> = (0..n)
        .map(|j| {
            let eigenvalues: Vec<_> = (0..n)
                .map(|i| {
                    let (value, klass) = if i == j {
                        (-rng.gen_range(1.0..2.0), "radial")
                    } else if edges.contains(&(j, i)) {
                        (rng.gen_range(0.2..1.5), "expanding")
                    } else if edges.contains(&(i, j)) {
                        (-rng.gen_range(0.2..2.0), "contracting")
                    } else if positive_transverse && rng.gen_bool(0.3) {
                        (rng.gen_range(0.1..1.0), "transverse")
                    } else {
                        (-rng.gen_range(0.1..2.0), "transverse")
                    };
                    json!({"value": value, "klass": klass, "label": format!("x{}", i + 1)})
                })
                .collect();
            json!({"id": format!("xi{}", j + 1), "eigenvalues": eigenvalues})
        })
        .collect();
    let connections: Vec<_> = edges
        .iter()
        .map(|(a, b)| {
            json!({
                "from": format!("xi{}", a + 1),
                "to": format!("xi{}", b + 1),
                "expanding_label": format!("x{}", b + 1),
                "contracting_label": format!("x{}", a + 1),
            })
        })
        .collect();
    let doc = json!({
        "name": format!("random_{seed}"),
        "ambient_dimension": n,
        "nodes": nodes,
        "connections": connections,
    });
    load_network(&doc.to_string()).expect("generated network loads")
}

/// Random walk of `len` nodes along connections, starting anywhere.
pub fn random_walk(net: &HeteroclinicNetwork, len: usize, rng: &mut impl Rng) -> Vec<String> {
    let ids = net.sorted_ids();
    let mut path = vec![ids[rng.gen_range(0..ids.len())].to_string()];
    while path.len() < len {
        let succ = net.successors(path.last().unwrap());
        path.push(succ[rng.gen_range(0..succ.len())].to_string());
    }
    path
}

/// Region on two distinct axes of `(0, 1)^n` with a random orientation.
pub fn random_region(n: usize, rng: &mut impl Rng) -> PowerRegion {
    let i = rng.gen_range(1..=n);
    let mut j = rng.gen_range(1..=n - 1);
    if j >= i {
        j += 1;
    }
    let a = rng.gen_range(-1.0f64..1.0).exp();
    let alpha = rng.gen_range(0.3..3.0);
    let o = if rng.gen_bool(0.5) {
        Orientation::Thin
    } else {
        Orientation::Thick
    };
    PowerRegion::thin(i, j, a, alpha)
        .in_dimension(n)
        .with_orientation(o)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn config(cases: u32) -> proptest::test_runner::Config {
    proptest::test_runner::Config {
        cases,
        failure_persistence: None,
        ..Default::default()
    }
}
