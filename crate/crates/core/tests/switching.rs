mod common;

use heteroswitch::fixtures;
use heteroswitch::network::load_network;
use heteroswitch::switching::{
    connection_criterion, depth_bound, enumerate_followable, finite_switching_witness,
    network_report, node_criterion, sequence_criterion, Verdict, DEFAULT_PATH_CAP,
};
use proptest::prelude::*;
use serde_json::json;

use common::random_simplex_network;

/// Two cycles sharing the chain `a -> b -> c` in `R^dim`, simplex-style.
fn shared_chain(dim: usize) -> heteroswitch::network::HeteroclinicNetwork {
    // a=1, b=2, c=3, then c -> 4 -> 1 and c -> 5 -> 1
    let edges = [(1, 2), (2, 3), (3, 4), (4, 1), (3, 5), (5, 1)];
    let nodes: Vec<_> = (1..=dim)
        .map(|j| {
            let ev: Vec<_> = (1..=dim)
                .map(|i| {
                    let (v, k) = if i == j {
                        (-1.0, "radial")
                    } else if edges.contains(&(j, i)) {
                        (0.5 + 0.1 * i as f64, "expanding")
                    } else if edges.contains(&(i, j)) {
                        (-1.0 - 0.1 * i as f64, "contracting")
                    } else {
                        (-0.7, "transverse")
                    };
                    json!({"value": v, "klass": k, "label": format!("x{i}")})
                })
                .collect();
            json!({"id": format!("xi{j}"), "eigenvalues": ev})
        })
        .collect();
    let conns: Vec<_> = edges
        .iter()
        .map(|(a, b)| {
            json!({"from": format!("xi{a}"), "to": format!("xi{b}"),
                   "expanding_label": format!("x{b}"), "contracting_label": format!("x{a}")})
        })
        .collect();
    load_network(&json!({"ambient_dimension": dim, "nodes": nodes, "connections": conns}).to_string())
        .unwrap()
}

#[test]
fn kirk_silber_criteria_fire() {
    let ks = fixtures::network("kirk_silber").unwrap();
    assert_eq!(node_criterion(&ks, "xi1").unwrap().verdict, Verdict::NoSwitching);
    assert_eq!(connection_criterion(&ks, "xi1", "xi2").unwrap().verdict, Verdict::NoSwitching);
}

#[test]
fn ac_network_node_with_three_contracting_directions_fires() {
    let ac = fixtures::network("ac_network").unwrap();
    let v = node_criterion(&ac, "xi3").unwrap();
    assert_eq!(v.arithmetic.n_c, 3);
    assert_eq!(v.verdict, Verdict::NoSwitching);
}

#[test]
fn bowtie_centre_is_inconclusive_with_k_one() {
    let b = fixtures::network("bowtie").unwrap();
    let v = node_criterion(&b, "xi2").unwrap();
    assert_eq!((v.arithmetic.n_c, v.arithmetic.n_e, v.arithmetic.dimension), (2, 2, 3));
    assert_eq!(v.verdict, Verdict::Inconclusive);
    assert_eq!(depth_bound(&b, "xi2").unwrap().k, 1);
}

#[test]
fn rsp_connections_admit_no_switching() {
    let rsp = fixtures::network("rsp").unwrap();
    for c in &rsp.connections {
        let v = connection_criterion(&rsp, &c.from, &c.to).unwrap();
        assert_eq!(v.verdict, Verdict::NoSwitching, "{} -> {}", c.from, c.to);
    }
    for n in &rsp.nodes {
        assert_eq!(depth_bound(&rsp, &n.id).unwrap().k, 1);
    }
}

#[test]
fn r6_depth_bound_and_listed_sequences() {
    let r6 = fixtures::network("r6_simplex").unwrap();
    let d = depth_bound(&r6, "xi1").unwrap();
    assert_eq!((d.k, d.sum, d.dimension), (2, 6, 4));
    let e = enumerate_followable(&r6, "xi1", 3, DEFAULT_PATH_CAP).unwrap();
    let mut got: Vec<Vec<&str>> = e
        .feasible_paths()
        .iter()
        .map(|p| p.iter().map(String::as_str).collect())
        .collect();
    got.sort();
    assert_eq!(
        got,
        [
            ["xi1", "xi2", "xi3", "xi1"],
            ["xi1", "xi2", "xi5", "xi6"],
            ["xi1", "xi4", "xi5", "xi6"]
        ]
    );
}

#[test]
fn depth_one_paths_are_all_feasible() {
    for name in fixtures::NETWORKS {
        let net = fixtures::network(name).unwrap();
        for n in &net.nodes {
            let e = enumerate_followable(&net, &n.id, 1, DEFAULT_PATH_CAP).unwrap();
            assert_eq!(e.feasible_count, e.paths.len(), "{name} {}", n.id);
        }
    }
}

#[test]
fn sequence_criterion_on_a_shared_chain() {
    let net = shared_chain(5);
    let v = sequence_criterion(&net, &["xi1", "xi2", "xi3"]).unwrap();
    assert!(v.arithmetic.sum >= v.arithmetic.dimension);
    assert_eq!(v.verdict, Verdict::NoSwitching);
    let single = sequence_criterion(&net, &["xi3", "xi4"]).unwrap();
    let conn = connection_criterion(&net, "xi3", "xi4").unwrap();
    assert_eq!(single.verdict, conn.verdict);
}

#[test]
fn every_fixture_has_a_finite_switching_witness() {
    for name in fixtures::NETWORKS {
        let net = fixtures::network(name).unwrap();
        let w = finite_switching_witness(&net, 8).unwrap();
        assert!(w.is_some(), "{name}");
    }
}

#[test]
fn reports_carry_the_expected_headlines() {
    let rsp = network_report(&fixtures::network("rsp").unwrap()).unwrap();
    assert!(rsp.headline.contains("no switching along any connection"));
    assert!(rsp.headline.contains("k=1 everywhere"));
    let bowtie = network_report(&fixtures::network("bowtie").unwrap()).unwrap();
    assert!(bowtie.returns.iter().any(|r| r.node == "xi2" && r.predetermined));
    let house = network_report(&fixtures::network("house").unwrap()).unwrap();
    assert!(house.departure_sets.iter().any(|d| d.non_covering));
}

proptest! {
    #![proptest_config(common::config(32))]

    #[test]
    fn depth_bound_sums_reach_the_dimension(seed in any::<u64>()) {
        let net = random_simplex_network(seed, false);
        for d in heteroswitch::network::distribution_nodes(&net) {
            let b = depth_bound(&net, &d).unwrap();
            for s in &b.sequences {
                prop_assert!(s.sum >= b.dimension || s.nodes.len() > b.cycle_bound);
                prop_assert!(s.k <= b.k);
            }
        }
    }

    #[test]
    fn enumerated_paths_have_the_requested_length(seed in any::<u64>(), depth in 1usize..4) {
        let net = random_simplex_network(seed, true);
        let start = net.sorted_ids()[0].to_string();
        let e = enumerate_followable(&net, &start, depth, DEFAULT_PATH_CAP).unwrap();
        prop_assert!(e.paths.iter().all(|p| p.path.len() == depth + 1 && p.path[0] == start));
        prop_assert_eq!(e.feasible_count, e.paths.iter().filter(|p| p.feasible).count());
    }
}
