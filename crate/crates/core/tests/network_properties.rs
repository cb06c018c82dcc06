mod common;

use std::collections::BTreeSet;

use heteroswitch::fixtures;
use heteroswitch::network::{
    classify_global, distribution_nodes, enumerate_cycles, load_network, validate_quasi_simple,
    DEFAULT_CYCLE_CAP,
};
use proptest::prelude::*;

use common::random_simplex_network;

proptest! {
    #![proptest_config(common::config(128))]

    #[test]
    fn distribution_nodes_are_exactly_the_branching_nodes(seed in any::<u64>()) {
        let net = random_simplex_network(seed, true);
        let mut expected: Vec<String> = net
            .nodes
            .iter()
            .filter(|n| net.connections.iter().filter(|c| c.from == n.id).count() >= 2)
            .map(|n| n.id.clone())
            .collect();
        expected.sort();
        prop_assert_eq!(distribution_nodes(&net), expected);
    }

    #[test]
    fn section_dimension_is_uniform(seed in any::<u64>()) {
        let net = random_simplex_network(seed, true);
        for n in &net.nodes {
            prop_assert_eq!(n.section_dimension(), net.cross_section_dimension);
        }
        prop_assert!(validate_quasi_simple(&net).ok);
    }

    #[test]
    fn global_classes_partition_the_spectrum(seed in any::<u64>()) {
        let net = random_simplex_network(seed, true);
        for n in &net.nodes {
            let g = classify_global(&net, &n.id).unwrap();
            let all: BTreeSet<String> = n
                .eigenvalues
                .iter()
                .filter(|e| !g.radial.contains(&e.label))
                .map(|e| e.label.clone())
                .collect();
            let total = g.contracting.len() + g.expanding.len() + g.transverse.len();
            let union: BTreeSet<String> = g
                .contracting
                .iter()
                .chain(&g.expanding)
                .chain(&g.transverse)
                .cloned()
                .collect();
            prop_assert_eq!(total, union.len(), "classes overlap at {}", n.id);
            prop_assert_eq!(union, all);
        }
    }

    #[test]
    fn json_round_trip_is_identity(seed in any::<u64>()) {
        let net = random_simplex_network(seed, true).with_rescales(|_, k| 1.0 + k as f64);
        let back = load_network(&net.to_json()).unwrap();
        prop_assert_eq!(&back.nodes, &net.nodes);
        prop_assert_eq!(&back.connections, &net.connections);
        prop_assert_eq!(back.to_json(), net.to_json());
    }
}

#[test]
fn fixtures_round_trip_and_validate() {
    for name in fixtures::NETWORKS {
        let net = fixtures::network(name).unwrap();
        let back = load_network(&net.to_json()).unwrap();
        assert_eq!(back.to_json(), net.to_json(), "{name}");
        assert!(validate_quasi_simple(&net).ok, "{name}");
    }
}

#[test]
fn fixture_dimensions_and_cycles() {
    let ks = fixtures::network("kirk_silber").unwrap();
    assert_eq!(ks.cross_section_dimension, 2);
    assert_eq!(enumerate_cycles(&ks, DEFAULT_CYCLE_CAP).unwrap().len(), 2);

    let bowtie = fixtures::network("bowtie").unwrap();
    assert_eq!((bowtie.nodes.len(), bowtie.connections.len()), (5, 6));
    assert_eq!(bowtie.cross_section_dimension, 3);
    let cycles = enumerate_cycles(&bowtie, DEFAULT_CYCLE_CAP).unwrap();
    assert_eq!(cycles.len(), 2);
    assert!(cycles.iter().all(|c| c.contains(&"xi2".to_string())));

    assert_eq!(fixtures::network("rsp").unwrap().cross_section_dimension, 3);
}

#[test]
fn fixture_distribution_nodes() {
    assert_eq!(distribution_nodes(&fixtures::network("bowtie").unwrap()), ["xi2"]);
    assert_eq!(
        distribution_nodes(&fixtures::network("r6_simplex").unwrap()),
        ["xi1", "xi2", "xi6"]
    );
    let rsp = fixtures::network("rsp").unwrap();
    assert_eq!(distribution_nodes(&rsp).len(), rsp.nodes.len());
}

#[test]
fn kirk_silber_global_classes() {
    let ks = fixtures::network("kirk_silber").unwrap();
    let at2 = classify_global(&ks, "xi2").unwrap();
    assert_eq!(at2.expanding.len(), 2);
    assert!(at2.transverse.is_empty());
    let at3 = classify_global(&ks, "xi3").unwrap();
    let local_t: Vec<_> = ks
        .node("xi3")
        .unwrap()
        .eigenvalues
        .iter()
        .filter(|e| e.klass == heteroswitch::network::Klass::Transverse)
        .map(|e| e.label.clone())
        .collect();
    assert_eq!(local_t.len(), 1);
    assert!(at3.transverse.contains(&local_t[0]));
}
