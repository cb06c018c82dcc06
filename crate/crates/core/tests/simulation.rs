mod common;

use std::collections::BTreeMap;

use heteroswitch::error::Error;
use heteroswitch::fixtures;
use heteroswitch::sim::{
    build_field, empirical_switching_test, exit_determinism, integrate, local_map_regression,
    record_itinerary, seed_point, Event, FieldKind, IntegratorConfig, SimConfig, Skeleton,
    Terminal, VectorField, FIELD_NAMES,
};
use proptest::prelude::*;

use common::rng;

fn field(name: &str) -> VectorField {
    build_field(name, &BTreeMap::new()).unwrap()
}

fn small(samples: usize, seed: u64) -> SimConfig {
    SimConfig {
        samples,
        seed,
        ..SimConfig::default()
    }
}

#[test]
fn jacobians_match_declared_eigenvalues() {
    let mut names: Vec<&str> = FIELD_NAMES.to_vec();
    names.extend(["house", "ac_network"]);
    for name in names {
        let f = field(name);
        for chart in &f.nodes {
            let fd = f.jacobian_fd(&chart.id, 1e-6).unwrap();
            let exact = f.jacobian(&chart.id).unwrap();
            let node = f.network.node(&chart.id).unwrap();
            for (r, (label, _)) in chart.labels.iter().enumerate() {
                for c in 0..fd.len() {
                    let scale = exact[r][r].abs().max(1.0);
                    assert!(
                        (fd[r][c] - exact[r][c]).abs() <= 1e-6 * scale,
                        "{name} {} [{r}][{c}]: {} vs {}",
                        chart.id,
                        fd[r][c],
                        exact[r][c]
                    );
                }
                let declared = node.eigenvalue(label).unwrap().value;
                assert!((exact[r][r] - declared).abs() <= 1e-8, "{name} {} {label}", chart.id);
            }
        }
    }
}

proptest! {
    #![proptest_config(common::config(16))]

    #[test]
    fn finite_differences_are_step_independent(h in 1e-7f64..1e-5, which in 0usize..5) {
        let f = field(FIELD_NAMES[which]);
        for chart in &f.nodes {
            let fd = f.jacobian_fd(&chart.id, h).unwrap();
            let exact = f.jacobian(&chart.id).unwrap();
            for r in 0..fd.len() {
                for c in 0..fd.len() {
                    prop_assert!((fd[r][c] - exact[r][c]).abs() <= 1e-6 * exact[r][r].abs().max(1.0));
                }
            }
        }
    }
}

#[test]
fn trajectory_at_a_node_is_constant() {
    let f = field("kirk_silber");
    let chart = f.node("xi1").unwrap();
    let cfg = SimConfig {
        max_time: 20.0,
        ..SimConfig::default()
    };
    let traj = integrate(&f, &chart.position, &cfg).unwrap();
    for (_, x) in traj.samples(&f) {
        assert!(f.node_distance(chart, &x) < 1e-12);
    }
    let it = record_itinerary(&traj, &f, &cfg, None).unwrap();
    assert_eq!(
        it.events,
        [Event::EnteredNode {
            node: "xi1".into(),
            t: 0.0
        }]
    );
    assert_eq!(it.terminal, Terminal::TimeExhausted);
}

#[test]
fn point_on_a_connection_converges_to_its_target() {
    let f = field("bowtie");
    let sk = Skeleton::build(&f).unwrap();
    let arc = sk.arc("xi1", "xi2").unwrap();
    let cfg = SimConfig {
        max_time: 60.0,
        ..SimConfig::default()
    };
    let traj = integrate(&f, &arc.midpoint, &cfg).unwrap();
    let target = f.node("xi2").unwrap();
    let d: Vec<f64> = traj
        .samples(&f)
        .iter()
        .map(|(_, x)| f.node_distance(target, x))
        .collect();
    let entry = d.iter().position(|v| *v < cfg.node_radius).expect("reaches xi2");
    assert!(d[entry..].windows(2).all(|w| w[1] <= w[0] + 1e-12));
    assert!(*d.last().unwrap() < 1e-6);
}

#[test]
fn bowtie_seed_begins_with_its_connection() {
    let f = field("bowtie");
    let cfg = SimConfig {
        max_time: 60.0,
        ..SimConfig::default()
    };
    let sk = Skeleton::build(&f).unwrap();
    let arc = sk.arc("xi1", "xi2").unwrap();
    let x0 = seed_point(&f, arc, cfg.shell, &mut rng(3));
    let traj = integrate(&f, &x0, &cfg).unwrap();
    let it = record_itinerary(&traj, &f, &cfg, Some(("xi1", "xi2"))).unwrap();
    assert!(it.events.len() >= 3);
    assert!(matches!(&it.events[0], Event::EnteredNode { node, .. } if node == "xi1"));
    assert!(
        matches!(&it.events[1], Event::TraversedConnection { from, to, .. } if from == "xi1" && to == "xi2")
    );
    assert!(matches!(&it.events[2], Event::EnteredNode { node, .. } if node == "xi2"));
}

#[test]
fn unstable_transverse_direction_departs() {
    // make the transverse eigenvalue x4 at xi1 of the house field strongly positive
    let mut f = field("house");
    let FieldKind::Simplex { a } = &mut f.kind else {
        unreachable!()
    };
    a[3][0] = 1.5;
    let sk = Skeleton::build(&f).unwrap();
    let arc = sk.arc("xi3", "xi1").unwrap();
    let cfg = SimConfig::default();
    let mut departed = 0;
    for s in 0..10 {
        let x0 = seed_point(&f, arc, cfg.shell, &mut rng(s));
        let traj = integrate(&f, &x0, &cfg).unwrap();
        let it = record_itinerary(&traj, &f, &cfg, Some(("xi3", "xi1"))).unwrap();
        if it.terminal == Terminal::Departed {
            departed += 1;
        }
    }
    assert!(departed > 0);
}

#[test]
fn halving_tolerances_moves_crossings_little() {
    let f = field("kirk_silber");
    let sk = Skeleton::build(&f).unwrap();
    let arc = &sk.arcs[0];
    let x0 = seed_point(&f, arc, 1e-3, &mut rng(11));
    let coarse = SimConfig {
        max_time: 80.0,
        ..SimConfig::default()
    };
    let fine = SimConfig {
        integrator: IntegratorConfig {
            rtol: coarse.integrator.rtol / 2.0,
            atol: coarse.integrator.atol / 2.0,
            ..coarse.integrator
        },
        ..coarse.clone()
    };
    let seeded = Some((arc.from.as_str(), arc.to.as_str()));
    let a = record_itinerary(&integrate(&f, &x0, &coarse).unwrap(), &f, &coarse, seeded).unwrap();
    let b = record_itinerary(&integrate(&f, &x0, &fine).unwrap(), &f, &fine, seeded).unwrap();
    assert!(a.crossings.len() >= 2);
    assert_eq!(a.crossings.len(), b.crossings.len());
    for (p, q) in a.crossings.iter().zip(&b.crossings) {
        assert_eq!(p.node, q.node);
        for (u, v) in p.point.iter().zip(&q.point) {
            assert!((u - v).abs() < 1e-4, "{u} vs {v}");
        }
    }
}

#[test]
fn overlapping_neighbourhoods_are_rejected() {
    let f = field("bowtie");
    let cfg = SimConfig {
        node_radius: 0.4,
        ..small(4, 1)
    };
    let err = empirical_switching_test(&f, &f.network, &cfg).unwrap_err();
    assert!(matches!(err, Error::Ambiguous(_)), "{err}");
}

#[test]
fn ensembles_are_deterministic() {
    let f = field("kirk_silber");
    let a = empirical_switching_test(&f, &f.network, &small(12, 5)).unwrap();
    let b = empirical_switching_test(&f, &f.network, &small(12, 5)).unwrap();
    assert_eq!(a, b);
    let c = empirical_switching_test(&f, &f.network, &small(12, 6)).unwrap();
    assert_ne!(a.members, c.members);
}

#[test]
fn rsp_ensemble_has_no_violations() {
    let f = field("rsp_replicator");
    let r = empirical_switching_test(&f, &f.network, &small(150, 2)).unwrap();
    assert!(r.violations.is_empty(), "{:?}", r.violations);
    assert!(r.prefixes_checked > 0);
}

#[test]
fn bowtie_exit_is_predetermined_after_a_return() {
    let f = field("bowtie");
    let r = empirical_switching_test(&f, &f.network, &small(200, 4)).unwrap();
    assert!(r.violations.is_empty());
    let d = exit_determinism(&r, "xi2");
    assert!(d.returns > 0);
    assert!(d.deterministic, "{:?}", d.histories);
}

#[test]
fn r6_sequences_from_xi1_are_the_listed_ones() {
    let f = field("r6_simplex");
    let cfg = SimConfig {
        start_node: Some("xi1".into()),
        ..small(150, 7)
    };
    let r = empirical_switching_test(&f, &f.network, &cfg).unwrap();
    assert!(r.violations.is_empty());
    let listed = [
        ["xi1", "xi2", "xi3", "xi1"],
        ["xi1", "xi2", "xi5", "xi6"],
        ["xi1", "xi4", "xi5", "xi6"],
    ];
    let mut seen = 0;
    for m in &r.members {
        let nodes = m.itinerary.nodes();
        if nodes.len() >= 5 {
            assert_eq!(nodes[1], "xi1");
            assert!(listed.iter().any(|l| nodes[1..5] == l[..]), "{nodes:?}");
            seen += 1;
        }
    }
    assert!(seen > 0);
}

#[test]
fn nonlinear_passage_matches_local_map_exponents() {
    let net = fixtures::network("bowtie").unwrap();
    let r = local_map_regression(&net, "xi1", "xi2", "xi3", 100, 1).unwrap();
    assert!(r.max_relative_error < 0.05, "{r:?}");
}

#[test]
fn unknown_field_and_parameters_are_rejected() {
    assert!(build_field("lorenz", &BTreeMap::new()).is_err());
    let bad: BTreeMap<String, f64> = [("nope".to_string(), 1.0)].into_iter().collect();
    assert!(build_field("bowtie", &bad).is_err());
}
