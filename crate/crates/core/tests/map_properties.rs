mod common;

use heteroswitch::acceptance::random_rescaling;
use heteroswitch::fixtures;
use heteroswitch::maps::{
    compose_path, domain_c, evaluate_chain, followable, global_map, image_f, local_map,
};
use heteroswitch::network::HeteroclinicNetwork;
use proptest::prelude::*;
use rand::Rng;

use common::{random_simplex_network, random_walk, rng};

fn eta(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| -v.ln()).collect()
}

fn incoming_pairs(net: &HeteroclinicNetwork) -> Vec<(String, String)> {
    net.connections
        .iter()
        .map(|c| (c.from.clone(), c.to.clone()))
        .collect()
}

proptest! {
    #![proptest_config(common::config(64))]

    #[test]
    fn local_map_is_exact_in_log_coordinates(seed in any::<u64>()) {
        let net = random_simplex_network(seed, true);
        let mut r = rng(seed ^ 1);
        let path = random_walk(&net, 3, &mut r);
        let lm = local_map(&net, &path[0], &path[1], &path[2]).unwrap();
        let affine = lm.to_log_affine();
        for _ in 0..20 {
            let x: Vec<f64> = lm.in_axes.iter().map(|_| (-r.gen_range(0.5..8.0f64)).exp()).collect();
            let direct = eta(&lm.apply(&x));
            let via_log = affine.apply(&eta(&x));
            for (a, b) in direct.iter().zip(&via_log) {
                prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn composed_map_matches_chained_evaluation(seed in any::<u64>(), len in 3usize..7) {
        let net = random_simplex_network(seed, false).with_rescales(|_, k| 0.5 + 0.25 * k as f64);
        let mut r = rng(seed ^ 2);
        let path = random_walk(&net, len, &mut r);
        let t = compose_path(&net, &path).unwrap();
        let verdict = followable(&net, &path).unwrap();
        let mut points: Vec<Vec<f64>> = (0..40)
            .map(|_| t.map.in_axes.iter().map(|_| (-r.gen_range(0.5..12.0f64)).exp()).collect())
            .collect();
        if let Some(w) = &verdict.witness {
            for s in [5.0, 20.0] {
                points.push(w.point(s).iter().map(|e| (-e).exp()).collect());
            }
        }
        for x in points {
            let chained = evaluate_chain(&net, &path, &x).unwrap();
            let inside = t.pulled_back.contains(&x);
            prop_assert_eq!(chained.is_some(), inside, "{:?} at {:?}", path, x);
            if let Some(y) = chained {
                if y.iter().any(|v| *v < f64::MIN_POSITIVE || !v.is_finite()) {
                    continue; // underflow of the exact chain
                }
                let composed = t.map.apply(&eta(&x));
                for (a, b) in eta(&y).iter().zip(&composed) {
                    prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0), "{} vs {}", a, b);
                }
            }
        }
    }

    #[test]
    fn domains_partition_incoming_sections(seed in any::<u64>()) {
        let net = random_simplex_network(seed, false);
        let mut r = rng(seed ^ 3);
        for (i, j) in incoming_pairs(&net) {
            let outs = net.successors(&j);
            let domains: Vec<_> = outs.iter().map(|k| domain_c(&net, &i, &j, k).unwrap()).collect();
            for _ in 0..50 {
                let x: Vec<f64> = domains[0].axes.iter().map(|_| (-r.gen_range(0.1..20.0f64)).exp()).collect();
                let hits = domains.iter().filter(|d| d.contains(&x)).count();
                prop_assert_eq!(hits, 1, "{} -> {} at {:?}", i, j, x);
            }
        }
    }

    #[test]
    fn domains_never_overlap(seed in any::<u64>()) {
        let net = random_simplex_network(seed, true);
        let mut r = rng(seed ^ 4);
        for (i, j) in incoming_pairs(&net) {
            let domains: Vec<_> = net.successors(&j).iter().map(|k| domain_c(&net, &i, &j, k).unwrap()).collect();
            for _ in 0..50 {
                let x: Vec<f64> = domains[0].axes.iter().map(|_| (-r.gen_range(0.1..20.0f64)).exp()).collect();
                prop_assert!(domains.iter().filter(|d| d.contains(&x)).count() <= 1);
            }
        }
    }

    #[test]
    fn followable_is_prefix_monotone(seed in any::<u64>(), len in 4usize..8) {
        let net = random_simplex_network(seed, true);
        let path = random_walk(&net, len, &mut rng(seed ^ 5));
        if followable(&net, &path).unwrap().intersects_near_origin {
            for m in 2..len {
                prop_assert!(followable(&net, &path[..m]).unwrap().intersects_near_origin);
            }
        }
    }

    #[test]
    fn verdicts_ignore_rescaling(seed in any::<u64>(), len in 3usize..7) {
        let net = random_simplex_network(seed, true);
        let mut r = rng(seed ^ 6);
        let path = random_walk(&net, len, &mut r);
        let base = followable(&net, &path).unwrap().intersects_near_origin;
        for _ in 0..3 {
            let scaled = random_rescaling(&net, &mut r);
            prop_assert_eq!(followable(&scaled, &path).unwrap().intersects_near_origin, base);
        }
    }
}

#[test]
fn single_connection_is_always_followable() {
    for name in fixtures::NETWORKS {
        let net = fixtures::network(name).unwrap();
        for c in &net.connections {
            assert!(followable(&net, &[&c.from, &c.to]).unwrap().intersects_near_origin);
        }
    }
}

#[test]
fn unit_global_map_is_the_identity() {
    let net = fixtures::network("kirk_silber").unwrap();
    let g = global_map(&net, "xi1", "xi2").unwrap();
    assert!(g.offset.iter().all(|o| *o == 0.0));
    for (row, dst) in g.matrix.iter().zip(&g.out_axes) {
        let src = row.iter().position(|v| *v == 1.0).unwrap();
        assert_eq!(&g.in_axes[src], dst);
        assert_eq!(row.iter().filter(|v| **v != 0.0).count(), 1);
    }
    assert!((g.determinant().abs() - 1.0).abs() < 1e-12);
}

#[test]
fn rescale_enters_as_a_log_offset() {
    let net = fixtures::network("kirk_silber")
        .unwrap()
        .with_rescales(|c, k| if c.from == "xi1" && k == 0 { 4.0 } else { 1.0 });
    let g = global_map(&net, "xi1", "xi2").unwrap();
    let shifted: Vec<f64> = g.offset.iter().filter(|o| **o != 0.0).cloned().collect();
    assert_eq!(shifted.len(), 1);
    assert!((shifted[0] + 4f64.ln()).abs() < 1e-12);
}

#[test]
fn bowtie_centre_domains_are_complements() {
    let net = fixtures::network("bowtie").unwrap();
    let c3 = domain_c(&net, "xi1", "xi2", "xi3").unwrap();
    let c4 = domain_c(&net, "xi1", "xi2", "xi4").unwrap();
    assert_eq!(c3.rows.len(), 1);
    assert!(c3.power_regions()[0].is_some());
    let mut r = rng(7);
    for _ in 0..2000 {
        let x: Vec<f64> = c3.axes.iter().map(|_| (-r.gen_range(0.1..20.0f64)).exp()).collect();
        assert!(c3.contains(&x) != c4.contains(&x));
    }
}

#[test]
fn bowtie_centre_images_are_complements() {
    let net = fixtures::network("bowtie").unwrap();
    let f1 = image_f(&net, "xi1", "xi2", "xi3").unwrap();
    let f5 = image_f(&net, "xi5", "xi2", "xi3").unwrap();
    assert_eq!(f1.axes, f5.axes);
    let mut r = rng(8);
    for _ in 0..2000 {
        let x: Vec<f64> = f1.axes.iter().map(|_| (-r.gen_range(0.1..20.0f64)).exp()).collect();
        assert!(f1.contains(&x) != f5.contains(&x));
    }
}

#[test]
fn single_expanding_direction_gives_the_whole_section() {
    let net = fixtures::network("kirk_silber").unwrap();
    // xi1 has one expanding direction
    let pred = net.predecessors("xi1")[0].to_string();
    assert!(domain_c(&net, &pred, "xi1", "xi2").unwrap().is_whole_section());
}

#[test]
fn house_images_do_not_cover_the_outgoing_section() {
    let net = fixtures::network("house").unwrap();
    let f3 = image_f(&net, "xi3", "xi1", "xi2").unwrap();
    let f5 = image_f(&net, "xi5", "xi1", "xi2").unwrap();
    assert_eq!(f3.axes, f5.axes);
    let mut r = rng(9);
    let outside = (0..5000)
        .filter(|_| {
            let x: Vec<f64> = f3.axes.iter().map(|_| (-r.gen_range(0.1..20.0f64)).exp()).collect();
            !f3.contains(&x) && !f5.contains(&x)
        })
        .count();
    assert!(outside > 0);
}

#[test]
fn r6_listed_sequence_is_followable() {
    let net = fixtures::network("r6_simplex").unwrap();
    assert!(followable(&net, &["xi1", "xi2", "xi5", "xi6"]).unwrap().intersects_near_origin);
}
