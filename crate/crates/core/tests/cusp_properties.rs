mod common;

use heteroswitch::acceptance::random_pair;
use heteroswitch::cusp::{
    cyclic_thin_family, intersects_near_origin, pairwise_rule, sample_oracle, to_log_system,
    Orientation, PairwiseRule, PowerRegion,
};
use proptest::prelude::*;

use common::{random_region, rng};

const COMBOS: [(Orientation, Orientation); 4] = [
    (Orientation::Thin, Orientation::Thin),
    (Orientation::Thin, Orientation::Thick),
    (Orientation::Thick, Orientation::Thin),
    (Orientation::Thick, Orientation::Thick),
];

fn oriented(p: &(PowerRegion, PowerRegion), o: (Orientation, Orientation)) -> Vec<PowerRegion> {
    vec![p.0.with_orientation(o.0), p.1.with_orientation(o.1)]
}

/// Witness points satisfy every log-row once pushed far along the ray, and
/// certificates replay to a contradiction.
fn check_verdict(regions: &[PowerRegion]) -> bool {
    let v = intersects_near_origin(regions).unwrap();
    let sys = to_log_system(regions).unwrap();
    if v.intersects_near_origin {
        let w = v.witness.expect("feasible verdict carries a witness");
        let eta = w.point(1e3);
        eta.iter().all(|e| *e > 0.0) && sys.rows.iter().all(|r| r.holds(&eta))
    } else {
        v.certificate.expect("empty verdict carries a certificate").is_valid(&sys)
    }
}

proptest! {
    #![proptest_config(common::config(48))]

    #[test]
    fn decision_agrees_with_sampling(seed in any::<u64>()) {
        let pair = random_pair(&mut rng(seed));
        for o in COMBOS {
            let regions = oriented(&pair, o);
            let decided = intersects_near_origin(&regions).unwrap().intersects_near_origin;
            for delta in [1e-2, 1e-3] {
                let sampled = sample_oracle(&regions, delta, 100_000, seed).unwrap().nonempty();
                prop_assert_eq!(decided, sampled, "{:?} at delta {}", regions, delta);
            }
        }
    }

    #[test]
    fn pairwise_rule_matches_engine(seed in any::<u64>(), tie in any::<bool>()) {
        let mut pair = random_pair(&mut rng(seed));
        if tie && pair.0.i == pair.1.i && pair.0.j == pair.1.j {
            pair.1.alpha = pair.0.alpha;
        }
        let rule = pairwise_rule(&pair.0, &pair.1);
        for o in COMBOS {
            let decided = intersects_near_origin(&oriented(&pair, o)).unwrap().intersects_near_origin;
            let empty = match &rule {
                PairwiseRule::AlwaysIntersect => false,
                PairwiseRule::SomePairEmpty(list) => list.contains(&o),
            };
            prop_assert_eq!(decided, !empty, "{:?} {:?}", pair, o);
        }
    }

    #[test]
    fn cyclic_thin_families_are_empty(n in 2usize..9, seed in any::<u64>()) {
        let family = cyclic_thin_family(n, &mut rng(seed));
        let v = intersects_near_origin(&family).unwrap();
        prop_assert!(!v.intersects_near_origin);
        prop_assert!(v.certificate.unwrap().is_valid(&to_log_system(&family).unwrap()));
    }

    #[test]
    fn adding_a_region_never_creates_an_intersection(
        n in 2usize..6,
        count in 1usize..6,
        seed in any::<u64>(),
    ) {
        let mut r = rng(seed);
        let mut regions: Vec<PowerRegion> = (0..count).map(|_| random_region(n, &mut r)).collect();
        let before = intersects_near_origin(&regions).unwrap().intersects_near_origin;
        regions.push(random_region(n, &mut r));
        let after = intersects_near_origin(&regions).unwrap().intersects_near_origin;
        prop_assert!(before || !after);
    }

    #[test]
    fn witnesses_and_certificates_replay(n in 2usize..6, count in 1usize..7, seed in any::<u64>()) {
        let mut r = rng(seed);
        let regions: Vec<PowerRegion> = (0..count).map(|_| random_region(n, &mut r)).collect();
        prop_assert!(check_verdict(&regions), "{:?}", regions);
    }
}

#[test]
fn witness_of_a_known_intersection_lies_in_the_regions() {
    // thin V_12(1, 2) and thin V_13(1, 3) share the direction eta = (6, 1, 1)
    let regions = [
        PowerRegion::thin(1, 2, 1.0, 2.0).in_dimension(3),
        PowerRegion::thin(1, 3, 1.0, 3.0).in_dimension(3),
    ];
    let v = intersects_near_origin(&regions).unwrap();
    let eta = v.witness.unwrap().point(10.0);
    let x: Vec<f64> = eta.iter().map(|e| (-e).exp()).collect();
    assert!(regions.iter().all(|r| r.contains(&x)));
}
