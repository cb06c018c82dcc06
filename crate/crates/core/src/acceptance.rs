//! The example-verdict regression suite, shared by the `verify` command and
//! the `acceptance` integration test.

use std::collections::BTreeMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cusp::{
    all_to_all, cyclic_thin_family, intersects_near_origin, pairwise_rule, sample_oracle,
    to_log_system, Orientation, PairwiseRule, PowerRegion,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::maps::followable;
use crate::network::HeteroclinicNetwork;
use crate::sim::{build_field, empirical_switching_test, local_map_regression, SimConfig, FIELD_NAMES};
use crate::switching::{
    connection_criterion, depth_bound, enumerate_followable, network_report_with, node_criterion,
    return_determinism, NetworkReport, ReportOptions, Verdict, DEFAULT_PATH_CAP,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: usize,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>2}. {} ({:.1}s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.name,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcceptanceOptions {
    pub oracle_pairs: usize,
    pub oracle_samples: usize,
    pub families_per_dimension: usize,
    pub sim_samples: usize,
    pub sim_seeds: Vec<u64>,
    pub regression_samples: usize,
    pub rescalings: usize,
}

impl Default for AcceptanceOptions {
    fn default() -> Self {
        AcceptanceOptions {
            oracle_pairs: 1000,
            oracle_samples: 100_000,
            families_per_dimension: 100,
            sim_samples: 1000,
            sim_seeds: vec![1, 2, 3],
            regression_samples: 100,
            rescalings: 100,
        }
    }
}

pub const CRITERIA: [&str; 10] = [
    "two-cusp decision agrees with the sampling oracle",
    "figure configurations reproduce their verdicts",
    "cyclic families of N thin cusps never all intersect",
    "RSP: no switching along connections, k=1 everywhere",
    "bowtie: predetermined exit after one return",
    "R^6 network: three sequences from xi1, k=2, sum 6",
    "Kirk-Silber: node and connection criteria fire",
    "simulated itineraries never contradict the cone engine",
    "local-map exponents recovered from a linear flow",
    "verdicts invariant under rescaled global maps",
];

type Outcome = Result<(bool, String)>;

pub fn run_criterion(id: usize, opts: &AcceptanceOptions) -> CriterionResult {
    let start = Instant::now();
    let outcome: Outcome = match id {
        1 => oracle_agreement(opts),
        2 => figure_cases(),
        3 => cyclic_families(opts),
        4 => rsp_verdict(),
        5 => bowtie_verdict(),
        6 => r6_verdict(),
        7 => kirk_silber_verdict(),
        8 => simulation_soundness(opts),
        9 => local_map_fidelity(opts),
        10 => rescale_invariance(opts),
        _ => Err(Error::Invalid(format!("no acceptance criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult {
        id,
        name: CRITERIA.get(id.wrapping_sub(1)).copied().unwrap_or("unknown").to_string(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all(opts: &AcceptanceOptions) -> Vec<CriterionResult> {
    (1..=CRITERIA.len()).map(|id| run_criterion(id, opts)).collect()
}

/// Constants `ln a` are drawn from `[-0.05, 0.05]`: with exponent
/// separation at least 0.05 and `-ln delta >= 4.6`, the constants cannot
/// move a boundary crossing into the sampled box, so the near-origin verdict
/// is also the verdict on `(0, delta)^N`.
pub const PAIR_LOG_COEFF: f64 = 0.05;
pub const PAIR_SEPARATION: f64 = 0.05;

/// Random pair of power regions: nested (same index pair), opposed
/// (swapped indices) or unrelated, with random orientations.
pub fn random_pair<R: Rng>(rng: &mut R) -> (PowerRegion, PowerRegion) {
    let n = rng.gen_range(2..=6usize);
    let i = rng.gen_range(1..=n);
    let j = loop {
        let j = rng.gen_range(1..=n);
        if j != i {
            break j;
        }
    };
    let kind = if n == 2 { rng.gen_range(0..2) } else { rng.gen_range(0..3) };
    let coeff = |rng: &mut R| rng.gen_range(-PAIR_LOG_COEFF..PAIR_LOG_COEFF).exp();
    let expo = |rng: &mut R| -> f64 { rng.gen_range(0.35..3.0) };
    let alpha = expo(rng);
    let (k, l, beta) = match kind {
        0 => loop {
            let b = expo(rng);
            if (alpha - b).abs() >= PAIR_SEPARATION {
                break (i, j, b);
            }
        },
        1 => loop {
            let b = expo(rng);
            if (alpha * b - 1.0).abs() >= PAIR_SEPARATION {
                break (j, i, b);
            }
        },
        _ => loop {
            let k = rng.gen_range(1..=n);
            let l = rng.gen_range(1..=n);
            if k != l && !((k == i && l == j) || (k == j && l == i)) {
                break (k, l, expo(rng));
            }
        },
    };
    let orient = |rng: &mut R| {
        if rng.gen_bool(0.5) {
            Orientation::Thin
        } else {
            Orientation::Thick
        }
    };
    let a = PowerRegion::thin(i, j, coeff(rng), alpha)
        .in_dimension(n)
        .with_orientation(orient(rng));
    let b = PowerRegion::thin(k, l, coeff(rng), beta)
        .in_dimension(n)
        .with_orientation(orient(rng));
    (a, b)
}

fn rule_says_empty(a: &PowerRegion, b: &PowerRegion) -> bool {
    match pairwise_rule(a, b) {
        PairwiseRule::AlwaysIntersect => false,
        PairwiseRule::SomePairEmpty(e) => e.contains(&(a.orientation, b.orientation)),
    }
}

fn oracle_agreement(opts: &AcceptanceOptions) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_501);
    let mut disagreements = Vec::new();
    let mut rule_mismatch = 0;
    let mut empty = 0;
    for p in 0..opts.oracle_pairs {
        let (a, b) = random_pair(&mut rng);
        let pair = [a.clone(), b.clone()];
        let decided = intersects_near_origin(&pair)?.intersects_near_origin;
        if !decided {
            empty += 1;
        }
        if rule_says_empty(&a, &b) == decided {
            rule_mismatch += 1;
        }
        for delta in [1e-2, 1e-3] {
            let o = sample_oracle(&pair, delta, opts.oracle_samples, p as u64)?;
            if o.nonempty() != decided {
                disagreements.push(format!("pair {p} delta {delta}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = disagreements.is_empty() && rule_mismatch == 0 && secs < 60.0;
    Ok((
        ok,
        format!(
            "{} pairs ({} empty), {} oracle disagreements, {} closed-form mismatches, {:.1}s{}",
            opts.oracle_pairs,
            empty,
            disagreements.len(),
            rule_mismatch,
            secs,
            disagreements
                .first()
                .map(|d| format!("; first: {d}"))
                .unwrap_or_default()
        ),
    ))
}

fn figure_cases() -> Outcome {
    let mut cases: Vec<(String, Vec<PowerRegion>, bool)> = Vec::new();
    for (name, expected) in [
        ("fig3", false),
        ("fig3_nested", true),
        ("fig4", false),
        ("fig6", false),
        ("fig7a", false),
        ("fig7b", false),
    ] {
        cases.push((name.to_string(), fixtures::cusps(name)?, expected));
    }
    // the triple configurations with the inequality between the exponents reversed
    let mut a = fixtures::cusps("fig7a")?;
    a[1].alpha = 6.0;
    cases.push(("fig7a with beta > alpha gamma".into(), a, true));
    let mut b = fixtures::cusps("fig7b")?;
    b[1].alpha = 3.0;
    cases.push(("fig7b with beta < alpha gamma".into(), b, true));

    let mut wrong = Vec::new();
    for (name, regions, expected) in &cases {
        let v = intersects_near_origin(regions)?;
        let checked = match (&v.witness, &v.certificate) {
            (_, Some(c)) => c.is_valid(&to_log_system(regions)?),
            (Some(_), None) => true,
            _ => false,
        };
        if v.intersects_near_origin != *expected || !checked {
            wrong.push(name.clone());
        }
    }
    let fig5 = all_to_all(&fixtures::cusps("fig5")?)?;
    if !fig5.holds {
        wrong.push("fig5".into());
    }
    Ok((
        wrong.is_empty(),
        if wrong.is_empty() {
            format!("{} configurations match", cases.len() + 1)
        } else {
            format!("mismatch: {}", wrong.join(", "))
        },
    ))
}

fn cyclic_families(opts: &AcceptanceOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut bad = 0;
    let mut total = 0;
    for n in 3..=6 {
        for _ in 0..opts.families_per_dimension {
            total += 1;
            let family = cyclic_thin_family(n, &mut rng);
            let r = all_to_all(&family)?;
            let certified = match &r.empty_combination {
                Some((orient, verdict)) => {
                    let combo: Vec<PowerRegion> = family
                        .iter()
                        .zip(orient)
                        .map(|(f, o)| f.with_orientation(*o))
                        .collect();
                    verdict
                        .certificate
                        .as_ref()
                        .is_some_and(|c| c.is_valid(&to_log_system(&combo).unwrap()))
                }
                None => false,
            };
            if r.holds || !certified {
                bad += 1;
            }
        }
    }
    Ok((
        bad == 0,
        format!("{total} families, {bad} without a replayable emptiness certificate"),
    ))
}

fn analysis_options() -> ReportOptions {
    ReportOptions {
        witness_depth: 4,
        departure_samples: 1000,
        ..ReportOptions::default()
    }
}

fn rsp_verdict() -> Outcome {
    let net = fixtures::network("rsp")?;
    let report = network_report_with(&net, &analysis_options())?;
    let all_conn = report
        .connection_verdicts
        .iter()
        .all(|v| v.verdict == Verdict::NoSwitching);
    let ks: Vec<usize> = net
        .sorted_ids()
        .iter()
        .map(|id| depth_bound(&net, id).map(|b| b.k))
        .collect::<Result<_>>()?;
    let ok = all_conn
        && ks.iter().all(|k| *k == 1)
        && report.headline.contains("no switching along any connection");
    Ok((
        ok,
        format!(
            "{} connections, all no-switching: {all_conn}; k per node {:?}",
            report.connection_verdicts.len(),
            ks
        ),
    ))
}

fn bowtie_verdict() -> Outcome {
    let net = fixtures::network("bowtie")?;
    let centre = "xi2";
    let rd = return_determinism(&net, centre)?;
    // every (incoming, first exit, second exit) combination with the second
    // exit differing from the first must be empty
    let mut combos = 0;
    let mut feasible_changes = Vec::new();
    for c in &rd.choices {
        for k in net.successors(centre) {
            let mut path = vec![c.incoming.clone()];
            path.extend(c.route.iter().cloned());
            path.push(k.to_string());
            combos += 1;
            let f = followable(&net, &path)?.intersects_near_origin;
            if f != (k == c.route[1]) {
                feasible_changes.push(path.join("->"));
            }
        }
    }
    let ok = rd.predetermined && feasible_changes.is_empty() && !rd.choices.is_empty();
    Ok((
        ok,
        format!(
            "{} return histories, {combos} combinations; second exit equals the first in each{}",
            rd.choices.len(),
            if feasible_changes.is_empty() {
                String::new()
            } else {
                format!("; unexpected: {}", feasible_changes.join(", "))
            }
        ),
    ))
}

fn r6_verdict() -> Outcome {
    let net = fixtures::network("r6_simplex")?;
    let e = enumerate_followable(&net, "xi1", 3, DEFAULT_PATH_CAP)?;
    let mut got: Vec<Vec<String>> = e.feasible_paths().into_iter().cloned().collect();
    got.sort();
    let listed: Vec<Vec<String>> = [
        ["xi1", "xi2", "xi3", "xi1"],
        ["xi1", "xi2", "xi5", "xi6"],
        ["xi1", "xi4", "xi5", "xi6"],
    ]
    .iter()
    .map(|p| p.iter().map(|s| s.to_string()).collect())
    .collect();
    let b = depth_bound(&net, "xi1")?;
    let ok = got == listed && b.k == 2 && b.sum == 6 && b.dimension == 4;
    Ok((
        ok,
        format!(
            "{} feasible sequences {}; k={} sum={} N={}",
            got.len(),
            if got == listed { "as listed" } else { "differ from the list" },
            b.k,
            b.sum,
            b.dimension
        ),
    ))
}

fn kirk_silber_verdict() -> Outcome {
    let net = fixtures::network("kirk_silber")?;
    let firing: Vec<String> = net
        .sorted_ids()
        .iter()
        .filter_map(|id| node_criterion(&net, id).ok())
        .filter(|v| v.verdict == Verdict::NoSwitching)
        .map(|v| format!("{:?}", v.scope))
        .collect();
    let conn = connection_criterion(&net, "xi1", "xi2")?;
    let mut feasible = 0;
    let mut total = 0;
    for i in net.predecessors("xi1") {
        for k in net.successors("xi2") {
            total += 1;
            if followable(&net, &[i, "xi1", "xi2", k])?.intersects_near_origin {
                feasible += 1;
            }
        }
    }
    let ok = !firing.is_empty()
        && net.cross_section_dimension == 2
        && conn.verdict == Verdict::NoSwitching
        && total == 4
        && feasible < total;
    Ok((
        ok,
        format!(
            "node criterion at {}; connection criterion: {:?}; {feasible} of {total} combinations feasible",
            firing.len(),
            conn.verdict
        ),
    ))
}

fn simulation_soundness(opts: &AcceptanceOptions) -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut violations = 0;
    let mut departed = 0;
    let mut total = 0;
    for name in FIELD_NAMES {
        let field = build_field(name, &BTreeMap::new())?;
        for seed in &opts.sim_seeds {
            let cfg = SimConfig {
                seed: *seed,
                samples: opts.sim_samples,
                ..SimConfig::default()
            };
            let r = empirical_switching_test(&field, &field.network, &cfg)?;
            violations += r.violations.len();
            departed += r.terminals.get("departed").copied().unwrap_or(0);
            total += r.samples;
            if !r.violations.is_empty() {
                lines.push(format!("{name} seed {seed}: {}", r.violations.len()));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        violations == 0 && secs < 600.0,
        format!(
            "{total} trajectories over {} fields, {violations} violations, {departed} departed, {secs:.0}s{}",
            FIELD_NAMES.len(),
            if lines.is_empty() {
                String::new()
            } else {
                format!("; {}", lines.join(", "))
            }
        ),
    ))
}

fn local_map_fidelity(opts: &AcceptanceOptions) -> Outcome {
    let mut worst: (f64, String) = (0.0, String::new());
    let mut triples = 0;
    for name in fixtures::NETWORKS {
        let net = fixtures::network(name)?;
        for c1 in &net.connections {
            for c2 in net.connections.iter().filter(|c| c.from == c1.to) {
                triples += 1;
                let r = local_map_regression(
                    &net,
                    &c1.from,
                    &c1.to,
                    &c2.to,
                    opts.regression_samples,
                    triples as u64,
                )?;
                if r.max_relative_error >= worst.0 {
                    worst = (
                        r.max_relative_error,
                        format!("{name} {}->{}->{}", c1.from, c1.to, c2.to),
                    );
                }
            }
        }
    }
    Ok((
        worst.0 < 0.05,
        format!(
            "{triples} node passages, largest relative exponent error {:.2e} ({})",
            worst.0, worst.1
        ),
    ))
}

/// The parts of a report that must not depend on the global-map constants.
fn fingerprint(r: &NetworkReport) -> String {
    let mut r = r.clone();
    for d in &mut r.departure_sets {
        d.sampled_outside_fraction = 0.0;
    }
    r.network.clear();
    serde_json::to_string(&(
        &r.headline,
        &r.node_verdicts,
        &r.connection_verdicts,
        &r.depth_bounds,
        &r.enumerations,
        &r.returns,
        &r.finite_switching_witness,
        r.departure_sets.iter().map(|d| d.non_covering).collect::<Vec<_>>(),
    ))
    .expect("report serializes")
}

pub fn random_rescaling<R: Rng>(net: &HeteroclinicNetwork, rng: &mut R) -> HeteroclinicNetwork {
    net.with_rescales(|_, _| 10f64.powf(rng.gen_range(-2.0..2.0)))
}

fn rescale_invariance(opts: &AcceptanceOptions) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let ropts = ReportOptions {
        witness_depth: 4,
        departure_samples: 200,
        ..ReportOptions::default()
    };
    let mut changed = Vec::new();
    let mut runs = 0;
    for name in fixtures::NETWORKS {
        let net = fixtures::network(name)?;
        let base = fingerprint(&network_report_with(&net, &ropts)?);
        for _ in 0..opts.rescalings {
            runs += 1;
            let scaled = random_rescaling(&net, &mut rng);
            if fingerprint(&network_report_with(&scaled, &ropts)?) != base {
                changed.push(name);
            }
        }
    }
    changed.dedup();
    Ok((
        changed.is_empty(),
        format!(
            "{runs} rescaled networks, verdicts changed in: {}",
            if changed.is_empty() { "none".to_string() } else { changed.join(", ") }
        ),
    ))
}
