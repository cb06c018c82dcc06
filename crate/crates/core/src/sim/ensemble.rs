use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::VectorField;
use super::integrate::{dopri5, Control, IntegratorConfig};
use super::itinerary::{Itinerary, Recorder};
use super::skeleton::{seed_point, Arc, Skeleton};
use super::SimConfig;
use crate::error::{Error, Result};
use crate::maps::{followable, local_map};
use crate::network::HeteroclinicNetwork;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberRecord {
    pub member: usize,
    pub seeded_on: (String, String),
    pub itinerary: Itinerary,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObservedPath {
    pub path: Vec<String>,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub member: usize,
    /// Shortest observed prefix declared infeasible.
    pub path: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub field: String,
    pub seed: u64,
    pub samples: usize,
    pub members: Vec<MemberRecord>,
    pub observed: Vec<ObservedPath>,
    pub violations: Vec<Violation>,
    pub terminals: BTreeMap<String, usize>,
    pub prefixes_checked: usize,
}

fn member_rng(seed: u64, member: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member as u64);
    rng
}

fn member_start<'a>(
    field: &VectorField,
    skeleton: &'a Skeleton,
    arcs: &[usize],
    config: &SimConfig,
    member: usize,
) -> (&'a Arc, Vec<f64>) {
    let mut rng = member_rng(config.seed, member);
    let arc = &skeleton.arcs[arcs[rng.gen_range(0..arcs.len())]];
    let x0 = seed_point(field, arc, config.shell, &mut rng);
    (arc, x0)
}

fn seed_arcs(skeleton: &Skeleton, config: &SimConfig) -> Result<Vec<usize>> {
    let arcs: Vec<usize> = (0..skeleton.arcs.len())
        .filter(|a| match &config.start_node {
            Some(s) => skeleton.arcs[*a].to == *s,
            None => true,
        })
        .collect();
    if arcs.is_empty() {
        return Err(Error::Invalid("no connection to seed on".into()));
    }
    Ok(arcs)
}

/// Connection and initial state used by ensemble member `member`.
pub fn member_initial_state(
    field: &VectorField,
    config: &SimConfig,
    member: usize,
) -> Result<((String, String), Vec<f64>)> {
    let skeleton = Skeleton::build(field)?;
    let arcs = seed_arcs(&skeleton, config)?;
    let (arc, x0) = member_start(field, &skeleton, &arcs, config, member);
    Ok(((arc.from.clone(), arc.to.clone()), x0))
}

pub(crate) fn run_member(
    field: &VectorField,
    skeleton: &Skeleton,
    arcs: &[usize],
    config: &SimConfig,
    member: usize,
) -> Result<MemberRecord> {
    let (arc, x0) = member_start(field, skeleton, arcs, config, member);
    let u0 = field.log_state(&x0);
    let mut rec = Recorder::new(field, skeleton, config, Some((&arc.from, &arc.to)))?;
    if rec.start(&u0) == Control::Continue {
        dopri5(
            |u, du| field.rhs_log(u, du),
            &u0,
            config.max_time,
            &config.integrator,
            |seg| rec.feed(seg),
        )?;
    }
    Ok(MemberRecord {
        member,
        seeded_on: (arc.from.clone(), arc.to.clone()),
        itinerary: rec.finish(),
    })
}

/// Integrate an ensemble seeded near the network and check every observed
/// itinerary prefix against the followability verdict of `net`.
pub fn empirical_switching_test(
    field: &VectorField,
    net: &HeteroclinicNetwork,
    config: &SimConfig,
) -> Result<EnsembleResult> {
    if config.samples == 0 {
        return Err(Error::Invalid("ensemble size must be at least 1".into()));
    }
    config.validate(field)?;
    let skeleton = Skeleton::build(field)?;
    let arcs = seed_arcs(&skeleton, config)?;
    let members = (0..config.samples)
        .into_par_iter()
        .map(|m| run_member(field, &skeleton, &arcs, config, m))
        .collect::<Result<Vec<_>>>()?;

    let mut prefixes = BTreeSet::new();
    for m in &members {
        let nodes = m.itinerary.nodes();
        for len in 3..=nodes.len() {
            prefixes.insert(nodes[..len].to_vec());
        }
    }
    let prefixes: Vec<Vec<String>> = prefixes.into_iter().collect();
    let verdicts = prefixes
        .par_iter()
        .map(|p| followable(net, p).map(|v| v.intersects_near_origin))
        .collect::<Result<Vec<_>>>()?;
    let feasible: BTreeMap<&Vec<String>, bool> = prefixes.iter().zip(verdicts).collect();

    let mut violations = Vec::new();
    let mut observed: BTreeMap<Vec<String>, usize> = BTreeMap::new();
    let mut terminals = BTreeMap::new();
    for m in &members {
        let nodes = m.itinerary.nodes();
        if let Some(len) = (3..=nodes.len()).find(|l| !feasible[&nodes[..*l].to_vec()]) {
            violations.push(Violation {
                member: m.member,
                path: nodes[..len].to_vec(),
            });
        }
        *observed.entry(nodes).or_default() += 1;
        *terminals
            .entry(m.itinerary.terminal.as_str().to_string())
            .or_default() += 1;
    }
    Ok(EnsembleResult {
        field: field.name.clone(),
        seed: config.seed,
        samples: config.samples,
        members,
        observed: observed
            .into_iter()
            .map(|(path, count)| ObservedPath { path, count })
            .collect(),
        violations,
        terminals,
        prefixes_checked: prefixes.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExitDeterminism {
    pub node: String,
    /// Returns to `node` that were followed by a recorded exit.
    pub returns: usize,
    /// History (incoming node, first visit, loop, return) and the exits seen after it.
    pub histories: Vec<(Vec<String>, Vec<String>)>,
    pub deterministic: bool,
}

/// After a return to `node`, is the next node a function of the history
/// since the previous visit (including the node before that visit)?
pub fn exit_determinism(result: &EnsembleResult, node: &str) -> ExitDeterminism {
    let mut table: BTreeMap<Vec<String>, BTreeSet<String>> = BTreeMap::new();
    let mut returns = 0;
    for m in &result.members {
        let nodes = m.itinerary.nodes();
        let visits: Vec<usize> = (0..nodes.len()).filter(|i| nodes[*i] == node).collect();
        for w in visits.windows(2) {
            let (p, q) = (w[0], w[1]);
            if p == 0 || q + 1 >= nodes.len() {
                continue;
            }
            returns += 1;
            table
                .entry(nodes[p - 1..=q].to_vec())
                .or_default()
                .insert(nodes[q + 1].clone());
        }
    }
    let deterministic = table.values().all(|s| s.len() == 1);
    ExitDeterminism {
        node: node.to_string(),
        returns,
        histories: table
            .into_iter()
            .map(|(k, v)| (k, v.into_iter().collect()))
            .collect(),
        deterministic,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentFit {
    pub label: String,
    pub expected: f64,
    pub fitted: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegressionReport {
    pub path: [String; 3],
    /// The first entry is the principal exponent `c1/e1` of `v^out`.
    pub fits: Vec<ExponentFit>,
    pub max_relative_error: f64,
}

fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Integrate the linear flow `x' = diag(lambda) x` of node `j` (eigenvalues
/// from `net`) from `H_j^{in,i}` to `H_j^{out,k}` and fit the local-map
/// exponents by log-log regression against `w^in`.
pub fn local_map_regression(
    net: &HeteroclinicNetwork,
    i: &str,
    j: &str,
    k: &str,
    samples: usize,
    seed: u64,
) -> Result<RegressionReport> {
    if samples < 2 {
        return Err(Error::Invalid("regression needs at least two samples".into()));
    }
    let map = local_map(net, i, j, k)?;
    let mut labels = map.in_axes.clone();
    labels.push(map.v_label.clone());
    let lambda: Vec<f64> = labels
        .iter()
        .map(|l| net.eigenvalue(j, l))
        .collect::<Result<_>>()?;
    let w_pos = labels.iter().position(|l| *l == map.w_label).unwrap();
    let v_pos = labels.len() - 1;
    let cfg = IntegratorConfig {
        rtol: 1e-11,
        atol: 1e-300,
        h_max: 1.0,
        ..Default::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ln_w = Vec::new();
    let mut outs: Vec<Vec<f64>> = Vec::new();
    for _ in 0..samples {
        let w = 10f64.powf(rng.gen_range(-6.0..-2.0));
        let mut x0: Vec<f64> = (0..labels.len()).map(|_| rng.gen_range(0.1..1.0)).collect();
        x0[w_pos] = w;
        x0[v_pos] = 1.0;
        let mut hit = None;
        dopri5(
            |x, dx| {
                for ((d, xi), l) in dx.iter_mut().zip(x).zip(&lambda) {
                    *d = l * xi;
                }
            },
            &x0,
            1e6,
            &cfg,
            |seg| {
                if seg.end()[w_pos] < 1.0 {
                    return Control::Continue;
                }
                let (mut a, mut b) = (seg.t0, seg.t1());
                for _ in 0..100 {
                    let m = 0.5 * (a + b);
                    if seg.eval(m)[w_pos] < 1.0 {
                        a = m;
                    } else {
                        b = m;
                    }
                }
                hit = Some(seg.eval(0.5 * (a + b)));
                Control::Stop
            },
        )?;
        let x1 = hit.ok_or_else(|| Error::Integration("section never reached".into()))?;
        ln_w.push(w.ln());
        outs.push(
            (0..labels.len())
                .map(|p| {
                    if p == v_pos {
                        x1[p].ln()
                    } else {
                        (x1[p] / x0[p]).ln()
                    }
                })
                .collect(),
        );
    }
    let mut fits = Vec::new();
    let column = |p: usize| outs.iter().map(|o| o[p]).collect::<Vec<_>>();
    let mut push = |label: &str, expected: f64, fitted: f64| {
        fits.push(ExponentFit {
            label: label.to_string(),
            expected,
            fitted,
            relative_error: (fitted - expected).abs() / expected.abs(),
        })
    };
    push(&map.v_label, map.principal_exponent(), slope(&ln_w, &column(v_pos)));
    for (p, l) in labels.iter().enumerate() {
        if p != w_pos && p != v_pos {
            push(l, map.exponent(l).unwrap(), slope(&ln_w, &column(p)));
        }
    }
    let max_relative_error = fits.iter().map(|f| f.relative_error).fold(0.0, f64::max);
    Ok(RegressionReport {
        path: [i.to_string(), j.to_string(), k.to_string()],
        fits,
        max_relative_error,
    })
}
