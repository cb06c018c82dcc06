//! Network-level switching verdicts: the counting criteria at nodes,
//! connections and shared sequences, the distribution-node depth bound, and
//! constructive enumeration of followable paths.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::maps::{self, followable};
use crate::network::{
    distribution_nodes, enumerate_cycles, validate_quasi_simple, HeteroclinicNetwork,
    ValidationReport, DEFAULT_CYCLE_CAP,
};

pub const DEFAULT_PATH_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "at")]
pub enum Scope {
    Node(String),
    Connection(String, String),
    Sequence(Vec<String>),
    Network,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NoSwitching,
    SwitchingPossibleBounded,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arithmetic {
    pub n_c: usize,
    pub n_e: usize,
    pub dimension: usize,
    pub sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingVerdict {
    pub scope: Scope,
    pub verdict: Verdict,
    pub rationale: String,
    pub arithmetic: Arithmetic,
    /// For `no_switching`: whether the cone engine finds an infeasible
    /// combination of incoming and onward connections around the scope.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub confirmed_by_geometry: Option<bool>,
}

/// A node with `n_c = N` or `n_e = N` rules out switching in the whole network.
pub fn node_criterion(net: &HeteroclinicNetwork, j: &str) -> Result<SwitchingVerdict> {
    let node = net.node(j)?;
    let n = net.cross_section_dimension;
    let (verdict, rationale) = if node.n_c == n {
        (
            Verdict::NoSwitching,
            format!("n_c = {} = N at {j}: 2 n_c = {} > N pairs of cusps cannot all intersect", node.n_c, 2 * node.n_c),
        )
    } else if node.n_e == n {
        (
            Verdict::NoSwitching,
            format!("n_e = {} = N at {j}: 2 n_e = {} > N pairs of cusps cannot all intersect", node.n_e, 2 * node.n_e),
        )
    } else {
        (
            Verdict::Inconclusive,
            format!("n_c = {}, n_e = {}, neither equals N = {n}", node.n_c, node.n_e),
        )
    };
    Ok(SwitchingVerdict {
        scope: Scope::Node(j.to_string()),
        verdict,
        rationale,
        arithmetic: Arithmetic {
            n_c: node.n_c,
            n_e: node.n_e,
            dimension: n,
            sum: node.n_c.max(node.n_e),
        },
        confirmed_by_geometry: None,
    })
}

fn cycles_through_chain(net: &HeteroclinicNetwork, seq: &[String]) -> Result<usize> {
    let cycles = enumerate_cycles(net, DEFAULT_CYCLE_CAP)?;
    Ok(cycles
        .iter()
        .filter(|c| {
            let len = c.len();
            seq.windows(2).all(|w| {
                (0..len).any(|p| c[p] == w[0] && c[(p + 1) % len] == w[1])
            })
        })
        .count())
}

/// Counting criterion for a chain shared by two cycles: no switching when
/// `n_c(first) + n_e(last) >= N`.
pub fn sequence_criterion<S: AsRef<str>>(
    net: &HeteroclinicNetwork,
    seq: &[S],
) -> Result<SwitchingVerdict> {
    let seq: Vec<String> = seq.iter().map(|s| s.as_ref().to_string()).collect();
    if seq.len() < 2 {
        return Err(Error::ShortPath {
            min: 2,
            got: seq.len(),
        });
    }
    for w in seq.windows(2) {
        net.connection(&w[0], &w[1])?;
    }
    let first = net.node(&seq[0])?;
    let last = net.node(seq.last().unwrap())?;
    let n = net.cross_section_dimension;
    let arithmetic = Arithmetic {
        n_c: first.n_c,
        n_e: last.n_e,
        dimension: n,
        sum: first.n_c + last.n_e,
    };
    let scope = if seq.len() == 2 {
        Scope::Connection(seq[0].clone(), seq[1].clone())
    } else {
        Scope::Sequence(seq.clone())
    };
    let shared = cycles_through_chain(net, &seq)?;
    let (verdict, rationale) = if shared < 2 {
        (
            Verdict::Inconclusive,
            format!("chain lies on {shared} cycle(s); the criterion needs two"),
        )
    } else if n == 2 {
        (
            Verdict::NoSwitching,
            "cross sections have dimension N = 2".to_string(),
        )
    } else if arithmetic.sum >= n {
        (
            Verdict::NoSwitching,
            format!(
                "n_c({}) + n_e({}) = {} + {} = {} >= N = {n}",
                seq[0],
                seq.last().unwrap(),
                first.n_c,
                last.n_e,
                arithmetic.sum
            ),
        )
    } else {
        (
            Verdict::Inconclusive,
            format!(
                "n_c({}) + n_e({}) = {} < N = {n}",
                seq[0],
                seq.last().unwrap(),
                arithmetic.sum
            ),
        )
    };
    Ok(SwitchingVerdict {
        scope,
        verdict,
        rationale,
        arithmetic,
        confirmed_by_geometry: None,
    })
}

pub fn connection_criterion(
    net: &HeteroclinicNetwork,
    from: &str,
    to: &str,
) -> Result<SwitchingVerdict> {
    sequence_criterion(net, &[from, to])
}

/// Cone-engine check of a counting verdict: true when some path that enters
/// the scope from an incoming connection and continues to an onward choice is
/// not followable.
pub fn confirm_chain(net: &HeteroclinicNetwork, seq: &[String]) -> Result<bool> {
    let first = &seq[0];
    let last = seq.last().unwrap();
    let mut onward = vec![];
    extend_to_choice(net, vec![last.clone()], &mut onward, net.nodes.len() + 1);
    for i in net.predecessors(first) {
        for tail in &onward {
            let mut path = vec![i.to_string()];
            path.extend(seq.iter().cloned());
            path.extend(tail.iter().skip(1).cloned());
            if !followable(net, &path)?.intersects_near_origin {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Extend `prefix` through single-exit nodes until a choice has been made at
/// a distribution node (or the length limit is hit).
fn extend_to_choice(
    net: &HeteroclinicNetwork,
    prefix: Vec<String>,
    out: &mut Vec<Vec<String>>,
    limit: usize,
) {
    let last = prefix.last().unwrap().clone();
    let succ = net.successors(&last);
    if succ.len() >= 2 || prefix.len() > limit {
        for s in succ {
            let mut p = prefix.clone();
            p.push(s.to_string());
            out.push(p);
        }
        return;
    }
    for s in succ {
        let mut p = prefix.clone();
        p.push(s.to_string());
        extend_to_choice(net, p, out, limit);
    }
}

/// Node-level confirmation: arrive at `j` from each incoming connection and
/// continue to the first distribution node after `j` and one exit from it.
pub fn confirm_node(net: &HeteroclinicNetwork, j: &str) -> Result<bool> {
    let mut tails = vec![];
    for s in net.successors(j) {
        extend_to_choice(net, vec![j.to_string(), s.to_string()], &mut tails, net.nodes.len() + 2);
    }
    for i in net.predecessors(j) {
        for tail in &tails {
            let mut path = vec![i.to_string()];
            path.extend(tail.iter().cloned());
            if !followable(net, &path)?.intersects_near_origin {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequenceSum {
    /// Distribution nodes `j_0, j_1, ..., j_k`.
    pub nodes: Vec<String>,
    pub k: usize,
    pub sum: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthBound {
    pub start: String,
    /// Largest per-sequence count.
    pub k: usize,
    /// Smallest accumulated sum among the sequences attaining `k`.
    pub sum: usize,
    pub dimension: usize,
    pub sequences: Vec<SequenceSum>,
    /// Most distribution nodes on a simple cycle through `start`.
    pub cycle_bound: usize,
}

/// Distribution nodes reached first along each route out of `d`.
fn next_distribution(net: &HeteroclinicNetwork, d: &str) -> BTreeSet<String> {
    let mut found = BTreeSet::new();
    for s in net.successors(d) {
        let mut cur = s.to_string();
        let mut steps = 0;
        loop {
            if net.out_degree(&cur) >= 2 {
                found.insert(cur);
                break;
            }
            let succ = net.successors(&cur);
            if succ.is_empty() || steps > net.nodes.len() {
                break;
            }
            cur = succ[0].to_string();
            steps += 1;
        }
    }
    found
}

/// Smallest `k` with `sum_{i=1..k} (n_c(j_i) + n_e(j_{i-1})) >= N`, per
/// sequence of distribution nodes from `start`.
pub fn depth_bound(net: &HeteroclinicNetwork, start: &str) -> Result<DepthBound> {
    net.node(start)?;
    if net.out_degree(start) < 2 {
        return Err(Error::NotDistribution(start.to_string()));
    }
    let n = net.cross_section_dimension;
    let mut sequences = Vec::new();
    let mut frontier = vec![(vec![start.to_string()], 0usize)];
    while let Some((seq, sum)) = frontier.pop() {
        let last = seq.last().unwrap();
        let e_prev = net.node(last)?.n_e;
        for nxt in next_distribution(net, last) {
            let s = sum + net.node(&nxt)?.n_c + e_prev;
            let mut ext = seq.clone();
            ext.push(nxt);
            if s >= n {
                let k = ext.len() - 1;
                sequences.push(SequenceSum {
                    nodes: ext,
                    k,
                    sum: s,
                });
            } else {
                frontier.push((ext, s));
            }
        }
    }
    sequences.sort_by(|a, b| a.nodes.cmp(&b.nodes));
    let k = sequences.iter().map(|s| s.k).max().unwrap_or(0);
    let sum = sequences
        .iter()
        .filter(|s| s.k == k)
        .map(|s| s.sum)
        .min()
        .unwrap_or(0);
    let cycle_bound = enumerate_cycles(net, DEFAULT_CYCLE_CAP)?
        .iter()
        .filter(|c| c.iter().any(|v| v == start))
        .map(|c| c.iter().filter(|v| net.out_degree(v) >= 2).count())
        .max()
        .unwrap_or(0);
    Ok(DepthBound {
        start: start.to_string(),
        k,
        sum,
        dimension: n,
        sequences,
        cycle_bound,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IncomingVerdict {
    pub from: String,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathVerdict {
    /// Starts at the enumeration start node.
    pub path: Vec<String>,
    /// Followable when entering the start node along at least one connection.
    pub feasible: bool,
    pub by_incoming: Vec<IncomingVerdict>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enumeration {
    pub start: String,
    pub depth: usize,
    pub paths: Vec<PathVerdict>,
    pub feasible_count: usize,
}

impl Enumeration {
    pub fn feasible_paths(&self) -> Vec<&Vec<String>> {
        self.paths
            .iter()
            .filter(|p| p.feasible)
            .map(|p| &p.path)
            .collect()
    }
}

/// All directed paths of exactly `depth` connections from `start`, in
/// lexicographic order.
pub fn paths_from(
    net: &HeteroclinicNetwork,
    start: &str,
    depth: usize,
    cap: usize,
) -> Result<Vec<Vec<String>>> {
    net.node(start)?;
    let mut paths = vec![vec![start.to_string()]];
    for _ in 0..depth {
        let mut next = Vec::new();
        for p in &paths {
            for s in net.successors(p.last().unwrap()) {
                let mut q = p.clone();
                q.push(s.to_string());
                next.push(q);
                if next.len() > cap {
                    return Err(Error::PathCap(cap));
                }
            }
        }
        paths = next;
    }
    Ok(paths)
}

/// Followability of every path of `depth` connections out of `start`, each
/// judged from every incoming section of `start`.
pub fn enumerate_followable(
    net: &HeteroclinicNetwork,
    start: &str,
    depth: usize,
    cap: usize,
) -> Result<Enumeration> {
    if depth == 0 {
        return Err(Error::Invalid("depth must be at least 1".into()));
    }
    let paths = paths_from(net, start, depth, cap)?;
    let incoming: Vec<String> = net.predecessors(start).iter().map(|s| s.to_string()).collect();
    let verdicts: Vec<Result<PathVerdict>> = paths
        .into_par_iter()
        .map(|path| {
            let mut by_incoming = Vec::with_capacity(incoming.len());
            for i in &incoming {
                let mut full = vec![i.clone()];
                full.extend(path.iter().cloned());
                by_incoming.push(IncomingVerdict {
                    from: i.clone(),
                    feasible: followable(net, &full)?.intersects_near_origin,
                });
            }
            Ok(PathVerdict {
                feasible: by_incoming.iter().any(|v| v.feasible),
                path,
                by_incoming,
            })
        })
        .collect();
    let paths = verdicts.into_iter().collect::<Result<Vec<_>>>()?;
    let feasible_count = paths.iter().filter(|p| p.feasible).count();
    Ok(Enumeration {
        start: start.to_string(),
        depth,
        paths,
        feasible_count,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnChoice {
    pub incoming: String,
    /// Route from the node back to itself, first exit included.
    pub route: Vec<String>,
    /// Exits that remain followable after the return.
    pub second_exits: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReturnDeterminism {
    pub node: String,
    pub predetermined: bool,
    pub choices: Vec<ReturnChoice>,
}

/// After one return along a simple cycle, how many exits remain followable
/// for each arrival history.
pub fn return_determinism(net: &HeteroclinicNetwork, d: &str) -> Result<ReturnDeterminism> {
    let cycles = enumerate_cycles(net, DEFAULT_CYCLE_CAP)?;
    let mut routes: Vec<Vec<String>> = cycles
        .iter()
        .filter_map(|c| {
            let p = c.iter().position(|v| v == d)?;
            let mut r: Vec<String> = c[p..].iter().chain(&c[..p]).cloned().collect();
            r.push(d.to_string());
            Some(r)
        })
        .collect();
    routes.sort();
    let mut choices = Vec::new();
    for i in net.predecessors(d) {
        for r in &routes {
            let mut second = Vec::new();
            for x in net.successors(d) {
                let mut path = vec![i.to_string()];
                path.extend(r.iter().cloned());
                path.push(x.to_string());
                if followable(net, &path)?.intersects_near_origin {
                    second.push(x.to_string());
                }
            }
            choices.push(ReturnChoice {
                incoming: i.to_string(),
                route: r.clone(),
                second_exits: second,
            });
        }
    }
    let predetermined = choices.iter().all(|c| c.second_exits.len() <= 1);
    Ok(ReturnDeterminism {
        node: d.to_string(),
        predetermined,
        choices,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepartureSet {
    pub node: String,
    pub outgoing: String,
    pub incoming: Vec<String>,
    /// The images of all incoming sections leave part of the outgoing section uncovered.
    pub non_covering: bool,
    /// Fraction of sampled section points outside every image.
    pub sampled_outside_fraction: f64,
}

/// Sampled check whether the images `F_{ijk}` over all incoming `i` cover
/// `H_j^{out,k}` near the connection. Points outside every image are
/// reached by no trajectory staying close to the network.
pub fn departure_set(
    net: &HeteroclinicNetwork,
    j: &str,
    k: &str,
    samples: usize,
    seed: u64,
) -> Result<DepartureSet> {
    let incoming: Vec<String> = net.predecessors(j).iter().map(|s| s.to_string()).collect();
    let images = incoming
        .iter()
        .map(|i| maps::image_f(net, i, j, k))
        .collect::<Result<Vec<_>>>()?;
    let dim = images[0].axes.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (-(0.01f64).ln(), -(0.01f64).ln() * 30.0);
    let mut outside = 0;
    let mut eta = vec![0.0; dim];
    for _ in 0..samples {
        for v in eta.iter_mut() {
            *v = rng.gen_range(lo..hi);
        }
        if !images.iter().any(|f| f.rows.iter().all(|r| r.holds(&eta))) {
            outside += 1;
        }
    }
    let frac = outside as f64 / samples.max(1) as f64;
    Ok(DepartureSet {
        node: j.to_string(),
        outgoing: k.to_string(),
        incoming,
        non_covering: outside > 0,
        sampled_outside_fraction: frac,
    })
}

/// A finite path that is not followable from any incoming section, searched
/// by increasing depth from each distribution node.
pub fn finite_switching_witness(
    net: &HeteroclinicNetwork,
    max_depth: usize,
) -> Result<Option<Vec<String>>> {
    for depth in 1..=max_depth {
        for d in distribution_nodes(net) {
            let e = enumerate_followable(net, &d, depth, DEFAULT_PATH_CAP)?;
            if let Some(p) = e.paths.iter().find(|p| !p.feasible) {
                return Ok(Some(p.path.clone()));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationSummary {
    pub start: String,
    pub depth: usize,
    pub total: usize,
    pub feasible: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkReport {
    pub network: String,
    pub dimension: usize,
    pub headline: String,
    pub validation: ValidationReport,
    pub distribution_nodes: Vec<String>,
    pub node_verdicts: Vec<SwitchingVerdict>,
    pub connection_verdicts: Vec<SwitchingVerdict>,
    pub depth_bounds: Vec<DepthBound>,
    pub enumerations: Vec<EnumerationSummary>,
    pub returns: Vec<ReturnDeterminism>,
    pub departure_sets: Vec<DepartureSet>,
    pub finite_switching_witness: Option<Vec<String>>,
    pub notes: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subnetworks: Vec<NetworkReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Enumerate paths from each distribution node up to `k + extra_depth`.
    pub extra_depth: usize,
    pub witness_depth: usize,
    pub departure_samples: usize,
    pub geometry: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            extra_depth: 2,
            witness_depth: 8,
            departure_samples: 4000,
            geometry: true,
        }
    }
}

pub fn network_report(net: &HeteroclinicNetwork) -> Result<NetworkReport> {
    network_report_with(net, &ReportOptions::default())
}

pub fn network_report_with(
    net: &HeteroclinicNetwork,
    opts: &ReportOptions,
) -> Result<NetworkReport> {
    if net.has_parallel_connections() {
        let subs = net
            .subnetworks()
            .iter()
            .map(|s| network_report_with(s, opts))
            .collect::<Result<Vec<_>>>()?;
        return Ok(NetworkReport {
            network: net.name.clone(),
            dimension: net.cross_section_dimension,
            headline: "no infinite switching; parallel connections analysed per sub-network"
                .into(),
            validation: validate_quasi_simple(net),
            distribution_nodes: distribution_nodes(net),
            node_verdicts: vec![],
            connection_verdicts: vec![],
            depth_bounds: vec![],
            enumerations: vec![],
            returns: vec![],
            departure_sets: vec![],
            finite_switching_witness: None,
            notes: vec!["verdicts are reported per sub-network and not merged".into()],
            subnetworks: subs,
        });
    }

    let validation = validate_quasi_simple(net);
    let dist = distribution_nodes(net);
    let mut notes = Vec::new();

    let mut node_verdicts = Vec::new();
    for id in net.sorted_ids() {
        let mut v = node_criterion(net, id)?;
        if opts.geometry && v.verdict == Verdict::NoSwitching {
            v.confirmed_by_geometry = Some(confirm_node(net, id)?);
        }
        node_verdicts.push(v);
    }
    let mut pairs: Vec<(String, String)> = net
        .connections
        .iter()
        .map(|c| (c.from.clone(), c.to.clone()))
        .collect();
    pairs.sort();
    pairs.dedup();
    let mut connection_verdicts = Vec::new();
    for (a, b) in &pairs {
        let mut v = connection_criterion(net, a, b)?;
        if opts.geometry && v.verdict == Verdict::NoSwitching {
            v.confirmed_by_geometry = Some(confirm_chain(net, &[a.clone(), b.clone()])?);
        }
        connection_verdicts.push(v);
    }

    let depth_bounds = dist
        .iter()
        .map(|d| depth_bound(net, d))
        .collect::<Result<Vec<_>>>()?;

    let mut enumerations = Vec::new();
    let mut returns = Vec::new();
    if opts.geometry {
        for b in &depth_bounds {
            let max_depth = (b.k + opts.extra_depth).max(1);
            for depth in 1..=max_depth {
                let e = enumerate_followable(net, &b.start, depth, DEFAULT_PATH_CAP)?;
                enumerations.push(EnumerationSummary {
                    start: b.start.clone(),
                    depth,
                    total: e.paths.len(),
                    feasible: e.feasible_count,
                });
            }
        }
        for d in &dist {
            returns.push(return_determinism(net, d)?);
        }
    }

    let mut departure_sets = Vec::new();
    if opts.geometry {
        for node in &net.nodes {
            if node.n_t == 0 {
                continue;
            }
            for k in net.successors(&node.id) {
                departure_sets.push(departure_set(
                    net,
                    &node.id,
                    k,
                    opts.departure_samples,
                    0x5eed,
                )?);
            }
        }
    }
    departure_sets.sort_by(|a, b| (&a.node, &a.outgoing).cmp(&(&b.node, &b.outgoing)));

    let witness = if opts.geometry {
        finite_switching_witness(net, opts.witness_depth)?
    } else {
        None
    };

    let mut headline = vec!["no infinite switching".to_string()];
    if !connection_verdicts.is_empty()
        && connection_verdicts
            .iter()
            .all(|v| v.verdict == Verdict::NoSwitching)
    {
        headline.push("no switching along any connection".into());
    }
    if let Some(v) = node_verdicts.iter().find(|v| v.verdict == Verdict::NoSwitching) {
        if let Scope::Node(id) = &v.scope {
            headline.push(format!("no switching in the network (node criterion at {id})"));
        }
    }
    let ks: BTreeSet<usize> = depth_bounds.iter().map(|b| b.k).collect();
    if ks.len() == 1 && depth_bounds.len() == net.nodes.len() {
        headline.push(format!("k={} everywhere", ks.iter().next().unwrap()));
    } else {
        let by: BTreeMap<&str, usize> = depth_bounds.iter().map(|b| (b.start.as_str(), b.k)).collect();
        if !by.is_empty() {
            headline.push(format!(
                "depth bounds {}",
                by.iter()
                    .map(|(s, k)| format!("k({s})={k}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
        }
    }
    if !returns.is_empty() && returns.iter().all(|r| r.predetermined) {
        headline.push("predetermined outgoing cross section after one return".into());
    }
    if departure_sets.iter().any(|d| d.non_covering) {
        headline.push("some trajectories depart the network".into());
        notes.push(
            "points of an outgoing section outside every image do not remain close to the network"
                .into(),
        );
    }
    if net.nodes.iter().any(|n| {
        n.eigenvalues
            .iter()
            .any(|e| e.klass == crate::network::Klass::Transverse && e.value > 0.0)
    }) {
        notes.push("positive transverse eigenvalues: the network is not asymptotically stable".into());
    }
    let unconfirmed: Vec<String> = node_verdicts
        .iter()
        .chain(&connection_verdicts)
        .filter(|v| v.confirmed_by_geometry == Some(false))
        .map(|v| match &v.scope {
            Scope::Node(id) => id.clone(),
            Scope::Connection(a, b) => format!("{a}->{b}"),
            Scope::Sequence(s) => s.join("->"),
            Scope::Network => "network".into(),
        })
        .collect();
    if !unconfirmed.is_empty() {
        notes.push(format!(
            "counting verdicts without an infeasible combination at the leading-order geometry: {}",
            unconfirmed.join(", ")
        ));
    }
    if !validation.ok {
        notes.push("network failed validation; verdicts assume the declared classification".into());
    }

    Ok(NetworkReport {
        network: net.name.clone(),
        dimension: net.cross_section_dimension,
        headline: headline.join("; "),
        validation,
        distribution_nodes: dist,
        node_verdicts,
        connection_verdicts,
        depth_bounds,
        enumerations,
        returns,
        departure_sets,
        finite_switching_witness: witness,
        notes,
        subnetworks: vec![],
    })
}
