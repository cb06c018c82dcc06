//! Text rendering of analysis results. JSON output is the serde form of the
//! same structures.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::cone::{FeasibilityVerdict, LinearRow};
use crate::cusp::{
    all_to_all, count_guarantee, common_dimension, intersects_near_origin, pairwise_rule,
    AllToAll, CountGuarantee, Orientation, PairwiseRule, PowerRegion,
};
use crate::error::Result;
use crate::maps::compose_path;
use crate::network::{HeteroclinicNetwork, Severity};
use crate::sim::EnsembleResult;
use crate::switching::{Enumeration, NetworkReport, Scope, Verdict};

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::NoSwitching => "no switching",
        Verdict::SwitchingPossibleBounded => "switching possible (bounded)",
        Verdict::Inconclusive => "inconclusive",
    }
}

fn scope_name(s: &Scope) -> String {
    match s {
        Scope::Node(id) => id.clone(),
        Scope::Connection(a, b) => format!("[{a} -> {b}]"),
        Scope::Sequence(seq) => format!("[{}]", seq.join(" -> ")),
        Scope::Network => "network".into(),
    }
}

pub fn arrow(path: &[String]) -> String {
    format!("[{}]", path.join(" -> "))
}

pub fn render_network_report(r: &NetworkReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "network {} (cross sections of dimension N = {})", r.network, r.dimension);
    let _ = writeln!(out, "verdict: {}", r.headline);
    if !r.validation.findings.is_empty() {
        let _ = writeln!(out, "\nvalidation:");
        for f in &r.validation.findings {
            let tag = match f.severity {
                Severity::Error => "error",
                Severity::Warning => "warning",
            };
            let _ = writeln!(out, "  {tag}: {}: {}", f.subject, f.message);
        }
    }
    let _ = writeln!(out, "\ndistribution nodes: {}", r.distribution_nodes.join(", "));
    if !r.node_verdicts.is_empty() {
        let _ = writeln!(out, "\nnode criterion:");
        for v in &r.node_verdicts {
            let a = &v.arithmetic;
            let _ = writeln!(
                out,
                "  {:<12} n_c={} n_e={} N={}  {}",
                scope_name(&v.scope),
                a.n_c,
                a.n_e,
                a.dimension,
                verdict_word(v.verdict)
            );
        }
    }
    if !r.connection_verdicts.is_empty() {
        let _ = writeln!(out, "\nconnection criterion:");
        for v in &r.connection_verdicts {
            let a = &v.arithmetic;
            let geo = match v.confirmed_by_geometry {
                Some(true) => " (confirmed by an infeasible combination)",
                Some(false) => " (no infeasible combination at leading order)",
                None => "",
            };
            let _ = writeln!(
                out,
                "  {:<20} n_c+n_e={}+{}={} vs N={}  {}{}",
                scope_name(&v.scope),
                a.n_c,
                a.n_e,
                a.sum,
                a.dimension,
                verdict_word(v.verdict),
                geo
            );
        }
    }
    if !r.depth_bounds.is_empty() {
        let _ = writeln!(out, "\ndistribution-node depth bounds:");
        for b in &r.depth_bounds {
            let _ = writeln!(
                out,
                "  from {:<8} k={} sum={} (N={}), at most {} distribution nodes on a cycle",
                b.start, b.k, b.sum, b.dimension, b.cycle_bound
            );
            for s in &b.sequences {
                let _ = writeln!(out, "      {} k={} sum={}", arrow(&s.nodes), s.k, s.sum);
            }
        }
    }
    if !r.enumerations.is_empty() {
        let _ = writeln!(out, "\nfollowable paths (depth: feasible/total):");
        let mut start = "";
        for e in &r.enumerations {
            if e.start != start {
                start = &e.start;
                let _ = write!(out, "  from {:<8}", e.start);
            }
            let _ = write!(out, " {}: {}/{}", e.depth, e.feasible, e.total);
            let last = r
                .enumerations
                .iter()
                .filter(|x| x.start == e.start)
                .map(|x| x.depth)
                .max();
            if last == Some(e.depth) {
                out.push('\n');
            }
        }
    }
    if !r.returns.is_empty() {
        let _ = writeln!(out, "\nexits after one return:");
        for d in &r.returns {
            let _ = writeln!(
                out,
                "  {}: {}",
                d.node,
                if d.predetermined { "predetermined" } else { "not predetermined" }
            );
            for c in &d.choices {
                let _ = writeln!(
                    out,
                    "      from {} via {} then {{{}}}",
                    c.incoming,
                    arrow(&c.route),
                    c.second_exits.join(", ")
                );
            }
        }
    }
    if !r.departure_sets.is_empty() {
        let _ = writeln!(out, "\noutgoing sections not covered by the images:");
        for d in &r.departure_sets {
            let _ = writeln!(
                out,
                "  {} -> {}: {} (sampled fraction outside {:.3})",
                d.node,
                d.outgoing,
                if d.non_covering { "not covered" } else { "covered" },
                d.sampled_outside_fraction
            );
        }
    }
    match &r.finite_switching_witness {
        Some(p) => {
            let _ = writeln!(out, "\nnot followable: {}", arrow(p));
        }
        None if !r.enumerations.is_empty() => {
            let _ = writeln!(out, "\nno unfollowable path found within the search depth");
        }
        None => {}
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out, "\nnotes:");
        for n in &r.notes {
            let _ = writeln!(out, "  - {n}");
        }
    }
    for s in &r.subnetworks {
        let _ = writeln!(out, "\n--- sub-network ---");
        out.push_str(&render_network_report(s));
    }
    out
}

fn render_row(row: &LinearRow, axes: &[String]) -> String {
    let mut terms = Vec::new();
    for (c, l) in row.coeffs.iter().zip(axes) {
        if c.abs() > 1e-12 {
            terms.push(format!("{c:+.4} eta_{l}"));
        }
    }
    let op = if row.strict { ">" } else { ">=" };
    format!("{} {op} {:.4}", terms.join(" "), row.constant)
}

fn render_verdict(v: &FeasibilityVerdict) -> String {
    if let Some(w) = &v.witness {
        let ray: Vec<String> = w.ray.iter().map(|x| format!("{x:.4}")).collect();
        let base: Vec<String> = w.base.iter().map(|x| format!("{x:.4}")).collect();
        format!("witness ray ({}) base ({})", ray.join(", "), base.join(", "))
    } else if let Some(c) = &v.certificate {
        let m: Vec<String> = c.multipliers.iter().map(|x| format!("{x:.4}")).collect();
        format!("{:?} certificate, multipliers ({})", c.kind, m.join(", "))
    } else {
        String::new()
    }
}

pub fn render_enumeration(net: &HeteroclinicNetwork, e: &Enumeration, debug: bool) -> Result<String> {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "paths of {} connections from {} in {}: {} feasible of {}",
        e.depth,
        e.start,
        net.name,
        e.feasible_count,
        e.paths.len()
    );
    for p in &e.paths {
        let from: Vec<&str> = p
            .by_incoming
            .iter()
            .filter(|v| v.feasible)
            .map(|v| v.from.as_str())
            .collect();
        let _ = writeln!(
            out,
            "  {} {}{}",
            if p.feasible { "followable    " } else { "not followable" },
            arrow(&p.path),
            if p.feasible {
                format!("  (entering from {})", from.join(", "))
            } else {
                String::new()
            }
        );
        if debug {
            for v in &p.by_incoming {
                let mut full = vec![v.from.clone()];
                full.extend(p.path.iter().cloned());
                let t = compose_path(net, &full)?;
                let verdict = crate::cone::decide(&t.pulled_back.cone());
                let _ = writeln!(out, "      from {}: {}", v.from, render_verdict(&verdict));
                let _ = writeln!(
                    out,
                    "        log map to {} ({}):",
                    full.last().unwrap(),
                    t.map.out_axes.join(", ")
                );
                for (row, off) in t.map.matrix.iter().zip(&t.map.offset) {
                    let r: Vec<String> = row.iter().map(|x| format!("{x:8.4}")).collect();
                    let _ = writeln!(out, "          [{}] + {off:.4}", r.join(" "));
                }
                let _ = writeln!(out, "        constraints on ({}):", t.pulled_back.axes.join(", "));
                for row in &t.pulled_back.rows {
                    let _ = writeln!(out, "          {}", render_row(row, &t.pulled_back.axes));
                }
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub first: usize,
    pub second: usize,
    pub rule: PairwiseRule,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CuspAnalysis {
    pub dimension: usize,
    pub regions: Vec<PowerRegion>,
    pub verdict: FeasibilityVerdict,
    pub pairs: Vec<PairCheck>,
    pub count_guarantee: CountGuarantee,
    /// Exhaustive check over thin/thick assignments (up to 12 hypersurfaces).
    pub all_to_all: Option<AllToAll>,
}

pub fn analyze_cusps(regions: &[PowerRegion]) -> Result<CuspAnalysis> {
    let dimension = common_dimension(regions)?;
    let verdict = intersects_near_origin(regions)?;
    let mut pairs = Vec::new();
    for a in 0..regions.len() {
        for b in a + 1..regions.len() {
            let rule = pairwise_rule(&regions[a], &regions[b]);
            if rule != PairwiseRule::AlwaysIntersect {
                pairs.push(PairCheck {
                    first: a + 1,
                    second: b + 1,
                    rule,
                });
            }
        }
    }
    let all = if regions.len() <= 12 {
        Some(all_to_all(regions)?)
    } else {
        None
    };
    Ok(CuspAnalysis {
        dimension,
        regions: regions.to_vec(),
        verdict,
        pairs,
        count_guarantee: count_guarantee(regions, dimension),
        all_to_all: all,
    })
}

fn region_name(r: &PowerRegion) -> String {
    let o = match r.orientation {
        Orientation::Thin => "thin",
        Orientation::Thick => "thick",
    };
    let rel = match r.orientation {
        Orientation::Thin => "<",
        Orientation::Thick => ">",
    };
    format!(
        "{o} V_{}{}: {} x{} {rel} x{}^{}",
        r.i, r.j, r.a, r.i, r.j, r.alpha
    )
}

pub fn render_cusps(c: &CuspAnalysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} regions in dimension {}", c.regions.len(), c.dimension);
    for (k, r) in c.regions.iter().enumerate() {
        let _ = writeln!(out, "  {}. {}", k + 1, region_name(r));
    }
    let _ = writeln!(
        out,
        "intersect near the origin: {}",
        c.verdict.intersects_near_origin
    );
    let _ = writeln!(out, "  {}", render_verdict(&c.verdict));
    for p in &c.pairs {
        if let PairwiseRule::SomePairEmpty(e) = &p.rule {
            let combos: Vec<String> = e.iter().map(|(a, b)| format!("{a:?}/{b:?}")).collect();
            let _ = writeln!(
                out,
                "  regions {} and {}: empty when {}",
                p.first,
                p.second,
                combos.join(" or ")
            );
        }
    }
    let g = &c.count_guarantee;
    let _ = writeln!(
        out,
        "{} distinct hypersurfaces (pair bound {}){}",
        g.hypersurfaces,
        g.pair_bound,
        if g.all_to_all_impossible {
            "; not every thin/thick combination can intersect"
        } else {
            ""
        }
    );
    if let Some(a) = &c.all_to_all {
        match &a.empty_combination {
            None => {
                let _ = writeln!(out, "every thin/thick combination intersects near the origin");
            }
            Some((o, _)) => {
                let s: Vec<String> = o.iter().map(|x| format!("{x:?}")).collect();
                let _ = writeln!(out, "empty combination: ({})", s.join(", "));
            }
        }
    }
    out
}

pub fn render_ensemble(r: &EnsembleResult) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{}: {} trajectories, seed {}, {} itinerary prefixes checked",
        r.field, r.samples, r.seed, r.prefixes_checked
    );
    let t: Vec<String> = r.terminals.iter().map(|(k, v)| format!("{k} {v}")).collect();
    let _ = writeln!(out, "terminal states: {}", t.join(", "));
    let _ = writeln!(out, "violations: {}", r.violations.len());
    for v in &r.violations {
        let _ = writeln!(out, "  member {}: {}", v.member, arrow(&v.path));
    }
    let mut observed = r.observed.clone();
    observed.sort_by(|a, b| b.count.cmp(&a.count).then(a.path.cmp(&b.path)));
    let _ = writeln!(out, "most frequent itineraries:");
    for o in observed.iter().take(10) {
        let _ = writeln!(out, "  {:6}  {}", o.count, arrow(&o.path));
    }
    out
}
