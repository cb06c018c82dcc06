//! Network model: nodes with classified eigenvalues, one-dimensional connections
//! and the rescaled-permutation data of each global map.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Klass {
    Radial,
    Contracting,
    Expanding,
    Transverse,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub value: f64,
    pub klass: Klass,
    pub label: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub id: String,
    pub eigenvalues: Vec<Eigenvalue>,
    pub n_c: usize,
    pub n_e: usize,
    pub n_t: usize,
}

impl Node {
    fn new(id: String, eigenvalues: Vec<Eigenvalue>) -> Self {
        let count = |k| eigenvalues.iter().filter(|e| e.klass == k).count();
        let (n_c, n_e, n_t) = (
            count(Klass::Contracting),
            count(Klass::Expanding),
            count(Klass::Transverse),
        );
        Node {
            id,
            eigenvalues,
            n_c,
            n_e,
            n_t,
        }
    }

    /// Cross-section dimension seen from this node.
    pub fn section_dimension(&self) -> usize {
        (self.n_c + self.n_e + self.n_t).saturating_sub(1)
    }

    pub fn eigenvalue(&self, label: &str) -> Option<&Eigenvalue> {
        self.eigenvalues.iter().find(|e| e.label == label)
    }

    /// Non-radial labels in declaration order; these are the section axes.
    pub fn axes(&self) -> Vec<&str> {
        self.eigenvalues
            .iter()
            .filter(|e| e.klass != Klass::Radial)
            .map(|e| e.label.as_str())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    pub from: String,
    pub to: String,
    /// Declared local-expanding labels at `from`; a valid connection has exactly one.
    pub expanding: Vec<String>,
    /// Declared local-contracting labels at `to`; a valid connection has exactly one.
    pub contracting: Vec<String>,
    /// (outgoing axis at `from`, incoming axis at `to`).
    pub permutation: Vec<(String, String)>,
    pub rescale: Vec<f64>,
    pub trajectory: Option<String>,
}

impl Connection {
    pub fn expanding_label(&self) -> &str {
        &self.expanding[0]
    }

    pub fn contracting_label(&self) -> &str {
        &self.contracting[0]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeteroclinicNetwork {
    pub name: String,
    pub ambient_dimension: usize,
    pub nodes: Vec<Node>,
    pub connections: Vec<Connection>,
    pub cross_section_dimension: usize,
    index: HashMap<String, usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum OneOrMany {
    One(String),
    Many(Vec<String>),
}

impl OneOrMany {
    fn into_vec(self) -> Vec<String> {
        match self {
            OneOrMany::One(s) => vec![s],
            OneOrMany::Many(v) => v,
        }
    }

    fn from_vec(v: &[String]) -> Self {
        if v.len() == 1 {
            OneOrMany::One(v[0].clone())
        } else {
            OneOrMany::Many(v.to_vec())
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    eigenvalues: Vec<Eigenvalue>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConnectionDoc {
    from: String,
    to: String,
    expanding_label: OneOrMany,
    contracting_label: OneOrMany,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    permutation: Option<Vec<(String, String)>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    rescale: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trajectory: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NetworkDoc {
    #[serde(default)]
    name: String,
    ambient_dimension: usize,
    nodes: Vec<NodeDoc>,
    connections: Vec<ConnectionDoc>,
}

/// Parse a network-spec JSON document.
pub fn load_network(document: &str) -> Result<HeteroclinicNetwork> {
    let doc: NetworkDoc = serde_json::from_str(document)?;
    HeteroclinicNetwork::from_doc(doc)
}

impl HeteroclinicNetwork {
    fn from_doc(doc: NetworkDoc) -> Result<Self> {
        if doc.nodes.is_empty() {
            return Err(Error::Schema("network has no nodes".into()));
        }
        let mut index = HashMap::new();
        let mut nodes = Vec::with_capacity(doc.nodes.len());
        for (i, nd) in doc.nodes.into_iter().enumerate() {
            if index.insert(nd.id.clone(), i).is_some() {
                return Err(Error::DuplicateNode(nd.id));
            }
            for ev in &nd.eigenvalues {
                if !ev.value.is_finite() {
                    return Err(Error::Schema(format!(
                        "non-finite eigenvalue `{}` at node `{}`",
                        ev.label, nd.id
                    )));
                }
            }
            nodes.push(Node::new(nd.id, nd.eigenvalues));
        }
        let mut seen: BTreeSet<(String, String, Option<String>)> = BTreeSet::new();
        let mut pair_tags: BTreeMap<(String, String), Vec<Option<String>>> = BTreeMap::new();
        let mut connections = Vec::with_capacity(doc.connections.len());
        for cd in doc.connections {
            for end in [&cd.from, &cd.to] {
                if !index.contains_key(end) {
                    return Err(Error::DanglingEndpoint {
                        from: cd.from.clone(),
                        to: cd.to.clone(),
                        missing: end.clone(),
                    });
                }
            }
            if !seen.insert((cd.from.clone(), cd.to.clone(), cd.trajectory.clone())) {
                return Err(Error::DuplicateConnection(cd.from, cd.to));
            }
            let tags = pair_tags.entry((cd.from.clone(), cd.to.clone())).or_default();
            tags.push(cd.trajectory.clone());
            if tags.len() > 1 && tags.iter().any(Option::is_none) {
                return Err(Error::DuplicateConnection(cd.from, cd.to));
            }
            let expanding = cd.expanding_label.into_vec();
            let contracting = cd.contracting_label.into_vec();
            if expanding.is_empty() || contracting.is_empty() {
                return Err(Error::Schema(format!(
                    "connection {} -> {} lacks a label",
                    cd.from, cd.to
                )));
            }
            let from_node = &nodes[index[&cd.from]];
            let to_node = &nodes[index[&cd.to]];
            let permutation = match cd.permutation {
                Some(p) => p,
                None => {
                    let out_axes: Vec<&str> = from_node
                        .axes()
                        .into_iter()
                        .filter(|l| *l != expanding[0])
                        .collect();
                    out_axes
                        .into_iter()
                        .map(|l| {
                            let target = if to_node.axes().contains(&l) && l != contracting[0] {
                                l.to_string()
                            } else {
                                // the source's own direction reappears as the arrival label
                                contracting[0].clone()
                            };
                            (l.to_string(), target)
                        })
                        .collect()
                }
            };
            let rescale = match cd.rescale {
                Some(r) => {
                    if r.len() != permutation.len() {
                        return Err(Error::Schema(format!(
                            "connection {} -> {}: {} rescale entries for {} permutation pairs",
                            cd.from,
                            cd.to,
                            r.len(),
                            permutation.len()
                        )));
                    }
                    if r.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
                        return Err(Error::Schema(format!(
                            "connection {} -> {}: rescale coefficients must be positive",
                            cd.from, cd.to
                        )));
                    }
                    r
                }
                None => vec![1.0; permutation.len()],
            };
            connections.push(Connection {
                from: cd.from,
                to: cd.to,
                expanding,
                contracting,
                permutation,
                rescale,
                trajectory: cd.trajectory,
            });
        }
        let cross_section_dimension = nodes
            .iter()
            .map(Node::section_dimension)
            .max()
            .unwrap_or(0);
        Ok(HeteroclinicNetwork {
            name: doc.name,
            ambient_dimension: doc.ambient_dimension,
            nodes,
            connections,
            cross_section_dimension,
            index,
        })
    }

    fn to_doc(&self) -> NetworkDoc {
        NetworkDoc {
            name: self.name.clone(),
            ambient_dimension: self.ambient_dimension,
            nodes: self
                .nodes
                .iter()
                .map(|n| NodeDoc {
                    id: n.id.clone(),
                    eigenvalues: n.eigenvalues.clone(),
                })
                .collect(),
            connections: self
                .connections
                .iter()
                .map(|c| ConnectionDoc {
                    from: c.from.clone(),
                    to: c.to.clone(),
                    expanding_label: OneOrMany::from_vec(&c.expanding),
                    contracting_label: OneOrMany::from_vec(&c.contracting),
                    permutation: Some(c.permutation.clone()),
                    rescale: Some(c.rescale.clone()),
                    trajectory: c.trajectory.clone(),
                })
                .collect(),
        }
    }

    /// Serialize to the network-spec document with explicit permutations.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("network serializes")
    }

    pub fn node_index(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    pub fn node(&self, id: &str) -> Result<&Node> {
        Ok(&self.nodes[self.node_index(id)?])
    }

    /// Node ids in lexicographic order.
    pub fn sorted_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.nodes.iter().map(|n| n.id.as_str()).collect();
        ids.sort_unstable();
        ids
    }

    /// Distinct successors of `id`, lexicographically sorted.
    pub fn successors(&self, id: &str) -> Vec<&str> {
        let set: BTreeSet<&str> = self
            .connections
            .iter()
            .filter(|c| c.from == id)
            .map(|c| c.to.as_str())
            .collect();
        set.into_iter().collect()
    }

    /// Distinct predecessors of `id`, lexicographically sorted.
    pub fn predecessors(&self, id: &str) -> Vec<&str> {
        let set: BTreeSet<&str> = self
            .connections
            .iter()
            .filter(|c| c.to == id)
            .map(|c| c.from.as_str())
            .collect();
        set.into_iter().collect()
    }

    pub fn out_degree(&self, id: &str) -> usize {
        self.successors(id).len()
    }

    /// First connection `from -> to` (sub-network views make it unique).
    pub fn connection(&self, from: &str, to: &str) -> Result<&Connection> {
        self.connections
            .iter()
            .find(|c| c.from == from && c.to == to)
            .ok_or_else(|| Error::MissingConnection(from.to_string(), to.to_string()))
    }

    pub fn eigenvalue(&self, node: &str, label: &str) -> Result<f64> {
        self.node(node)?
            .eigenvalue(label)
            .map(|e| e.value)
            .ok_or_else(|| Error::UnresolvedLabel {
                node: node.to_string(),
                label: label.to_string(),
            })
    }

    pub fn has_parallel_connections(&self) -> bool {
        let mut pairs = BTreeSet::new();
        self.connections
            .iter()
            .any(|c| !pairs.insert((c.from.as_str(), c.to.as_str())))
    }

    /// One view per choice of trajectory on every multiply-connected pair.
    pub fn subnetworks(&self) -> Vec<HeteroclinicNetwork> {
        let mut groups: BTreeMap<(&str, &str), Vec<usize>> = BTreeMap::new();
        for (i, c) in self.connections.iter().enumerate() {
            groups.entry((&c.from, &c.to)).or_default().push(i);
        }
        let groups: Vec<Vec<usize>> = groups.into_values().collect();
        let mut choices: Vec<Vec<usize>> = vec![vec![]];
        for g in &groups {
            choices = choices
                .into_iter()
                .flat_map(|prefix| {
                    g.iter().map(move |&i| {
                        let mut p = prefix.clone();
                        p.push(i);
                        p
                    })
                })
                .collect();
        }
        choices
            .into_iter()
            .map(|mut keep| {
                keep.sort_unstable();
                let mut net = self.clone();
                net.connections = keep.iter().map(|&i| self.connections[i].clone()).collect();
                let tags: Vec<&str> = keep
                    .iter()
                    .filter_map(|&i| self.connections[i].trajectory.as_deref())
                    .collect();
                if !tags.is_empty() {
                    net.name = format!("{}[{}]", self.name, tags.join(","));
                }
                net
            })
            .collect()
    }

    /// Copy with every global-map rescale coefficient replaced.
    pub fn with_rescales<F: FnMut(&Connection, usize) -> f64>(&self, mut f: F) -> Self {
        let mut net = self.clone();
        for c in net.connections.iter_mut() {
            let snapshot = c.clone();
            for (k, r) in c.rescale.iter_mut().enumerate() {
                *r = f(&snapshot, k);
            }
        }
        net
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    pub severity: Severity,
    pub subject: String,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub findings: Vec<Finding>,
}

impl ValidationReport {
    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings.iter().filter(|f| f.severity == Severity::Error)
    }
}

/// Combinatorial consistency checks of the declared classification.
pub fn validate_quasi_simple(net: &HeteroclinicNetwork) -> ValidationReport {
    let mut findings = Vec::new();
    let mut push = |severity, subject: String, message: String| {
        findings.push(Finding {
            severity,
            subject,
            message,
        })
    };

    for node in &net.nodes {
        let mut labels = BTreeSet::new();
        for ev in &node.eigenvalues {
            if !labels.insert(ev.label.as_str()) {
                push(
                    Severity::Error,
                    node.id.clone(),
                    format!("label `{}` declared twice", ev.label),
                );
            }
            if ev.value == 0.0 {
                push(
                    Severity::Error,
                    node.id.clone(),
                    format!("eigenvalue `{}` is zero (node not hyperbolic)", ev.label),
                );
            }
            match ev.klass {
                Klass::Contracting if ev.value >= 0.0 => push(
                    Severity::Error,
                    node.id.clone(),
                    format!("contracting eigenvalue `{}` is not negative", ev.label),
                ),
                Klass::Expanding if ev.value <= 0.0 => push(
                    Severity::Error,
                    node.id.clone(),
                    format!("expanding eigenvalue `{}` is not positive", ev.label),
                ),
                Klass::Transverse if ev.value > 0.0 => push(
                    Severity::Warning,
                    node.id.clone(),
                    format!(
                        "transverse eigenvalue `{}` is positive; the network cannot be asymptotically stable",
                        ev.label
                    ),
                ),
                _ => {}
            }
        }
        if node.n_c == 0 {
            push(
                Severity::Error,
                node.id.clone(),
                "no contracting eigenvalue (n_c = 0)".into(),
            );
        }
        if node.n_e == 0 {
            push(
                Severity::Error,
                node.id.clone(),
                "no expanding eigenvalue (n_e = 0)".into(),
            );
        }
        let dim = node.section_dimension();
        if dim != net.cross_section_dimension {
            push(
                Severity::Error,
                node.id.clone(),
                format!(
                    "cross-section dimension {} differs from {} at other nodes",
                    dim, net.cross_section_dimension
                ),
            );
        }
        let incoming: BTreeSet<&str> = net
            .connections
            .iter()
            .filter(|c| c.to == node.id)
            .flat_map(|c| c.contracting.iter().map(String::as_str))
            .collect();
        let outgoing: BTreeSet<&str> = net
            .connections
            .iter()
            .filter(|c| c.from == node.id)
            .flat_map(|c| c.expanding.iter().map(String::as_str))
            .collect();
        for ev in &node.eigenvalues {
            if ev.klass == Klass::Contracting && !incoming.contains(ev.label.as_str()) {
                push(
                    Severity::Error,
                    node.id.clone(),
                    format!("contracting `{}` is not used by any incoming connection", ev.label),
                );
            }
            if ev.klass == Klass::Expanding && !outgoing.contains(ev.label.as_str()) {
                push(
                    Severity::Error,
                    node.id.clone(),
                    format!("expanding `{}` is not used by any outgoing connection", ev.label),
                );
            }
        }
    }
    if net.cross_section_dimension < 2 {
        push(
            Severity::Error,
            net.name.clone(),
            format!(
                "cross sections have dimension {}; switching needs dimension at least 2",
                net.cross_section_dimension
            ),
        );
    }

    let mut exp_used: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    let mut con_used: BTreeMap<(&str, &str), Vec<&str>> = BTreeMap::new();
    for c in &net.connections {
        let subject = format!("{} -> {}", c.from, c.to);
        if c.expanding.len() != 1 {
            push(
                Severity::Error,
                subject.clone(),
                format!(
                    "{} local-expanding labels; a one-dimensional connection has exactly one",
                    c.expanding.len()
                ),
            );
        }
        if c.contracting.len() != 1 {
            push(
                Severity::Error,
                subject.clone(),
                format!(
                    "{} local-contracting labels; a one-dimensional connection has exactly one",
                    c.contracting.len()
                ),
            );
        }
        let (Ok(from), Ok(to)) = (net.node(&c.from), net.node(&c.to)) else {
            continue;
        };
        for l in &c.expanding {
            match from.eigenvalue(l) {
                Some(ev) if ev.klass == Klass::Expanding => {}
                _ => push(
                    Severity::Error,
                    subject.clone(),
                    format!("`{l}` is not an expanding eigenvalue of {}", c.from),
                ),
            }
            exp_used.entry((&c.from, l)).or_default().push(&c.to);
        }
        for l in &c.contracting {
            match to.eigenvalue(l) {
                Some(ev) if ev.klass == Klass::Contracting => {}
                _ => push(
                    Severity::Error,
                    subject.clone(),
                    format!("`{l}` is not a contracting eigenvalue of {}", c.to),
                ),
            }
            con_used.entry((&c.to, l)).or_default().push(&c.from);
        }
        let out_axes: BTreeSet<&str> = from
            .axes()
            .into_iter()
            .filter(|l| Some(*l) != c.expanding.first().map(String::as_str))
            .collect();
        let in_axes: BTreeSet<&str> = to
            .axes()
            .into_iter()
            .filter(|l| Some(*l) != c.contracting.first().map(String::as_str))
            .collect();
        let src: BTreeSet<&str> = c.permutation.iter().map(|(a, _)| a.as_str()).collect();
        let dst: BTreeSet<&str> = c.permutation.iter().map(|(_, b)| b.as_str()).collect();
        if src != out_axes || dst != in_axes || src.len() != c.permutation.len() {
            push(
                Severity::Error,
                subject.clone(),
                "global map is not a bijection between outgoing and incoming section axes".into(),
            );
        }
        if c.rescale.iter().any(|r| !(*r > 0.0)) {
            push(
                Severity::Error,
                subject,
                "rescale coefficients must be positive".into(),
            );
        }
    }
    for ((node, label), targets) in exp_used {
        let distinct: BTreeSet<&str> = targets.iter().copied().collect();
        if distinct.len() > 1 {
            push(
                Severity::Error,
                node.to_string(),
                format!("expanding `{label}` is shared by connections to {distinct:?}"),
            );
        }
    }
    for ((node, label), sources) in con_used {
        let distinct: BTreeSet<&str> = sources.iter().copied().collect();
        if distinct.len() > 1 {
            push(
                Severity::Error,
                node.to_string(),
                format!("contracting `{label}` is shared by connections from {distinct:?}"),
            );
        }
    }

    match enumerate_cycles(net, DEFAULT_CYCLE_CAP) {
        Ok(cycles) => {
            let on_cycle: BTreeSet<&str> = cycles
                .iter()
                .flat_map(|c| c.iter().map(String::as_str))
                .collect();
            for node in &net.nodes {
                if !on_cycle.contains(node.id.as_str()) {
                    push(
                        Severity::Error,
                        node.id.clone(),
                        "node lies on no directed cycle".into(),
                    );
                }
            }
            for node in &net.nodes {
                if let Ok(g) = classify_global(net, &node.id) {
                    for ev in &node.eigenvalues {
                        let computed = g.class_of(&ev.label);
                        if computed != ev.klass {
                            push(
                                Severity::Error,
                                node.id.clone(),
                                format!(
                                    "`{}` declared {:?} but the cycles make it {:?}",
                                    ev.label, ev.klass, computed
                                ),
                            );
                        }
                    }
                }
            }
        }
        Err(e) => push(Severity::Error, net.name.clone(), e.to_string()),
    }
    if !is_weakly_connected(net) {
        push(
            Severity::Error,
            net.name.clone(),
            "network graph is not connected".into(),
        );
    }

    findings.sort_by(|a, b| {
        (b.severity, &a.subject, &a.message).cmp(&(a.severity, &b.subject, &b.message))
    });
    let ok = !findings.iter().any(|f| f.severity == Severity::Error);
    ValidationReport { ok, findings }
}

fn is_weakly_connected(net: &HeteroclinicNetwork) -> bool {
    let n = net.nodes.len();
    let mut adj = vec![Vec::new(); n];
    for c in &net.connections {
        let (a, b) = (net.index[&c.from], net.index[&c.to]);
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

pub const DEFAULT_CYCLE_CAP: usize = 10_000;

/// A simple directed cycle as its node ids, starting at the lexicographically
/// smallest id and without repeating it at the end.
pub type Cycle = Vec<String>;

/// All simple directed cycles, sorted lexicographically.
pub fn enumerate_cycles(net: &HeteroclinicNetwork, cap: usize) -> Result<Vec<Cycle>> {
    let ids = net.sorted_ids();
    let pos: HashMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let succ: Vec<Vec<usize>> = ids
        .iter()
        .map(|id| net.successors(id).iter().map(|s| pos[s]).collect())
        .collect();

    let mut cycles: Vec<Vec<usize>> = Vec::new();
    for start in 0..ids.len() {
        let mut path = vec![start];
        let mut on_path = vec![false; ids.len()];
        on_path[start] = true;
        let mut iters = vec![0usize];
        while let Some(&v) = path.last() {
            let it = iters.last_mut().unwrap();
            if let Some(&w) = succ[v].get(*it) {
                *it += 1;
                if w == start {
                    cycles.push(path.clone());
                    if cycles.len() > cap {
                        return Err(Error::CycleCap(cap));
                    }
                } else if w > start && !on_path[w] {
                    on_path[w] = true;
                    path.push(w);
                    iters.push(0);
                }
            } else {
                on_path[v] = false;
                path.pop();
                iters.pop();
            }
        }
    }
    let mut out: Vec<Cycle> = cycles
        .into_iter()
        .map(|c| c.into_iter().map(|i| ids[i].to_string()).collect())
        .collect();
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalClasses {
    pub contracting: BTreeSet<String>,
    pub expanding: BTreeSet<String>,
    pub transverse: BTreeSet<String>,
    pub radial: BTreeSet<String>,
}

impl GlobalClasses {
    pub fn class_of(&self, label: &str) -> Klass {
        if self.contracting.contains(label) {
            Klass::Contracting
        } else if self.expanding.contains(label) {
            Klass::Expanding
        } else if self.radial.contains(label) {
            Klass::Radial
        } else {
            Klass::Transverse
        }
    }
}

/// Global classification at `node`: an eigenvalue is global-expanding
/// (contracting) when it is local-expanding (contracting) for some cycle
/// through the node.
pub fn classify_global(net: &HeteroclinicNetwork, node: &str) -> Result<GlobalClasses> {
    let n = net.node(node)?;
    let cycles = enumerate_cycles(net, DEFAULT_CYCLE_CAP)?;
    let mut contracting = BTreeSet::new();
    let mut expanding = BTreeSet::new();
    let mut found = false;
    for cyc in &cycles {
        let Some(p) = cyc.iter().position(|v| v == node) else {
            continue;
        };
        found = true;
        let len = cyc.len();
        let prev = &cyc[(p + len - 1) % len];
        let next = &cyc[(p + 1) % len];
        for c in net.connections.iter().filter(|c| &c.from == prev && c.to == node) {
            contracting.extend(c.contracting.iter().cloned());
        }
        for c in net.connections.iter().filter(|c| c.from == node && &c.to == next) {
            expanding.extend(c.expanding.iter().cloned());
        }
    }
    if !found {
        return Err(Error::NotOnCycle(node.to_string()));
    }
    let mut radial = BTreeSet::new();
    let mut transverse = BTreeSet::new();
    for ev in &n.eigenvalues {
        if ev.klass == Klass::Radial {
            radial.insert(ev.label.clone());
        } else if !contracting.contains(&ev.label) && !expanding.contains(&ev.label) {
            transverse.insert(ev.label.clone());
        }
    }
    Ok(GlobalClasses {
        contracting,
        expanding,
        transverse,
        radial,
    })
}

/// Nodes with at least two outgoing connections, lexicographically.
pub fn distribution_nodes(net: &HeteroclinicNetwork) -> Vec<String> {
    net.sorted_ids()
        .into_iter()
        .filter(|id| net.out_degree(id) >= 2)
        .map(str::to_string)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn loop3() -> HeteroclinicNetwork {
        let doc = r#"{
            "ambient_dimension": 3,
            "nodes": [
                {"id": "a", "eigenvalues": [
                    {"value": -1.0, "klass": "radial", "label": "xa"},
                    {"value": 1.0, "klass": "expanding", "label": "xb"},
                    {"value": -2.0, "klass": "contracting", "label": "xc"}]},
                {"id": "b", "eigenvalues": [
                    {"value": -1.0, "klass": "radial", "label": "xb"},
                    {"value": 1.0, "klass": "expanding", "label": "xc"},
                    {"value": -2.0, "klass": "contracting", "label": "xa"}]},
                {"id": "c", "eigenvalues": [
                    {"value": -1.0, "klass": "radial", "label": "xc"},
                    {"value": 1.0, "klass": "expanding", "label": "xa"},
                    {"value": -2.0, "klass": "contracting", "label": "xb"}]}
            ],
            "connections": [
                {"from": "a", "to": "b", "expanding_label": "xb", "contracting_label": "xa"},
                {"from": "b", "to": "c", "expanding_label": "xc", "contracting_label": "xb"},
                {"from": "c", "to": "a", "expanding_label": "xa", "contracting_label": "xc"}
            ]
        }"#;
        load_network(doc).unwrap()
    }

    #[test]
    fn single_loop_has_one_cycle() {
        let net = loop3();
        let cycles = enumerate_cycles(&net, 10).unwrap();
        assert_eq!(cycles, vec![vec!["a", "b", "c"]]);
    }

    #[test]
    fn single_loop_local_equals_global() {
        let net = loop3();
        let g = classify_global(&net, "b").unwrap();
        assert!(g.expanding.contains("xc"));
        assert!(g.contracting.contains("xa"));
        assert!(g.transverse.is_empty());
    }

    #[test]
    fn loop_with_one_dimensional_sections_is_flagged() {
        let net = loop3();
        assert_eq!(net.cross_section_dimension, 1);
        let report = validate_quasi_simple(&net);
        assert!(!report.ok);
    }

    #[test]
    fn default_permutation_maps_source_label_to_contracting() {
        let net = loop3();
        let c = net.connection("a", "b").unwrap();
        assert_eq!(c.permutation, vec![("xc".to_string(), "xc".to_string())]);
    }

    #[test]
    fn duplicate_node_is_rejected() {
        let doc = r#"{"ambient_dimension": 2, "nodes": [
            {"id": "a", "eigenvalues": []}, {"id": "a", "eigenvalues": []}],
            "connections": []}"#;
        assert!(matches!(load_network(doc), Err(Error::DuplicateNode(_))));
    }

    #[test]
    fn dangling_endpoint_is_rejected() {
        let doc = r#"{"ambient_dimension": 2, "nodes": [{"id": "a", "eigenvalues": []}],
            "connections": [{"from": "a", "to": "z", "expanding_label": "x", "contracting_label": "y"}]}"#;
        assert!(matches!(
            load_network(doc),
            Err(Error::DanglingEndpoint { .. })
        ));
    }

    #[test]
    fn unknown_field_is_a_schema_error() {
        let doc = r#"{"ambient_dimension": 2, "nodes": [], "connections": [], "extra": 1}"#;
        assert!(load_network(doc).is_err());
    }
}
