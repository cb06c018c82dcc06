//! Built-in vector fields whose invariant coordinate subspaces carry the
//! shipped example networks.
//!
//! All three families are of Kolmogorov type (`dx_i/dt = x_i g_i(x)`), so they
//! are integrated in logarithmic coordinates `u_i = ln x_i`, which keeps
//! trajectories in the open positive orthant and resolves the exponentially
//! small distances reached near the network.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::network::{HeteroclinicNetwork, Klass};

pub const FIELD_NAMES: [&str; 5] = [
    "kirk_silber",
    "bowtie",
    "rsp_replicator",
    "rspls_replicator",
    "r6_simplex",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FieldKind {
    /// `dx_i/dt = x_i (1 - |x|^2 + sum_k a_ik x_k^2)` with `a_ii = 0`; node
    /// `j` sits at the unit vector `e_j`.
    Simplex { a: Vec<Vec<f64>> },
    /// Two-population replicator dynamics on a product of simplices.
    Bimatrix { a: Vec<Vec<f64>>, b: Vec<Vec<f64>> },
    /// One-population replicator dynamics on a simplex.
    Replicator { a: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeChart {
    pub id: String,
    /// Position in the embedding space.
    pub position: Vec<f64>,
    /// Embedding coordinate index for each chart label.
    pub labels: Vec<(String, usize)>,
}

#[derive(Debug, Clone)]
pub struct VectorField {
    pub name: String,
    pub parameters: BTreeMap<String, f64>,
    pub kind: FieldKind,
    pub network: HeteroclinicNetwork,
    pub nodes: Vec<NodeChart>,
}

impl VectorField {
    /// Dimension of the integrated state (one log coordinate per embedding coordinate).
    pub fn state_dimension(&self) -> usize {
        match &self.kind {
            FieldKind::Simplex { a } => a.len(),
            FieldKind::Bimatrix { a, b } => a.len() + b.len(),
            FieldKind::Replicator { a } => a.len(),
        }
    }

    /// Dimension of the phase space proper.
    pub fn ambient_dimension(&self) -> usize {
        match &self.kind {
            FieldKind::Simplex { a } => a.len(),
            FieldKind::Bimatrix { a, b } => a.len() + b.len() - 2,
            FieldKind::Replicator { a } => a.len() - 1,
        }
    }

    fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        match &self.kind {
            FieldKind::Simplex { a } => (0..a.len()).map(|i| i..i + 1).collect(),
            FieldKind::Bimatrix { a, b } => vec![0..a.len(), a.len()..a.len() + b.len()],
            FieldKind::Replicator { a } => vec![0..a.len()],
        }
    }

    /// Point of the embedding space for log state `u`.
    pub fn embed(&self, u: &[f64], x: &mut [f64]) {
        match &self.kind {
            FieldKind::Simplex { .. } => {
                for (xi, ui) in x.iter_mut().zip(u) {
                    *xi = ui.exp();
                }
            }
            _ => {
                for r in self.blocks() {
                    let m = u[r.clone()].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                    let mut s = 0.0;
                    for i in r.clone() {
                        x[i] = (u[i] - m).exp();
                        s += x[i];
                    }
                    for i in r {
                        x[i] /= s;
                    }
                }
            }
        }
    }

    /// Log state for an embedding point; zero entries map to the log of the
    /// smallest positive double.
    pub fn log_state(&self, x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| v.max(f64::MIN_POSITIVE).ln()).collect()
    }

    /// Right-hand side in log coordinates.
    pub fn rhs_log(&self, u: &[f64], du: &mut [f64]) {
        let n = u.len();
        let mut x = vec![0.0; n];
        self.embed(u, &mut x);
        self.growth(&x, du);
    }

    /// Per-capita growth rates `g_i(x)`, so that `dx_i/dt = x_i g_i(x)`.
    pub fn growth(&self, x: &[f64], g: &mut [f64]) {
        match &self.kind {
            FieldKind::Simplex { a } => {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                for (i, gi) in g.iter_mut().enumerate() {
                    let mut s = 1.0 - r2;
                    for (k, xk) in x.iter().enumerate() {
                        s += a[i][k] * xk * xk;
                    }
                    *gi = s;
                }
            }
            FieldKind::Bimatrix { a, b } => {
                // block-normalized so that off-simplex points keep their
                // block sums instead of drifting away from the simplex
                let na = a.len();
                let (xs, ys) = x.split_at(na);
                let (xs, ys) = (normalized(xs), normalized(ys));
                let (xs, ys) = (&xs[..], &ys[..]);
                let ay: Vec<f64> = a.iter().map(|row| dot(row, ys)).collect();
                let bx: Vec<f64> = b.iter().map(|row| dot(row, xs)).collect();
                let mx = dot(xs, &ay);
                let my = dot(ys, &bx);
                for i in 0..na {
                    g[i] = ay[i] - mx;
                }
                for c in 0..b.len() {
                    g[na + c] = bx[c] - my;
                }
            }
            FieldKind::Replicator { a } => {
                let x = &normalized(x)[..];
                let ax: Vec<f64> = a.iter().map(|row| dot(row, x)).collect();
                let m = dot(x, &ax);
                for (gi, v) in g.iter_mut().zip(&ax) {
                    *gi = v - m;
                }
            }
        }
    }

    /// Right-hand side in the embedding coordinates.
    pub fn rhs(&self, x: &[f64], dx: &mut [f64]) {
        self.growth(x, dx);
        for (d, xi) in dx.iter_mut().zip(x) {
            *d *= xi;
        }
    }

    pub fn node(&self, id: &str) -> Result<&NodeChart> {
        self.nodes
            .iter()
            .find(|n| n.id == id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    /// Embedding index carrying `label` at node `id`.
    pub fn label_index(&self, id: &str, label: &str) -> Result<usize> {
        self.node(id)?
            .labels
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, i)| *i)
            .ok_or_else(|| Error::UnresolvedLabel {
                node: id.to_string(),
                label: label.to_string(),
            })
    }

    /// Embedding point for chart coordinates `z` (one per chart label) at a node.
    fn chart_point(&self, chart: &NodeChart, z: &[f64]) -> Vec<f64> {
        let mut x = chart.position.clone();
        for ((_, idx), zi) in chart.labels.iter().zip(z) {
            x[*idx] += zi;
        }
        if !matches!(self.kind, FieldKind::Simplex { .. }) {
            // the vertex coordinate of each simplex absorbs the displacement
            for r in self.blocks() {
                let vertex = r.clone().find(|i| chart.position[*i] == 1.0).unwrap();
                let s: f64 = r
                    .clone()
                    .filter(|i| *i != vertex)
                    .map(|i| x[i])
                    .sum();
                x[vertex] = 1.0 - s;
            }
        }
        x
    }

    fn chart_rhs(&self, chart: &NodeChart, z: &[f64]) -> Vec<f64> {
        let x = self.chart_point(chart, z);
        let mut dx = vec![0.0; x.len()];
        self.rhs(&x, &mut dx);
        chart.labels.iter().map(|(_, idx)| dx[*idx]).collect()
    }

    /// Jacobian in chart coordinates by central differences.
    pub fn jacobian_fd(&self, id: &str, h: f64) -> Result<Vec<Vec<f64>>> {
        let chart = self.node(id)?;
        let m = chart.labels.len();
        let mut jac = vec![vec![0.0; m]; m];
        for c in 0..m {
            let mut zp = vec![0.0; m];
            let mut zm = vec![0.0; m];
            zp[c] = h;
            zm[c] = -h;
            let fp = self.chart_rhs(chart, &zp);
            let fm = self.chart_rhs(chart, &zm);
            for r in 0..m {
                jac[r][c] = (fp[r] - fm[r]) / (2.0 * h);
            }
        }
        Ok(jac)
    }

    /// Analytic Jacobian in chart coordinates at the node.
    pub fn jacobian(&self, id: &str) -> Result<Vec<Vec<f64>>> {
        let chart = self.node(id)?;
        let x = &chart.position;
        let m = chart.labels.len();
        let mut jac = vec![vec![0.0; m]; m];
        match &self.kind {
            FieldKind::Simplex { a } => {
                // at a unit vector e_j every off-diagonal derivative vanishes
                let j = x.iter().position(|v| *v == 1.0).unwrap();
                for (r, (_, i)) in chart.labels.iter().enumerate() {
                    jac[r][r] = if *i == j { -2.0 } else { a[*i][j] };
                }
            }
            _ => {
                let mut g = vec![0.0; x.len()];
                self.growth(x, &mut g);
                for (r, (_, i)) in chart.labels.iter().enumerate() {
                    jac[r][r] = g[*i];
                }
            }
        }
        Ok(jac)
    }

    /// Distance in the embedding space from `x` to node `id`.
    pub fn node_distance(&self, chart: &NodeChart, x: &[f64]) -> f64 {
        chart
            .position
            .iter()
            .zip(x)
            .map(|(p, v)| (p - v) * (p - v))
            .sum::<f64>()
            .sqrt()
    }

    /// Check equilibria and eigenvalues against the network's declared data.
    pub fn verify_against_network(&self, tol: f64) -> Result<()> {
        for chart in &self.nodes {
            let mut dx = vec![0.0; chart.position.len()];
            self.rhs(&chart.position, &mut dx);
            if dx.iter().any(|v| v.abs() > 1e-12) {
                return Err(Error::Field(format!("{} is not an equilibrium", chart.id)));
            }
            let jac = self.jacobian(&chart.id)?;
            let node = self.network.node(&chart.id)?;
            for (r, (label, _)) in chart.labels.iter().enumerate() {
                for c in 0..jac.len() {
                    if c != r && jac[r][c].abs() > tol {
                        return Err(Error::Field(format!(
                            "Jacobian at {} is not diagonal in its chart",
                            chart.id
                        )));
                    }
                }
                let declared = node.eigenvalue(label).ok_or_else(|| Error::UnresolvedLabel {
                    node: chart.id.clone(),
                    label: label.clone(),
                })?;
                if (declared.value - jac[r][r]).abs() > tol {
                    return Err(Error::Field(format!(
                        "eigenvalue `{label}` at {}: field {} vs network {}",
                        chart.id, jac[r][r], declared.value
                    )));
                }
            }
        }
        Ok(())
    }
}

fn normalized(x: &[f64]) -> Vec<f64> {
    let s: f64 = x.iter().sum();
    x.iter().map(|v| v / s).collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn simplex_from_network(net: &HeteroclinicNetwork) -> Result<(Vec<Vec<f64>>, Vec<NodeChart>)> {
    let n = net.ambient_dimension;
    let mut a = vec![vec![0.0; n]; n];
    let mut charts = Vec::new();
    let index = |label: &str| -> Result<usize> {
        label
            .strip_prefix('x')
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|i| (1..=n).contains(i))
            .map(|i| i - 1)
            .ok_or_else(|| Error::Field(format!("label `{label}` is not of the form x1..x{n}")))
    };
    for node in &net.nodes {
        let radial = node
            .eigenvalues
            .iter()
            .find(|e| e.klass == Klass::Radial)
            .ok_or_else(|| Error::Field(format!("{} has no radial eigenvalue", node.id)))?;
        let j = index(&radial.label)?;
        let mut position = vec![0.0; n];
        position[j] = 1.0;
        let mut labels = Vec::new();
        for ev in &node.eigenvalues {
            let i = index(&ev.label)?;
            if i != j {
                a[i][j] = ev.value;
            }
            labels.push((ev.label.clone(), i));
        }
        charts.push(NodeChart {
            id: node.id.clone(),
            position,
            labels,
        });
    }
    Ok((a, charts))
}

fn rps(eps: f64) -> Vec<Vec<f64>> {
    vec![
        vec![eps, -1.0, 1.0],
        vec![1.0, eps, -1.0],
        vec![-1.0, 1.0, eps],
    ]
}

/// Payoff of strategy `k` against `i` in the five-strategy game where `k`
/// beats `i` when `k - i` is 1 or 3 modulo 5.
pub fn rspls_payoffs(w1: f64, w3: f64, l1: f64, l3: f64) -> Vec<Vec<f64>> {
    (0..5)
        .map(|k| {
            (0..5)
                .map(|i| match (k + 5 - i) % 5 {
                    0 => 0.0,
                    1 => w1,
                    3 => w3,
                    4 => -l1,
                    _ => -l3,
                })
                .collect()
        })
        .collect()
}

fn param(params: &BTreeMap<String, f64>, key: &str, default: f64) -> f64 {
    params.get(key).copied().unwrap_or(default)
}

/// Build a named field. Simplex-type fields take their coefficients from the
/// matching network fixture (parameters `a_i_j` override single entries);
/// replicator fields take payoff parameters and must reproduce the fixture's
/// eigenvalues.
pub fn build_field(name: &str, params: &BTreeMap<String, f64>) -> Result<VectorField> {
    let known = ["eps_x", "eps_y", "w1", "w3", "l1", "l3"];
    for k in params.keys() {
        let matrix_entry = k.starts_with("a_") && k.split('_').count() == 3;
        if !known.contains(&k.as_str()) && !matrix_entry {
            return Err(Error::Field(format!("unknown parameter `{k}` for {name}")));
        }
    }
    let field = match name {
        "kirk_silber" | "bowtie" | "r6_simplex" | "house" | "ac_network" => {
            let net = fixtures::network(name)?;
            let (mut a, nodes) = simplex_from_network(&net)?;
            let mut parameters = BTreeMap::new();
            for (k, v) in params {
                let parts: Vec<&str> = k.split('_').collect();
                let (Ok(i), Ok(j)) = (parts[1].parse::<usize>(), parts[2].parse::<usize>()) else {
                    return Err(Error::Field(format!("bad parameter `{k}`")));
                };
                if i == 0 || j == 0 || i > a.len() || j > a.len() || i == j {
                    return Err(Error::Field(format!("parameter `{k}` out of range")));
                }
                a[i - 1][j - 1] = *v;
                parameters.insert(k.clone(), *v);
            }
            for (i, row) in a.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    if i != j {
                        parameters.entry(format!("a_{}_{}", i + 1, j + 1)).or_insert(*v);
                    }
                }
            }
            VectorField {
                name: name.to_string(),
                parameters,
                kind: FieldKind::Simplex { a },
                network: net,
                nodes,
            }
        }
        "rsp_replicator" => {
            let net = fixtures::network("rsp")?;
            let ex = param(params, "eps_x", -0.3);
            let ey = param(params, "eps_y", -0.2);
            if !(-1.0 < ex && ex < 1.0 && -1.0 < ey && ey < 1.0) {
                return Err(Error::Field("eps_x and eps_y must lie in (-1, 1)".into()));
            }
            let names = ['R', 'P', 'S'];
            let mut nodes = Vec::new();
            for i in 0..3 {
                for j in 0..3 {
                    let mut position = vec![0.0; 6];
                    position[i] = 1.0;
                    position[3 + j] = 1.0;
                    let mut labels = Vec::new();
                    for a in (0..3).filter(|a| *a != i) {
                        labels.push((format!("x{a}"), a));
                    }
                    for c in (0..3).filter(|c| *c != j) {
                        labels.push((format!("y{c}"), 3 + c));
                    }
                    nodes.push(NodeChart {
                        id: format!("{}{}", names[i], names[j]),
                        position,
                        labels,
                    });
                }
            }
            VectorField {
                name: name.to_string(),
                parameters: BTreeMap::from([("eps_x".into(), ex), ("eps_y".into(), ey)]),
                kind: FieldKind::Bimatrix {
                    a: rps(ex),
                    b: rps(ey),
                },
                network: net,
                nodes,
            }
        }
        "rspls_replicator" => {
            let net = fixtures::network("rspls")?;
            let (w1, w3, l1, l3) = (
                param(params, "w1", 1.0),
                param(params, "w3", 0.6),
                param(params, "l1", 1.4),
                param(params, "l3", 1.1),
            );
            if [w1, w3, l1, l3].iter().any(|v| !(*v > 0.0)) {
                return Err(Error::Field("payoff magnitudes must be positive".into()));
            }
            let names = ["rock", "paper", "scissors", "lizard", "spock"];
            let nodes = (0..5)
                .map(|i| {
                    let mut position = vec![0.0; 5];
                    position[i] = 1.0;
                    NodeChart {
                        id: names[i].to_string(),
                        position,
                        labels: (0..5)
                            .filter(|k| *k != i)
                            .map(|k| (format!("x{k}"), k))
                            .collect(),
                    }
                })
                .collect();
            VectorField {
                name: name.to_string(),
                parameters: BTreeMap::from([
                    ("w1".into(), w1),
                    ("w3".into(), w3),
                    ("l1".into(), l1),
                    ("l3".into(), l3),
                ]),
                kind: FieldKind::Replicator {
                    a: rspls_payoffs(w1, w3, l1, l3),
                },
                network: net,
                nodes,
            }
        }
        other => {
            return Err(Error::Field(format!(
                "unknown field `{other}` (expected one of {FIELD_NAMES:?})"
            )))
        }
    };
    field.verify_against_network(1e-8)?;
    Ok(field)
}
