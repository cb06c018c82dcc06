//! Leading-order local and global maps between cross sections, written in
//! `eta = -ln x` coordinates where they become affine, and their composition
//! along heteroclinic paths.

use serde::{Deserialize, Serialize};

use crate::cone::{self, ConeSystem, FeasibilityVerdict, LinearRow};
use crate::cusp::PowerRegion;
use crate::error::{Error, Result};
use crate::network::HeteroclinicNetwork;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionKind {
    Incoming,
    Outgoing,
}

/// `H_node^{in,neighbor}` or `H_node^{out,neighbor}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionRef {
    pub node: String,
    pub kind: SectionKind,
    pub neighbor: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrossSectionPoint {
    pub section: SectionRef,
    pub axes: Vec<String>,
    pub coordinates: Vec<f64>,
}

/// Axes of `H_j^{in,i}`: every non-radial label at `j` except the
/// contracting label of `i -> j`.
pub fn incoming_axes(net: &HeteroclinicNetwork, i: &str, j: &str) -> Result<Vec<String>> {
    let c = net.connection(i, j)?.contracting_label().to_string();
    Ok(net
        .node(j)?
        .axes()
        .into_iter()
        .filter(|l| *l != c)
        .map(str::to_string)
        .collect())
}

/// Axes of `H_j^{out,k}`: every non-radial label at `j` except the
/// expanding label of `j -> k`.
pub fn outgoing_axes(net: &HeteroclinicNetwork, j: &str, k: &str) -> Result<Vec<String>> {
    let w = net.connection(j, k)?.expanding_label().to_string();
    Ok(net
        .node(j)?
        .axes()
        .into_iter()
        .filter(|l| *l != w)
        .map(str::to_string)
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalMap {
    pub node: String,
    pub incoming: String,
    pub outgoing: String,
    /// Label of `w^in`, the leading expanding direction `e_{j,1}`.
    pub w_label: String,
    /// Label of `v^out`, the leading contracting direction `c_{j,1}`.
    pub v_label: String,
    pub c1: f64,
    pub e1: f64,
    pub in_axes: Vec<String>,
    pub out_axes: Vec<String>,
    /// `z'_l = z_l * w^{exponent}` for every axis other than `w` and `v`.
    pub exponents: Vec<(String, f64)>,
}

impl LocalMap {
    /// `v^out = (w^in)^{c1/e1}`.
    pub fn principal_exponent(&self) -> f64 {
        self.c1 / self.e1
    }

    pub fn exponent(&self, label: &str) -> Option<f64> {
        self.exponents
            .iter()
            .find(|(l, _)| l == label)
            .map(|(_, e)| *e)
    }

    /// Evaluate on a point of `H_j^{in,i}` given in `in_axes` order.
    pub fn apply(&self, x_in: &[f64]) -> Vec<f64> {
        let w_pos = self.in_axes.iter().position(|l| *l == self.w_label).unwrap();
        let w = x_in[w_pos];
        self.out_axes
            .iter()
            .map(|l| {
                if *l == self.v_label {
                    w.powf(self.principal_exponent())
                } else {
                    let p = self.in_axes.iter().position(|m| m == l).unwrap();
                    x_in[p] * w.powf(self.exponent(l).unwrap())
                }
            })
            .collect()
    }

    pub fn to_log_affine(&self) -> LogAffineMap {
        let n = self.in_axes.len();
        let w_pos = self.in_axes.iter().position(|l| *l == self.w_label).unwrap();
        let matrix = self
            .out_axes
            .iter()
            .map(|l| {
                let mut row = vec![0.0; n];
                if *l == self.v_label {
                    row[w_pos] = self.principal_exponent();
                } else {
                    let p = self.in_axes.iter().position(|m| m == l).unwrap();
                    row[p] = 1.0;
                    row[w_pos] += self.exponent(l).unwrap();
                }
                row
            })
            .collect();
        LogAffineMap {
            in_axes: self.in_axes.clone(),
            out_axes: self.out_axes.clone(),
            matrix,
            offset: vec![0.0; self.out_axes.len()],
        }
    }
}

/// Leading-order passage map `phi_{i,j,k}` from `H_j^{in,i}` to `H_j^{out,k}`.
pub fn local_map(net: &HeteroclinicNetwork, i: &str, j: &str, k: &str) -> Result<LocalMap> {
    let inc = net.connection(i, j)?;
    let out = net.connection(j, k)?;
    let v_label = inc.contracting_label().to_string();
    let w_label = out.expanding_label().to_string();
    let c1 = -net.eigenvalue(j, &v_label)?;
    let e1 = net.eigenvalue(j, &w_label)?;
    if !(c1 > 0.0 && e1 > 0.0) {
        return Err(Error::UnresolvedLabel {
            node: j.to_string(),
            label: format!("{v_label}/{w_label} (needs c1 > 0 and e1 > 0)"),
        });
    }
    let in_axes = incoming_axes(net, i, j)?;
    let out_axes = outgoing_axes(net, j, k)?;
    let mut exponents = Vec::new();
    for l in &out_axes {
        if *l != v_label {
            exponents.push((l.clone(), -net.eigenvalue(j, l)? / e1));
        }
    }
    Ok(LocalMap {
        node: j.to_string(),
        incoming: i.to_string(),
        outgoing: k.to_string(),
        w_label,
        v_label,
        c1,
        e1,
        in_axes,
        out_axes,
        exponents,
    })
}

/// Affine map `eta -> M eta + offset` between labelled sections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogAffineMap {
    pub in_axes: Vec<String>,
    pub out_axes: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
    pub offset: Vec<f64>,
}

impl LogAffineMap {
    pub fn identity(axes: Vec<String>) -> Self {
        let n = axes.len();
        LogAffineMap {
            in_axes: axes.clone(),
            out_axes: axes,
            matrix: (0..n)
                .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
                .collect(),
            offset: vec![0.0; n],
        }
    }

    pub fn apply(&self, eta: &[f64]) -> Vec<f64> {
        self.matrix
            .iter()
            .zip(&self.offset)
            .map(|(row, b)| row.iter().zip(eta).map(|(m, e)| m * e).sum::<f64>() + b)
            .collect()
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &LogAffineMap) -> Result<LogAffineMap> {
        if next.in_axes != self.out_axes {
            return Err(Error::Invalid(format!(
                "cannot compose: {:?} feeds {:?}",
                self.out_axes, next.in_axes
            )));
        }
        let n = self.in_axes.len();
        let matrix = next
            .matrix
            .iter()
            .map(|row| {
                (0..n)
                    .map(|c| row.iter().zip(&self.matrix).map(|(a, m)| a * m[c]).sum())
                    .collect()
            })
            .collect();
        let offset = next
            .matrix
            .iter()
            .zip(&next.offset)
            .map(|(row, b)| row.iter().zip(&self.offset).map(|(a, o)| a * o).sum::<f64>() + b)
            .collect();
        Ok(LogAffineMap {
            in_axes: self.in_axes.clone(),
            out_axes: next.out_axes.clone(),
            matrix,
            offset,
        })
    }

    pub fn determinant(&self) -> f64 {
        let n = self.matrix.len();
        let mut a = self.matrix.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))
                .unwrap();
            if a[pivot][col] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            det *= a[col][col];
            for r in col + 1..n {
                let f = a[r][col] / a[col][col];
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
        det
    }
}

/// Rescaled permutation `psi_{j,k}` from `H_j^{out,k}` to `H_k^{in,j}`:
/// `eta_in[dst] = eta_out[src] - ln(rescale)`.
pub fn global_map(net: &HeteroclinicNetwork, j: &str, k: &str) -> Result<LogAffineMap> {
    let conn = net.connection(j, k)?;
    let in_axes = outgoing_axes(net, j, k)?;
    let out_axes = incoming_axes(net, j, k)?;
    let n = in_axes.len();
    let mut matrix = vec![vec![0.0; n]; out_axes.len()];
    let mut offset = vec![0.0; out_axes.len()];
    let mut filled = vec![false; out_axes.len()];
    for ((src, dst), r) in conn.permutation.iter().zip(&conn.rescale) {
        let s = in_axes.iter().position(|l| l == src);
        let d = out_axes.iter().position(|l| l == dst);
        let (Some(s), Some(d)) = (s, d) else {
            return Err(Error::Invalid(format!(
                "global map {j} -> {k}: pair ({src}, {dst}) is not between section axes"
            )));
        };
        matrix[d][s] = 1.0;
        offset[d] = -r.ln();
        filled[d] = true;
    }
    if let Some(d) = filled.iter().position(|f| !f) {
        return Err(Error::Invalid(format!(
            "global map {j} -> {k}: missing permutation entry for `{}`",
            out_axes[d]
        )));
    }
    Ok(LogAffineMap {
        in_axes,
        out_axes,
        matrix,
        offset,
    })
}

/// Linear constraints over a section, with the two-coordinate rows also
/// given as power regions (1-based indices into `axes`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionSystem {
    pub section: SectionRef,
    pub axes: Vec<String>,
    pub rows: Vec<LinearRow>,
}

impl RegionSystem {
    pub fn is_whole_section(&self) -> bool {
        self.rows.is_empty()
    }

    /// Rows that are cusps `a x_p < x_q^alpha`; `None` for rows involving
    /// more than two coordinates.
    pub fn power_regions(&self) -> Vec<Option<PowerRegion>> {
        let n = self.axes.len();
        self.rows
            .iter()
            .map(|row| {
                let s = row.support();
                if s.len() != 2 {
                    return None;
                }
                let (p, q) = if row.coeffs[s[0]] > 0.0 {
                    (s[0], s[1])
                } else {
                    (s[1], s[0])
                };
                let (gp, gq) = (row.coeffs[p], row.coeffs[q]);
                if !(gp > 0.0 && gq < 0.0) {
                    return None;
                }
                Some(
                    PowerRegion::thin(p + 1, q + 1, (row.constant / gp).exp(), -gq / gp)
                        .in_dimension(n),
                )
            })
            .collect()
    }

    /// Whether a point given in `axes` order satisfies every row.
    pub fn contains(&self, x: &[f64]) -> bool {
        let eta: Vec<f64> = x.iter().map(|v| -v.ln()).collect();
        self.rows.iter().all(|r| r.holds(&eta))
    }

    pub fn cone(&self) -> ConeSystem {
        ConeSystem {
            dimension: self.axes.len(),
            rows: self.rows.clone(),
        }
    }
}

/// Domain `C_{ijk}` in `H_j^{in,i}`: points leaving along the expanding
/// direction of `j -> k` first, i.e. `z_p < w^{lambda_p/e1}` for every other
/// positive eigenvalue at `j`.
pub fn domain_c(net: &HeteroclinicNetwork, i: &str, j: &str, k: &str) -> Result<RegionSystem> {
    let lm = local_map(net, i, j, k)?;
    let axes = lm.in_axes.clone();
    let w = axes.iter().position(|l| *l == lm.w_label).unwrap();
    let mut rows = Vec::new();
    for (p, l) in axes.iter().enumerate() {
        if p == w {
            continue;
        }
        let lambda = net.eigenvalue(j, l)?;
        if lambda > 0.0 {
            let mut g = vec![0.0; axes.len()];
            g[p] = 1.0;
            g[w] = -lambda / lm.e1;
            rows.push(LinearRow::strict(g, 0.0));
        }
    }
    Ok(RegionSystem {
        section: SectionRef {
            node: j.to_string(),
            kind: SectionKind::Incoming,
            neighbor: i.to_string(),
        },
        axes,
        rows,
    })
}

/// Image `F_{ijk}` in `H_j^{out,k}`: `z_l < (v^out)^{|lambda_l|/c1}` for every
/// negative eigenvalue other than `c1`. Transverse directions enter with the
/// exponent `t_q/c1` that the passage map actually produces.
pub fn image_f(net: &HeteroclinicNetwork, i: &str, j: &str, k: &str) -> Result<RegionSystem> {
    let lm = local_map(net, i, j, k)?;
    let axes = lm.out_axes.clone();
    let v = axes.iter().position(|l| *l == lm.v_label).unwrap();
    let mut rows = Vec::new();
    for (p, l) in axes.iter().enumerate() {
        if p == v {
            continue;
        }
        let lambda = net.eigenvalue(j, l)?;
        if lambda < 0.0 {
            let mut g = vec![0.0; axes.len()];
            g[p] = 1.0;
            g[v] = lambda / lm.c1;
            rows.push(LinearRow::strict(g, 0.0));
        }
    }
    Ok(RegionSystem {
        section: SectionRef {
            node: j.to_string(),
            kind: SectionKind::Outgoing,
            neighbor: k.to_string(),
        },
        axes,
        rows,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathTransfer {
    pub path: Vec<String>,
    /// From `H_{p1}^{in,p0}` to `H_{pm}^{in,p(m-1)}`.
    pub map: LogAffineMap,
    /// Every traversed domain constraint, expressed on the initial section.
    pub pulled_back: RegionSystem,
}

#[derive(Debug, Clone)]
struct Form {
    coeffs: Vec<f64>,
    constant: f64,
}

impl Form {
    fn axpy(&self, s: f64, other: &Form) -> Form {
        Form {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + s * b)
                .collect(),
            constant: self.constant + s * other.constant,
        }
    }

    fn scaled(&self, s: f64) -> Form {
        Form {
            coeffs: self.coeffs.iter().map(|a| s * a).collect(),
            constant: s * self.constant,
        }
    }
}

fn check_path(net: &HeteroclinicNetwork, path: &[String]) -> Result<()> {
    if path.len() < 2 {
        return Err(Error::ShortPath {
            min: 2,
            got: path.len(),
        });
    }
    for w in path.windows(2) {
        net.connection(&w[0], &w[1])?;
    }
    Ok(())
}

/// Compose local and global maps along `path` and pull every domain
/// constraint back to the first section. A two-node path yields the identity.
pub fn compose_path<S: AsRef<str>>(net: &HeteroclinicNetwork, path: &[S]) -> Result<PathTransfer> {
    let path: Vec<String> = path.iter().map(|s| s.as_ref().to_string()).collect();
    check_path(net, &path)?;
    let axes0 = incoming_axes(net, &path[0], &path[1])?;
    let n = axes0.len();
    let mut labels = axes0.clone();
    let mut forms: Vec<Form> = (0..n)
        .map(|i| {
            let mut coeffs = vec![0.0; n];
            coeffs[i] = 1.0;
            Form {
                coeffs,
                constant: 0.0,
            }
        })
        .collect();
    let mut rows = Vec::new();

    for t in 1..path.len() - 1 {
        let (i, j, k) = (&path[t - 1], &path[t], &path[t + 1]);
        let lm = local_map(net, i, j, k)?;
        debug_assert_eq!(labels, lm.in_axes);
        let w = labels.iter().position(|l| *l == lm.w_label).unwrap();
        let fw = forms[w].clone();
        for (p, l) in labels.iter().enumerate() {
            if p == w {
                continue;
            }
            let lambda = net.eigenvalue(j, l)?;
            if lambda > 0.0 {
                let f = forms[p].axpy(-lambda / lm.e1, &fw);
                rows.push(LinearRow::strict(f.coeffs, -f.constant));
            }
        }
        let mut out_forms = Vec::with_capacity(lm.out_axes.len());
        for l in &lm.out_axes {
            if *l == lm.v_label {
                out_forms.push(fw.scaled(lm.principal_exponent()));
            } else {
                let p = labels.iter().position(|m| m == l).unwrap();
                out_forms.push(forms[p].axpy(lm.exponent(l).unwrap(), &fw));
            }
        }
        let g = global_map(net, j, k)?;
        forms = g
            .matrix
            .iter()
            .zip(&g.offset)
            .map(|(row, b)| {
                let s = row.iter().position(|v| *v != 0.0).unwrap();
                let mut f = out_forms[s].clone();
                f.constant += b;
                f
            })
            .collect();
        labels = g.out_axes.clone();
    }

    let map = LogAffineMap {
        in_axes: axes0.clone(),
        out_axes: labels,
        matrix: forms.iter().map(|f| f.coeffs.clone()).collect(),
        offset: forms.iter().map(|f| f.constant).collect(),
    };
    assert!(
        map.determinant().abs() > 0.0,
        "log-affine passage maps are invertible"
    );
    let pulled_back = RegionSystem {
        section: SectionRef {
            node: path[1].clone(),
            kind: SectionKind::Incoming,
            neighbor: path[0].clone(),
        },
        axes: axes0,
        rows,
    };
    Ok(PathTransfer {
        path,
        map,
        pulled_back,
    })
}

/// Whether points arbitrarily close to the first connection follow `path`.
pub fn followable<S: AsRef<str>>(net: &HeteroclinicNetwork, path: &[S]) -> Result<FeasibilityVerdict> {
    let t = compose_path(net, path)?;
    Ok(cone::decide(&t.pulled_back.cone()))
}

/// Chain the maps pointwise in the original coordinates, returning `None`
/// once the point leaves the domain of the next local map.
pub fn evaluate_chain<S: AsRef<str>>(
    net: &HeteroclinicNetwork,
    path: &[S],
    x_in: &[f64],
) -> Result<Option<Vec<f64>>> {
    let path: Vec<String> = path.iter().map(|s| s.as_ref().to_string()).collect();
    check_path(net, &path)?;
    let mut x = x_in.to_vec();
    for t in 1..path.len() - 1 {
        let (i, j, k) = (&path[t - 1], &path[t], &path[t + 1]);
        if !domain_c(net, i, j, k)?.contains(&x) {
            return Ok(None);
        }
        let lm = local_map(net, i, j, k)?;
        let out = lm.apply(&x);
        let g = global_map(net, j, k)?;
        let conn = net.connection(j, k)?;
        x = g
            .out_axes
            .iter()
            .map(|dst| {
                let (pos, (src, _)) = conn
                    .permutation
                    .iter()
                    .enumerate()
                    .find(|(_, (_, d))| d == dst)
                    .unwrap();
                let s = lm.out_axes.iter().position(|l| l == src).unwrap();
                conn.rescale[pos] * out[s]
            })
            .collect();
    }
    Ok(Some(x))
}
