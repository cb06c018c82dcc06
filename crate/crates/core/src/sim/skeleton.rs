use rand::Rng;

use super::field::{FieldKind, VectorField};
use super::integrate::{dopri5, Control, IntegratorConfig};
use crate::error::{Error, Result};

/// Polyline approximations of every connection, obtained by integrating the
/// field inside the connection's invariant plane.
#[derive(Debug, Clone)]
pub struct Skeleton {
    pub arcs: Vec<Arc>,
}

#[derive(Debug, Clone)]
pub struct Arc {
    pub from: String,
    pub to: String,
    pub points: Vec<Vec<f64>>,
    /// Point on the connection halfway along its arc length.
    pub midpoint: Vec<f64>,
}

const LAUNCH: f64 = 1e-8;
const ARRIVAL: f64 = 1e-5;

impl Skeleton {
    pub fn build(field: &VectorField) -> Result<Skeleton> {
        let cfg = IntegratorConfig {
            rtol: 1e-10,
            atol: 1e-16,
            h_max: 0.5,
            ..Default::default()
        };
        let mut arcs = Vec::new();
        for conn in &field.network.connections {
            let src = field.node(&conn.from)?;
            let dst = field.node(&conn.to)?;
            let w = field.label_index(&conn.from, conn.expanding_label())?;
            let mut x0 = src.position.clone();
            x0[w] = LAUNCH;
            if !matches!(field.kind, FieldKind::Simplex { .. }) {
                let vertex = (0..x0.len())
                    .find(|i| src.position[*i] == 1.0 && same_block(field, *i, w))
                    .unwrap();
                x0[vertex] -= LAUNCH;
            }
            let mut points = vec![x0.clone()];
            let mut arrived = false;
            dopri5(
                |x, dx| field.rhs(x, dx),
                &x0,
                2000.0,
                &cfg,
                |seg| {
                    let x = seg.end();
                    arrived = field.node_distance(dst, &x) < ARRIVAL;
                    points.push(x);
                    if arrived {
                        Control::Stop
                    } else {
                        Control::Continue
                    }
                },
            )?;
            if !arrived {
                return Err(Error::Field(format!(
                    "connection {} -> {} is not realized by {}",
                    conn.from, conn.to, field.name
                )));
            }
            points.push(dst.position.clone());
            let mut length = vec![0.0];
            for p in points.windows(2) {
                length.push(length.last().unwrap() + dist(&p[0], &p[1]));
            }
            let half = length.last().unwrap() / 2.0;
            let k = length.partition_point(|l| *l < half).min(points.len() - 2);
            arcs.push(Arc {
                from: conn.from.clone(),
                to: conn.to.clone(),
                midpoint: points[k].clone(),
                points,
            });
        }
        Ok(Skeleton { arcs })
    }

    pub fn arc(&self, from: &str, to: &str) -> Option<&Arc> {
        self.arcs.iter().find(|a| a.from == from && a.to == to)
    }
}

impl Arc {
    /// Euclidean distance from `x` to the polyline.
    pub fn distance(&self, x: &[f64]) -> f64 {
        self.points
            .windows(2)
            .map(|s| segment_distance(x, &s[0], &s[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn same_block(field: &VectorField, i: usize, j: usize) -> bool {
    match &field.kind {
        FieldKind::Bimatrix { a, .. } => (i < a.len()) == (j < a.len()),
        _ => true,
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn segment_distance(x: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let mut ab2 = 0.0;
    let mut axab = 0.0;
    for i in 0..x.len() {
        let d = b[i] - a[i];
        ab2 += d * d;
        axab += (x[i] - a[i]) * d;
    }
    let s = if ab2 > 0.0 { (axab / ab2).clamp(0.0, 1.0) } else { 0.0 };
    x.iter()
        .enumerate()
        .map(|(i, xi)| {
            let p = a[i] + s * (b[i] - a[i]);
            (xi - p) * (xi - p)
        })
        .sum::<f64>()
        .sqrt()
}

/// Initial point near the middle of `arc`: coordinates vanishing on the
/// connection are set to `shell^u` with `u` uniform in `[1, 2]`.
pub fn seed_point<R: Rng>(field: &VectorField, arc: &Arc, shell: f64, rng: &mut R) -> Vec<f64> {
    let mut x = arc.midpoint.clone();
    for xi in x.iter_mut() {
        if *xi == 0.0 {
            *xi = shell.powf(rng.gen_range(1.0..2.0));
        }
    }
    match &field.kind {
        FieldKind::Simplex { .. } => {}
        FieldKind::Bimatrix { a, .. } => {
            let na = a.len();
            normalize(&mut x[..na]);
            normalize(&mut x[na..]);
        }
        FieldKind::Replicator { .. } => normalize(&mut x),
    }
    x
}

fn normalize(x: &mut [f64]) {
    let s: f64 = x.iter().sum();
    for v in x {
        *v /= s;
    }
}
