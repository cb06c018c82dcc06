//! Direct numerical integration of vector fields that carry the example
//! networks, with itinerary detection and an empirical check of the
//! followability verdicts.

mod ensemble;
pub mod field;
pub mod integrate;
mod itinerary;
mod skeleton;

pub use ensemble::{
    empirical_switching_test, exit_determinism, local_map_regression, member_initial_state, ExitDeterminism,
    EnsembleResult, ExponentFit, MemberRecord, ObservedPath, RegressionReport, Violation,
};
pub use field::{build_field, FieldKind, NodeChart, VectorField, FIELD_NAMES};
pub use integrate::{dopri5, Control, DenseSegment, IntegrationOutcome, IntegratorConfig};
pub use itinerary::{record_itinerary, Crossing, Event, Itinerary, Recorder, Terminal};
pub use skeleton::{seed_point, Arc, Skeleton};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimConfig {
    /// Entry radius of node neighbourhoods; exit happens at twice this radius.
    pub node_radius: f64,
    /// Transverse coordinates of seeds are `shell^u` with `u` uniform in `[1, 2]`.
    pub shell: f64,
    /// Distance from the skeleton beyond which a trajectory has departed.
    pub departure_radius: f64,
    pub max_time: f64,
    /// Stop once this many node entries have been recorded.
    pub max_visits: usize,
    pub seed: u64,
    pub samples: usize,
    /// Seed only on connections into this node.
    pub start_node: Option<String>,
    pub integrator: IntegratorConfig,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig {
            node_radius: 3e-2,
            shell: 1e-3,
            departure_radius: 0.5,
            max_time: 250.0,
            max_visits: 10,
            seed: 1,
            samples: 1000,
            start_node: None,
            integrator: IntegratorConfig::default(),
        }
    }
}

impl SimConfig {
    pub fn validate(&self, field: &VectorField) -> Result<()> {
        let positive = |v: f64| v > 0.0 && v.is_finite();
        if !positive(self.node_radius) || !positive(self.departure_radius) {
            return Err(Error::Invalid("radii must be positive".into()));
        }
        if !(self.shell > 0.0 && self.shell < 1.0) {
            return Err(Error::Invalid("shell must lie in (0, 1)".into()));
        }
        if !positive(self.max_time) {
            return Err(Error::Invalid("max_time must be positive".into()));
        }
        if !(self.integrator.rtol > 0.0 && self.integrator.atol > 0.0) {
            return Err(Error::Invalid("tolerances must be positive".into()));
        }
        let mut closest = f64::INFINITY;
        for (a, na) in field.nodes.iter().enumerate() {
            for nb in &field.nodes[a + 1..] {
                closest = closest.min(field.node_distance(na, &nb.position));
            }
        }
        if 4.0 * self.node_radius >= closest {
            return Err(Error::Ambiguous(format!(
                "node neighbourhoods overlap; use node_radius below {}",
                closest / 4.0
            )));
        }
        if let Some(s) = &self.start_node {
            field.network.node(s)?;
        }
        Ok(())
    }
}

/// Stored solution: every accepted step with its dense output.
#[derive(Debug, Clone)]
pub struct Trajectory {
    /// Initial log state.
    pub u0: Vec<f64>,
    pub segments: Vec<DenseSegment>,
    pub t_final: f64,
}

impl Trajectory {
    /// Log state at time `t`.
    pub fn log_state(&self, t: f64) -> Vec<f64> {
        if self.segments.is_empty() || t <= 0.0 {
            return self.u0.clone();
        }
        let k = self
            .segments
            .partition_point(|s| s.t1() < t)
            .min(self.segments.len() - 1);
        self.segments[k].eval(t)
    }

    /// Point of the embedding space at time `t`.
    pub fn point(&self, field: &VectorField, t: f64) -> Vec<f64> {
        let u = self.log_state(t);
        let mut x = vec![0.0; u.len()];
        field.embed(&u, &mut x);
        x
    }

    /// Samples `(t, x)` at every step end.
    pub fn samples(&self, field: &VectorField) -> Vec<(f64, Vec<f64>)> {
        let mut out = vec![(0.0, self.point(field, 0.0))];
        for s in &self.segments {
            let u = s.end();
            let mut x = vec![0.0; u.len()];
            field.embed(&u, &mut x);
            out.push((s.t1(), x));
        }
        out
    }
}

/// Integrate from an embedding point with non-negative entries. Zero
/// entries are clipped to the smallest positive double.
pub fn integrate(field: &VectorField, x0: &[f64], config: &SimConfig) -> Result<Trajectory> {
    if x0.len() != field.state_dimension() {
        return Err(Error::DimensionMismatch {
            expected: field.state_dimension(),
            got: x0.len(),
        });
    }
    if x0.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
        return Err(Error::Invalid(
            "initial point must lie in the closed positive orthant".into(),
        ));
    }
    let u0 = field.log_state(x0);
    let mut segments = Vec::new();
    let out = dopri5(
        |u, du| field.rhs_log(u, du),
        &u0,
        config.max_time,
        &config.integrator,
        |seg| {
            segments.push(seg.clone());
            Control::Continue
        },
    )?;
    Ok(Trajectory {
        u0,
        segments,
        t_final: out.t,
    })
}
