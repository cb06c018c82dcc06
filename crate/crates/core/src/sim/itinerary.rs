use serde::{Deserialize, Serialize};

use super::field::VectorField;
use super::integrate::{Control, DenseSegment};
use super::skeleton::Skeleton;
use super::{SimConfig, Trajectory};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Event {
    EnteredNode { node: String, t: f64 },
    /// `t` is the exit time from the neighbourhood of `from`.
    TraversedConnection { from: String, to: String, t: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Terminal {
    StillNearNetwork,
    Departed,
    TimeExhausted,
}

impl Terminal {
    pub fn as_str(self) -> &'static str {
        match self {
            Terminal::StillNearNetwork => "still_near_network",
            Terminal::Departed => "departed",
            Terminal::TimeExhausted => "time_exhausted",
        }
    }
}

/// Point where a trajectory entered a node neighbourhood.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Crossing {
    pub node: String,
    pub t: f64,
    pub point: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Itinerary {
    pub events: Vec<Event>,
    pub terminal: Terminal,
    /// Connection the initial point was placed on; the first entry event of
    /// a seeded itinerary is its source node at `t = 0`.
    pub seeded_on: Option<(String, String)>,
    pub crossings: Vec<Crossing>,
    pub departure: Option<String>,
}

impl Itinerary {
    /// Node sequence in visiting order.
    pub fn nodes(&self) -> Vec<String> {
        self.events
            .iter()
            .filter_map(|e| match e {
                Event::EnteredNode { node, .. } => Some(node.clone()),
                _ => None,
            })
            .collect()
    }
}

/// Online itinerary detection, fed one accepted integration step at a time.
pub struct Recorder<'a> {
    field: &'a VectorField,
    skeleton: &'a Skeleton,
    config: &'a SimConfig,
    inside: Option<usize>,
    last: Option<usize>,
    last_exit: f64,
    expected: Option<usize>,
    seeded_on: Option<(String, String)>,
    events: Vec<Event>,
    crossings: Vec<Crossing>,
    terminal: Option<Terminal>,
    departure: Option<String>,
    visits: usize,
}

impl<'a> Recorder<'a> {
    pub fn new(
        field: &'a VectorField,
        skeleton: &'a Skeleton,
        config: &'a SimConfig,
        seeded_on: Option<(&str, &str)>,
    ) -> Result<Self> {
        let mut rec = Recorder {
            field,
            skeleton,
            config,
            inside: None,
            last: None,
            last_exit: 0.0,
            expected: None,
            seeded_on: None,
            events: Vec::new(),
            crossings: Vec::new(),
            terminal: None,
            departure: None,
            visits: 0,
        };
        if let Some((from, to)) = seeded_on {
            skeleton
                .arc(from, to)
                .ok_or_else(|| Error::MissingConnection(from.into(), to.into()))?;
            let a = rec.index(from)?;
            rec.expected = Some(rec.index(to)?);
            rec.last = Some(a);
            rec.events.push(Event::EnteredNode {
                node: from.to_string(),
                t: 0.0,
            });
            rec.seeded_on = Some((from.to_string(), to.to_string()));
        }
        Ok(rec)
    }

    fn index(&self, id: &str) -> Result<usize> {
        self.field
            .nodes
            .iter()
            .position(|n| n.id == id)
            .ok_or_else(|| Error::UnknownNode(id.to_string()))
    }

    fn embed(&self, u: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; u.len()];
        self.field.embed(u, &mut x);
        x
    }

    fn distance(&self, node: usize, x: &[f64]) -> f64 {
        self.field.node_distance(&self.field.nodes[node], x)
    }

    /// Time inside the step where the distance to `node` crosses `level`.
    fn locate(&self, seg: &DenseSegment, node: usize, level: f64) -> f64 {
        let f = |t: f64| self.distance(node, &self.embed(&seg.eval(t))) - level;
        let (mut a, mut b) = (seg.t0, seg.t1());
        let fa = f(a);
        if fa.signum() == f(b).signum() {
            return b;
        }
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if f(m).signum() == fa.signum() {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-12 {
                break;
            }
        }
        0.5 * (a + b)
    }

    /// Examine the initial state.
    pub fn start(&mut self, u0: &[f64]) -> Control {
        let x = self.embed(u0);
        let hit = (0..self.field.nodes.len()).find(|n| self.distance(*n, &x) < self.config.node_radius);
        match hit {
            Some(n) => self.enter(n, 0.0, x),
            None => self.check_departure(&x, 0.0),
        }
    }

    pub fn feed(&mut self, seg: &DenseSegment) -> Control {
        if self.terminal.is_some() {
            return Control::Stop;
        }
        let x = self.embed(&seg.end());
        let r = self.config.node_radius;
        if let Some(m) = self.inside {
            if self.distance(m, &x) <= 2.0 * r {
                return Control::Continue;
            }
            self.last_exit = self.locate(seg, m, 2.0 * r);
            self.inside = None;
        }
        let hit = (0..self.field.nodes.len()).find(|n| self.distance(*n, &x) < r);
        match hit {
            Some(n) => {
                let t = self.locate(seg, n, r);
                let p = self.embed(&seg.eval(t));
                self.enter(n, t, p)
            }
            None => self.check_departure(&x, seg.t1()),
        }
    }

    fn enter(&mut self, n: usize, t: f64, point: Vec<f64>) -> Control {
        let id = self.field.nodes[n].id.clone();
        self.inside = Some(n);
        match self.last {
            Some(m) if m == n && self.expected.is_none() => return Control::Continue,
            Some(m) => {
                let from = self.field.nodes[m].id.clone();
                let adjacent = self.field.network.connection(&from, &id).is_ok();
                let as_seeded = self.expected.map_or(true, |e| e == n);
                if !adjacent || !as_seeded {
                    self.departure = Some(format!("entered {id} after {from} without a connection"));
                    return self.stop(Terminal::Departed);
                }
                self.events.push(Event::TraversedConnection {
                    from,
                    to: id.clone(),
                    t: self.last_exit,
                });
            }
            None => {}
        }
        self.expected = None;
        self.last = Some(n);
        self.events.push(Event::EnteredNode { node: id.clone(), t });
        self.crossings.push(Crossing { node: id, t, point });
        self.visits += 1;
        if self.visits >= self.config.max_visits {
            return self.stop(Terminal::StillNearNetwork);
        }
        Control::Continue
    }

    fn check_departure(&mut self, x: &[f64], t: f64) -> Control {
        let arcs = &self.skeleton.arcs;
        let d = match (self.last, self.expected) {
            (Some(m), Some(e)) => {
                let (from, to) = (&self.field.nodes[m].id, &self.field.nodes[e].id);
                arcs.iter()
                    .filter(|a| a.from == *from && a.to == *to)
                    .map(|a| a.distance(x))
                    .fold(f64::INFINITY, f64::min)
            }
            (Some(m), None) => {
                let from = &self.field.nodes[m].id;
                arcs.iter()
                    .filter(|a| a.from == *from)
                    .map(|a| a.distance(x))
                    .fold(f64::INFINITY, f64::min)
            }
            _ => arcs.iter().map(|a| a.distance(x)).fold(f64::INFINITY, f64::min),
        };
        if d > self.config.departure_radius {
            self.departure = Some(format!("distance {d:.3} from the network at t = {t:.3}"));
            return self.stop(Terminal::Departed);
        }
        Control::Continue
    }

    fn stop(&mut self, terminal: Terminal) -> Control {
        self.terminal = Some(terminal);
        Control::Stop
    }

    pub fn finish(self) -> Itinerary {
        Itinerary {
            events: self.events,
            terminal: self.terminal.unwrap_or(Terminal::TimeExhausted),
            seeded_on: self.seeded_on,
            crossings: self.crossings,
            departure: self.departure,
        }
    }
}

/// Itinerary of a stored trajectory.
pub fn record_itinerary(
    trajectory: &Trajectory,
    field: &VectorField,
    config: &SimConfig,
    seeded_on: Option<(&str, &str)>,
) -> Result<Itinerary> {
    config.validate(field)?;
    let skeleton = Skeleton::build(field)?;
    let mut rec = Recorder::new(field, &skeleton, config, seeded_on)?;
    if rec.start(&trajectory.u0) == Control::Continue {
        for seg in &trajectory.segments {
            if rec.feed(seg) == Control::Stop {
                break;
            }
        }
    }
    Ok(rec.finish())
}
