//! Command-line front end. `run` parses arguments, dispatches and returns the
//! process exit code: 0 on success, 1 on internal errors (and on failed
//! verification), 2 on usage errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::acceptance::{run_all, run_criterion, AcceptanceOptions, CRITERIA};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::report::{analyze_cusps, render_cusps, render_ensemble, render_enumeration, render_network_report};
use crate::sim::{
    build_field, empirical_switching_test, integrate, member_initial_state, Event, EnsembleResult,
    SimConfig, VectorField,
};
use crate::switching::{enumerate_followable, network_report_with, ReportOptions, DEFAULT_PATH_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct Output {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Shorthand for `--format json`.
    #[arg(long, global = true, conflicts_with = "format")]
    json: bool,
}

impl Output {
    fn format(&self) -> Format {
        if self.json {
            Format::Json
        } else {
            self.format
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "heteroswitch", version, about = "Switching analysis for quasi-simple heteroclinic networks")]
struct Cli {
    #[command(flatten)]
    output: Output,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a network and report its switching verdicts.
    Analyze {
        /// Network file or fixture name (e.g. `fixtures/rsp`).
        network: String,
        /// Counting criteria only, without the cone computations.
        #[arg(long)]
        no_geometry: bool,
        /// Search depth for an unfollowable path.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Enumerate paths from a node and decide which are followable.
    Paths {
        network: String,
        #[arg(long)]
        start: String,
        /// Number of connections in each path.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        /// Print composed maps, pulled-back constraints and certificates.
        #[arg(long)]
        debug: bool,
    },
    /// Decide whether a list of cusps intersects near the origin.
    Cusps {
        /// Cusp file or fixture name (e.g. `fig6`).
        file: String,
    },
    /// Integrate an ensemble near a built-in network and check the itineraries.
    Simulate {
        /// kirk_silber, bowtie, rsp_replicator, rspls_replicator or r6_simplex.
        field: String,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// JSON file with simulation settings.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Field parameter override, `name=value` (repeatable).
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
        /// Seed only on connections into this node.
        #[arg(long)]
        start_node: Option<String>,
        /// CSV file receiving every itinerary event.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Directory receiving time-series and section-crossing CSV files.
        #[arg(long)]
        plot_data: Option<PathBuf>,
    },
    /// Run the example regression suite and print one line per criterion.
    Verify {
        /// Run only these criteria (repeatable).
        #[arg(long = "only")]
        only: Vec<usize>,
    },
}

fn parse_param(s: &str) -> std::result::Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let v: f64 = v.parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.to_string(), v))
}

fn emit<T: Serialize>(out: &mut dyn Write, format: Format, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    match format {
        Format::Json => {
            let s = serde_json::to_string_pretty(value)?;
            writeln!(out, "{s}")?;
        }
        Format::Text => write!(out, "{}", text())?,
    }
    Ok(())
}

/// Parse `args` (program name first) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => 0,
        Err(Error::Invalid(msg)) | Err(Error::UnknownNode(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let format = cli.output.format();
    match &cli.command {
        Command::Analyze {
            network,
            no_geometry,
            depth,
        } => {
            let net = fixtures::network(network)?;
            let opts = ReportOptions {
                geometry: !no_geometry,
                witness_depth: *depth,
                ..ReportOptions::default()
            };
            let report = network_report_with(&net, &opts)?;
            emit(out, format, &report, || render_network_report(&report))?;
        }
        Command::Paths {
            network,
            start,
            depth,
            debug,
        } => {
            let net = fixtures::network(network)?;
            let e = enumerate_followable(&net, start, *depth, DEFAULT_PATH_CAP)?;
            let text = render_enumeration(&net, &e, *debug)?;
            emit(out, format, &e, || text)?;
        }
        Command::Cusps { file } => {
            let regions = fixtures::cusps(file)?;
            let a = analyze_cusps(&regions)?;
            emit(out, format, &a, || render_cusps(&a))?;
        }
        Command::Simulate {
            field,
            samples,
            seed,
            config,
            params,
            start_node,
            out: csv_out,
            plot_data,
        } => {
            let mut cfg = match config {
                Some(p) => serde_json::from_str::<SimConfig>(&std::fs::read_to_string(p)?)?,
                None => SimConfig::default(),
            };
            if let Some(n) = samples {
                cfg.samples = *n;
            }
            if let Some(s) = seed {
                cfg.seed = *s;
            }
            if start_node.is_some() {
                cfg.start_node = start_node.clone();
            }
            let params: BTreeMap<String, f64> = params.iter().cloned().collect();
            let f = build_field(field, &params)?;
            let result = empirical_switching_test(&f, &f.network, &cfg)?;
            if let Some(p) = csv_out {
                write_itineraries(p, &result)?;
            }
            if let Some(dir) = plot_data {
                write_plot_data(dir, &f, &cfg, &result)?;
            }
            emit(out, format, &result, || render_ensemble(&result))?;
            if !result.violations.is_empty() {
                return Ok(1);
            }
        }
        Command::Verify { only } => {
            let opts = AcceptanceOptions::default();
            let results = if only.is_empty() {
                run_all(&opts)
            } else {
                for id in only {
                    if *id == 0 || *id > CRITERIA.len() {
                        return Err(Error::Invalid(format!(
                            "criteria are numbered 1 to {}",
                            CRITERIA.len()
                        )));
                    }
                }
                only.iter().map(|id| run_criterion(*id, &opts)).collect()
            };
            let passed = results.iter().filter(|r| r.passed).count();
            emit(out, format, &results, || {
                let mut s: String = results.iter().map(|r| r.line() + "\n").collect();
                s.push_str(&format!("{passed}/{} criteria passed\n", results.len()));
                s
            })?;
            if passed != results.len() {
                return Ok(1);
            }
        }
    }
    Ok(0)
}

fn write_itineraries(path: &Path, result: &EnsembleResult) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["member", "event_index", "event_type", "node_or_edge", "time"])?;
    for m in &result.members {
        for (k, e) in m.itinerary.events.iter().enumerate() {
            let (kind, subject, t) = match e {
                Event::EnteredNode { node, t } => ("entered_node", node.clone(), *t),
                Event::TraversedConnection { from, to, t } => {
                    ("traversed_connection", format!("{from}->{to}"), *t)
                }
            };
            w.write_record([
                m.member.to_string(),
                k.to_string(),
                kind.to_string(),
                subject,
                t.to_string(),
            ])?;
        }
        w.write_record([
            m.member.to_string(),
            m.itinerary.events.len().to_string(),
            "terminal".to_string(),
            m.itinerary.terminal.as_str().to_string(),
            String::new(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// `time_series.csv` for the first member and `section_crossings.csv` with the
/// entry points of every member.
fn write_plot_data(
    dir: &Path,
    field: &VectorField,
    cfg: &SimConfig,
    result: &EnsembleResult,
) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    let dim = field.state_dimension();
    let header = |first: &[&str]| -> Vec<String> {
        first
            .iter()
            .map(|s| s.to_string())
            .chain((0..dim).map(|i| format!("x{i}")))
            .collect()
    };
    let mut cross = csv::Writer::from_path(dir.join("section_crossings.csv"))?;
    cross.write_record(header(&["member", "node", "time"]))?;
    for m in &result.members {
        for c in &m.itinerary.crossings {
            let mut rec = vec![m.member.to_string(), c.node.clone(), c.t.to_string()];
            rec.extend(c.point.iter().map(|v| v.to_string()));
            cross.write_record(rec)?;
        }
    }
    cross.flush()?;

    if let Some(first) = result.members.first() {
        let (_, x0) = member_initial_state(field, cfg, first.member)?;
        let end = first
            .itinerary
            .events
            .last()
            .map(|e| match e {
                Event::EnteredNode { t, .. } | Event::TraversedConnection { t, .. } => *t,
            })
            .unwrap_or(cfg.max_time);
        let run = SimConfig {
            max_time: (end + 5.0).min(cfg.max_time),
            ..cfg.clone()
        };
        let traj = integrate(field, &x0, &run)?;
        let mut ts = csv::Writer::from_path(dir.join("time_series.csv"))?;
        ts.write_record(header(&["time"]))?;
        for (t, x) in traj.samples(field) {
            let mut rec = vec![t.to_string()];
            rec.extend(x.iter().map(|v| v.to_string()));
            ts.write_record(rec)?;
        }
        ts.flush()?;
    }
    Ok(())
}
