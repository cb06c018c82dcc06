use std::process::Command;

use heteroswitch::cli::run;
use heteroswitch::switching::NetworkReport;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("heteroswitch").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

#[test]
fn analyze_text_and_json() {
    let (code, text, _) = call(&["analyze", "fixtures/rsp"]);
    assert_eq!(code, 0);
    assert!(text.contains("no switching along any connection"));
    let (code, json, _) = call(&["analyze", "bowtie", "--format", "json"]);
    assert_eq!(code, 0);
    let report: NetworkReport = serde_json::from_str(&json).unwrap();
    assert_eq!(report.distribution_nodes, ["xi2"]);
}

#[test]
fn format_flags_are_exclusive() {
    let (code, _, err) = call(&["--json", "--format", "text", "cusps", "fig6"]);
    assert_eq!(code, 2);
    assert!(err.contains("cannot be used with"));
}

#[test]
fn paths_lists_verdicts() {
    let (code, text, _) = call(&["paths", "r6_simplex", "--start", "xi1", "--depth", "3"]);
    assert_eq!(code, 0);
    assert!(text.contains("3 feasible"));
    let (code, debug, _) = call(&["paths", "bowtie", "--start", "xi1", "--depth", "2", "--debug"]);
    assert_eq!(code, 0);
    assert!(debug.contains("log map") && debug.contains("certificate"));
}

#[test]
fn cusps_reports_an_empty_cycle() {
    let (code, text, _) = call(&["cusps", "fig6"]);
    assert_eq!(code, 0);
    assert!(text.contains("intersect near the origin: false"));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["paths", "bowtie"]).0, 2);
    let (code, _, err) = call(&["analyze", "no_such_network"]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error:"));
    assert_eq!(call(&["verify", "--only", "11"]).0, 2);
    assert_eq!(call(&["simulate", "bowtie", "--param", "a_9_9"]).0, 2);
}

#[test]
fn simulate_writes_itineraries_and_plot_data() {
    let dir = std::env::temp_dir().join(format!("heteroswitch-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("itineraries.csv");
    let plots = dir.join("plots");
    let (code, text, err) = call(&[
        "simulate",
        "kirk_silber",
        "--samples",
        "6",
        "--seed",
        "3",
        "--out",
        csv.to_str().unwrap(),
        "--plot-data",
        plots.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(text.contains("violations: 0"));
    let mut rdr = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(
        rdr.headers().unwrap(),
        vec!["member", "event_index", "event_type", "node_or_edge", "time"]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert!(rows.iter().any(|r| &r[2] == "traversed_connection" && r[3].contains("->")));
    assert!(plots.join("time_series.csv").exists());
    assert!(plots.join("section_crossings.csv").exists());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn simulate_reads_a_config_file() {
    let dir = std::env::temp_dir().join(format!("heteroswitch-cfg-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("sim.json");
    std::fs::write(&cfg, r#"{"samples": 3, "max_time": 40.0, "seed": 9}"#).unwrap();
    let (code, json, err) = call(&["--json", "simulate", "bowtie", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["samples"], 3);
    assert_eq!(v["seed"], 9);
    std::fs::write(&cfg, r#"{"sample": 3}"#).unwrap();
    assert_eq!(call(&["simulate", "bowtie", "--config", cfg.to_str().unwrap()]).0, 1);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_subset_prints_one_line_per_criterion() {
    let (code, text, _) = call(&["verify", "--only", "2", "--only", "6"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = text.lines().filter(|l| l.starts_with("[PASS]")).collect();
    assert_eq!(lines.len(), 2);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_heteroswitch");
    let ok = Command::new(bin).args(["cusps", "fig5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let usage = Command::new(bin).arg("--nope").output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&help.stdout).contains("simulate"));
}
