//! Shipped example networks and cusp configurations.
//!
//! Files are looked up in `$HETEROSWITCH_FIXTURES`, then in the crate's
//! `fixtures/` directory; the copies compiled into the binary are the final
//! fallback so installed binaries keep working.

use std::path::{Path, PathBuf};

use crate::cusp::{load_cusps, PowerRegion};
use crate::error::{Error, Result};
use crate::network::{load_network, HeteroclinicNetwork};

pub const ENV_VAR: &str = "HETEROSWITCH_FIXTURES";

pub const NETWORKS: [&str; 7] = [
    "kirk_silber",
    "bowtie",
    "house",
    "rsp",
    "rspls",
    "r6_simplex",
    "ac_network",
];

pub const CUSPS: [&str; 7] = [
    "fig3", "fig3_nested", "fig4", "fig5", "fig6", "fig7a", "fig7b",
];

fn embedded_network(name: &str) -> Option<&'static str> {
    Some(match name {
        "kirk_silber" => include_str!("../fixtures/kirk_silber.json"),
        "bowtie" => include_str!("../fixtures/bowtie.json"),
        "house" => include_str!("../fixtures/house.json"),
        "rsp" => include_str!("../fixtures/rsp.json"),
        "rspls" => include_str!("../fixtures/rspls.json"),
        "r6_simplex" => include_str!("../fixtures/r6_simplex.json"),
        "ac_network" => include_str!("../fixtures/ac_network.json"),
        _ => return None,
    })
}

fn embedded_cusps(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig3" => include_str!("../fixtures/cusps/fig3.cusps"),
        "fig3_nested" => include_str!("../fixtures/cusps/fig3_nested.cusps"),
        "fig4" => include_str!("../fixtures/cusps/fig4.cusps"),
        "fig5" => include_str!("../fixtures/cusps/fig5.cusps"),
        "fig6" => include_str!("../fixtures/cusps/fig6.cusps"),
        "fig7a" => include_str!("../fixtures/cusps/fig7a.cusps"),
        "fig7b" => include_str!("../fixtures/cusps/fig7b.cusps"),
        _ => return None,
    })
}

/// Directory holding the fixture files.
pub fn fixture_dir() -> PathBuf {
    match std::env::var_os(ENV_VAR) {
        Some(d) => PathBuf::from(d),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures"),
    }
}

fn stem(reference: &str) -> &str {
    let base = reference.rsplit(['/', '\\']).next().unwrap_or(reference);
    base.split('.').next().unwrap_or(base)
}

fn read_reference(reference: &str, sub: &str, ext: &str) -> Result<Option<String>> {
    let direct = Path::new(reference);
    if direct.is_file() {
        return Ok(Some(std::fs::read_to_string(direct)?));
    }
    let with_ext = PathBuf::from(format!("{reference}.{ext}"));
    if with_ext.is_file() {
        return Ok(Some(std::fs::read_to_string(with_ext)?));
    }
    let in_dir = fixture_dir().join(sub).join(format!("{}.{ext}", stem(reference)));
    if in_dir.is_file() {
        return Ok(Some(std::fs::read_to_string(in_dir)?));
    }
    Ok(None)
}

/// Load a network by file path, by `fixtures/<name>` or by bare fixture name.
pub fn network(reference: &str) -> Result<HeteroclinicNetwork> {
    let text = match read_reference(reference, "", "json")? {
        Some(t) => t,
        None => embedded_network(stem(reference))
            .ok_or_else(|| Error::Invalid(format!("no network fixture `{reference}`")))?
            .to_string(),
    };
    let mut net = load_network(&text)?;
    if net.name.is_empty() {
        net.name = stem(reference).to_string();
    }
    Ok(net)
}

/// Load a cusp list by file path or fixture name.
pub fn cusps(reference: &str) -> Result<Vec<PowerRegion>> {
    let text = match read_reference(reference, "cusps", "cusps")? {
        Some(t) => t,
        None => embedded_cusps(stem(reference))
            .ok_or_else(|| Error::Invalid(format!("no cusp fixture `{reference}`")))?
            .to_string(),
    };
    load_cusps(&text)
}
