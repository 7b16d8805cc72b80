// SPDX-License-Identifier: Apache-2.0

//! Command-line plumbing for `qccd-sync`: loading circuits and topologies,
//! running single compiles, parameter sweeps and the oracle gap check.

pub mod args;
pub mod compile;
pub mod oracle_check;
pub mod sweep;

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qccd_core::circuit::{parse_generator_spec, parse_qasm};
use qccd_core::device::build_topology;
use qccd_core::{Circuit, CompileOptions, Error, Topology, TopologyFamily};

pub use compile::cmd_compile;
pub use oracle_check::{cmd_oracle_check, OracleCheckConfig};
pub use sweep::{cmd_sweep, SweepAxis};

/// Where the circuit comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum CircuitSource {
    File(PathBuf),
    /// `name:size[:key=value,...]`
    Generator(String),
}

impl CircuitSource {
    pub fn load(&self) -> Result<Circuit> {
        match self {
            CircuitSource::File(p) => {
                let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
                let mut c = parse_qasm(&text).with_context(|| format!("parsing {}", p.display()))?;
                if c.name.is_empty() {
                    c.name = p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                }
                Ok(c)
            }
            CircuitSource::Generator(spec) => Ok(parse_generator_spec(spec)?),
        }
    }

    pub fn label(&self) -> String {
        match self {
            CircuitSource::File(p) => p.display().to_string(),
            CircuitSource::Generator(s) => s.clone(),
        }
    }
}

/// Everything one compile run needs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub circuit: CircuitSource,
    /// `G2x2:22`, `L4`, `S4`, or a path to a JSON topology file.
    pub topology: String,
    /// Overrides (or supplies) the capacity of a family spec.
    pub capacity: Option<usize>,
    pub options: CompileOptions,
    pub out: Option<PathBuf>,
    pub events_csv: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    /// Only used where instances are drawn at random.
    pub seed: u64,
}

impl RunConfig {
    pub fn new(circuit: CircuitSource, topology: impl Into<String>) -> Self {
        RunConfig {
            circuit,
            topology: topology.into(),
            capacity: None,
            options: CompileOptions::default(),
            out: None,
            events_csv: None,
            snapshot: None,
            seed: 0,
        }
    }

    pub fn load_topology(&self) -> Result<Topology> {
        Ok(load_topology(&self.topology, self.capacity)?)
    }
}

/// Resolves a topology spec. A spec that names an existing file, or ends in
/// `.json`, is read as a JSON topology; anything else is `FAMILY[:capacity]`.
pub fn load_topology(spec: &str, capacity: Option<usize>) -> qccd_core::Result<Topology> {
    let path = Path::new(spec);
    if spec.ends_with(".json") || path.is_file() {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::InvalidTopology(format!("cannot read `{spec}`: {e}")))?;
        if capacity.is_some() {
            log::warn!("--capacity is ignored for topology files");
        }
        return Topology::from_json(&text);
    }
    let (family, cap) = match spec.split_once(':') {
        Some((f, c)) => {
            let c: usize =
                c.parse().map_err(|_| Error::InvalidTopology(format!("bad capacity `{c}` in `{spec}`")))?;
            (f, Some(c))
        }
        None => (spec, None),
    };
    let family: TopologyFamily = family.parse()?;
    let cap = capacity
        .or(cap)
        .ok_or_else(|| Error::InvalidTopology(format!("`{spec}` has no capacity; use FAMILY:CAP or --capacity")))?;
    build_topology(family, cap)
}

/// Exit status for a failed command: 2 for bad input or configuration, 1 for
/// anything that went wrong while running.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Syntax { .. }
                | Error::UnsupportedGate { .. }
                | Error::QubitOutOfRange { .. }
                | Error::UnknownBenchmark(_)
                | Error::BenchmarkTooSmall { .. }
                | Error::InvalidCircuit(_)
                | Error::InvalidTopology(_)
                | Error::InvalidWeights(_)
                | Error::InsufficientCapacity { .. }
                | Error::InvalidMapping(_)
                | Error::InvalidParameter(_)
                | Error::OracleLimits(_) => 2,
                _ => 1,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

/// Serializes to pretty JSON with object keys in sorted order.
pub fn sorted_json<T: serde::Serialize>(value: &T) -> Result<String> {
    // serde_json's Map is a BTreeMap without the preserve_order feature.
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_specs() {
        let t = load_topology("G2x2:22", None).unwrap();
        assert_eq!(t.traps.len(), 4);
        assert_eq!(t.max_capacity(), 22);
        let t = load_topology("L4", Some(5)).unwrap();
        assert_eq!(t.total_capacity(), 20);
        // --capacity wins over the inline one
        assert_eq!(load_topology("S3:4", Some(6)).unwrap().max_capacity(), 6);
    }

    #[test]
    fn bad_specs_are_config_errors() {
        for spec in ["G2x2", "Q4:3", "G2:3", "L4:x", "missing.json"] {
            let err = anyhow::Error::from(load_topology(spec, None).unwrap_err());
            assert_eq!(exit_code(&err), 2, "{spec}");
        }
    }

    #[test]
    fn json_keys_sorted() {
        let s = sorted_json(&serde_json::json!({"b": 1, "a": {"d": 2, "c": 3}})).unwrap();
        let a = s.find("\"a\"").unwrap();
        let b = s.find("\"b\"").unwrap();
        assert!(a < b);
        assert!(s.find("\"c\"").unwrap() < s.find("\"d\"").unwrap());
    }
}
