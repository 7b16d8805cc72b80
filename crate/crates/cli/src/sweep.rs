// SPDX-License-Identifier: Apache-2.0

//! One-dimensional parameter sweeps.
//!
//! CSV columns, in order: `axis, value, status, error, circuit, qubits,
//! topology, capacity, mapping, gates, baseline, delta, m, inner_weight,
//! shuttle_weight, threshold, alpha, beta, lookahead, a0, swap_multiplier,
//! shuttles, swap_gates, space_shifts, two_qubit_gates, makespan_us,
//! success_rate, compile_ms`. Metric cells are empty for failed runs.

use std::fmt;
use std::io;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use qccd_core::{compile, Circuit, GateFamily, MappingStrategy, Metrics};
use rayon::prelude::*;
use serde::Serialize;

use crate::RunConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Topology,
    Capacity,
    GateFamily,
    Mapping,
    Delta,
    /// Ratio `shuttle_weight / inner_weight`; the shuttle weight is held.
    WeightRatio,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 6] = [
        SweepAxis::Topology,
        SweepAxis::Capacity,
        SweepAxis::GateFamily,
        SweepAxis::Mapping,
        SweepAxis::Delta,
        SweepAxis::WeightRatio,
    ];

    fn name(self) -> &'static str {
        match self {
            SweepAxis::Topology => "topology",
            SweepAxis::Capacity => "capacity",
            SweepAxis::GateFamily => "gates",
            SweepAxis::Mapping => "mapping",
            SweepAxis::Delta => "delta",
            SweepAxis::WeightRatio => "weight-ratio",
        }
    }

    /// Returns `base` with this axis set to `value`.
    pub fn apply(self, base: &RunConfig, value: &str) -> Result<RunConfig> {
        let mut c = base.clone();
        let o = &mut c.options;
        match self {
            SweepAxis::Topology => {
                c.topology = value.to_string();
            }
            SweepAxis::Capacity => c.capacity = Some(value.parse().context("capacity must be an integer")?),
            SweepAxis::GateFamily => o.cost.gate_family = value.parse::<GateFamily>()?,
            SweepAxis::Mapping => o.mapping.strategy = value.parse::<MappingStrategy>()?,
            SweepAxis::Delta => o.scheduler.delta = value.parse().context("delta must be a number")?,
            SweepAxis::WeightRatio => {
                let r: f64 = value.parse().context("weight ratio must be a number")?;
                if !(r > 0.0) {
                    bail!("weight ratio must be positive, got {value}");
                }
                o.weights.inner_weight = o.weights.shuttle_base / r;
            }
        }
        Ok(c)
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepAxis {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase().replace('_', "-");
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == s || (s == "gate-family" && *a == SweepAxis::GateFamily))
            .ok_or_else(|| anyhow::anyhow!("unknown sweep axis `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub axis: String,
    pub value: String,
    pub status: &'static str,
    pub error: String,
    pub circuit: String,
    pub qubits: usize,
    pub topology: String,
    pub capacity: Option<usize>,
    pub mapping: String,
    pub gates: String,
    pub baseline: String,
    pub delta: f64,
    pub m: usize,
    pub inner_weight: f64,
    pub shuttle_weight: f64,
    pub threshold: f64,
    pub alpha: f64,
    pub beta: f64,
    pub lookahead: usize,
    pub a0: f64,
    pub swap_multiplier: u32,
    pub shuttles: Option<usize>,
    pub swap_gates: Option<usize>,
    pub space_shifts: Option<usize>,
    pub two_qubit_gates: Option<usize>,
    pub makespan_us: Option<f64>,
    pub success_rate: Option<f64>,
    pub compile_ms: Option<f64>,
}

impl SweepRow {
    fn new(axis: SweepAxis, value: &str, circuit: &Circuit, c: &RunConfig, result: Result<Metrics>) -> Self {
        let o = &c.options;
        let (status, error, m) = match result {
            Ok(m) => ("ok", String::new(), Some(m)),
            Err(e) => ("failed", format!("{e:#}"), None),
        };
        SweepRow {
            axis: axis.to_string(),
            value: value.to_string(),
            status,
            error,
            circuit: circuit.name.clone(),
            qubits: circuit.n_qubits,
            topology: c.topology.clone(),
            capacity: c.capacity,
            mapping: o.mapping.strategy.to_string(),
            gates: o.cost.gate_family.to_string(),
            baseline: o.baseline.to_string(),
            delta: o.scheduler.delta,
            m: o.scheduler.m,
            inner_weight: o.weights.inner_weight,
            shuttle_weight: o.weights.shuttle_base,
            threshold: o.weights.threshold,
            alpha: o.mapping.alpha,
            beta: o.mapping.beta,
            lookahead: o.mapping.lookahead_k,
            a0: o.cost.a0,
            swap_multiplier: o.cost.swap_gate_multiplier,
            shuttles: m.as_ref().map(|m| m.shuttles),
            swap_gates: m.as_ref().map(|m| m.swap_gates),
            space_shifts: m.as_ref().map(|m| m.space_shifts),
            two_qubit_gates: m.as_ref().map(|m| m.two_qubit_gates),
            makespan_us: m.as_ref().map(|m| m.makespan_us),
            success_rate: m.as_ref().map(|m| m.success_rate),
            compile_ms: m.as_ref().map(|m| m.compile_ms),
        }
    }
}

/// Worker count from `QCCD_SYNC_THREADS`, if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var("QCCD_SYNC_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// Compiles once per value of `axis` and writes one CSV row per run, in the
/// order of `values`. Runs that fail are kept as `failed` rows; the sweep
/// itself fails only if every run did.
pub fn cmd_sweep(base: &RunConfig, axis: SweepAxis, values: &[String]) -> Result<Vec<SweepRow>> {
    let circuit = base.circuit.load()?;
    let run = |value: &String| {
        let result = axis.apply(base, value);
        let cfg = result.as_ref().unwrap_or(base);
        let metrics = result.as_ref().map_err(|e| anyhow::anyhow!("{e:#}")).and_then(|cfg| {
            let topo = cfg.load_topology()?;
            Ok(compile(&circuit, &topo, &cfg.options)?.metrics)
        });
        if let Err(e) = &metrics {
            log::warn!("{axis}={value}: {e:#}");
        }
        SweepRow::new(axis, value, &circuit, cfg, metrics)
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        pool = pool.num_threads(n);
    }
    let rows: Vec<SweepRow> = pool.build()?.install(|| values.par_iter().map(run).collect());

    match &base.out {
        Some(p) => write_rows(csv::Writer::from_path(p).with_context(|| format!("writing {}", p.display()))?, &rows)?,
        None => write_rows(csv::Writer::from_writer(io::stdout()), &rows)?,
    }
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if !rows.is_empty() && failed == rows.len() {
        bail!("all {failed} sweep runs failed");
    }
    Ok(rows)
}

fn write_rows<W: io::Write>(mut w: csv::Writer<W>, rows: &[SweepRow]) -> Result<()> {
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::CircuitSource;

    #[test]
    fn axis_names_round_trip() {
        for a in SweepAxis::ALL {
            assert_eq!(a.to_string().parse::<SweepAxis>().unwrap(), a);
        }
        assert_eq!("gate_family".parse::<SweepAxis>().unwrap(), SweepAxis::GateFamily);
        assert!("speed".parse::<SweepAxis>().is_err());
    }

    #[test]
    fn apply_sets_one_field() {
        let base = RunConfig::new(CircuitSource::Generator("qft:4".into()), "L2:4");
        let c = SweepAxis::WeightRatio.apply(&base, "100").unwrap();
        assert!((c.options.weights.inner_weight - 0.01).abs() < 1e-15);
        assert_eq!(c.options.weights.shuttle_base, base.options.weights.shuttle_base);
        let c = SweepAxis::GateFamily.apply(&base, "AM2").unwrap();
        assert_eq!(c.options.cost.gate_family, GateFamily::AM2);
        assert!(SweepAxis::Capacity.apply(&base, "big").is_err());
    }
}
