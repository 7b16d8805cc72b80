// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::io::Write;

use anyhow::{Context, Result};
use qccd_core::state::{HeatModel, Snapshot};
use qccd_core::{compile, Compiled, MachineState};

use crate::{sorted_json, RunConfig};

/// Runs one compile and writes its outputs. Returns the compile result so
/// callers can inspect it.
pub fn cmd_compile(config: &RunConfig) -> Result<Compiled> {
    let circuit = config.circuit.load()?;
    let topology = config.load_topology()?;
    let out = compile(&circuit, &topology, &config.options)
        .with_context(|| format!("compiling {} on {}", config.circuit.label(), config.topology))?;

    let json = sorted_json(&out.metrics)?;
    match &config.out {
        Some(p) => fs::write(p, &json).with_context(|| format!("writing {}", p.display()))?,
        None => std::io::stdout().write_all(json.as_bytes())?,
    }
    if let Some(p) = &config.events_csv {
        let mut w = csv::Writer::from_path(p).with_context(|| format!("writing {}", p.display()))?;
        for row in &out.metrics.log {
            w.serialize(row)?;
        }
        w.flush()?;
    }
    if let Some(p) = &config.snapshot {
        let snap = final_snapshot(&out, config.options.cost.heat_model())?;
        fs::write(p, sorted_json(&snap)?).with_context(|| format!("writing {}", p.display()))?;
    }

    let m = &out.metrics;
    let line = format!(
        "{} on {}: shuttles={} swaps={} shifts={} makespan_us={:.1} success={:.6} compile_ms={:.1}",
        circuit.name,
        config.topology,
        m.shuttles,
        m.swap_gates,
        m.space_shifts,
        m.makespan_us,
        m.success_rate,
        m.compile_ms
    );
    // Keep stdout parseable when the metrics went there.
    if config.out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(out)
}

/// Occupancy and heat after the whole schedule has run.
pub fn final_snapshot(out: &Compiled, heat: HeatModel) -> Result<Snapshot> {
    let mut st = MachineState::new(&out.graph, &out.schedule.initial, heat)?;
    for ev in &out.schedule.events {
        if let Some((u, v)) = ev.swap_edge() {
            st.apply_generic_swap(&out.graph, u, v)?;
        }
    }
    Ok(st.snapshot(&out.graph))
}
