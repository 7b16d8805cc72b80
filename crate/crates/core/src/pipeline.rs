// SPDX-License-Identifier: Apache-2.0

//! End-to-end compile: placement, scheduling, and evaluation.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::cost::{evaluate, Baseline, CostParams, Metrics};
use crate::device::graph::{DeviceGraph, WeightParams};
use crate::device::{SlotId, Topology};
use crate::error::Result;
use crate::mapping::{initial_mapping, MappingParams};
use crate::scheduler::paths::PathTable;
use crate::scheduler::{schedule_with_paths, Schedule, SchedulerParams};

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CompileOptions {
    pub weights: WeightParams,
    pub mapping: MappingParams,
    pub scheduler: SchedulerParams,
    pub cost: CostParams,
    pub baseline: Baseline,
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub graph: DeviceGraph,
    pub placement: Vec<SlotId>,
    pub schedule: Schedule,
    /// Metrics with `compile_ms` filled in.
    pub metrics: Metrics,
}

/// Maps, schedules and evaluates `circuit` on `topology`. `compile_ms` covers
/// the scheduler only.
pub fn compile(circuit: &Circuit, topology: &Topology, options: &CompileOptions) -> Result<Compiled> {
    options.cost.validate()?;
    let graph = DeviceGraph::build(topology, options.weights)?;
    let placement = initial_mapping(circuit, &graph, &options.mapping)?;
    let started = Instant::now();
    let paths = PathTable::build(&graph, options.scheduler.m);
    let schedule = schedule_with_paths(circuit, &graph, &placement, &options.scheduler, &paths)?;
    let compile_ms = started.elapsed().as_secs_f64() * 1e3;
    let mut metrics = evaluate(&schedule, &graph, &options.cost, options.baseline)?;
    metrics.compile_ms = compile_ms;
    log::debug!(
        "{}: {} shuttles, {} swaps, {} shifts in {compile_ms:.1} ms",
        circuit.name,
        metrics.shuttles,
        metrics.swap_gates,
        metrics.space_shifts
    );
    Ok(Compiled { graph, placement, schedule, metrics })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_benchmark, Benchmark};
    use crate::device::{build_topology, TopologyFamily};
    use crate::scheduler::verify;

    #[test]
    fn qft_on_grid() {
        let c = gen_benchmark(Benchmark::Qft, 12, &Default::default()).unwrap();
        let topo = build_topology(TopologyFamily::Grid { rows: 2, cols: 2 }, 5).unwrap();
        let out = compile(&c, &topo, &CompileOptions::default()).unwrap();
        verify(&c, &out.graph, &out.schedule).unwrap();
        assert_eq!(out.metrics.two_qubit_gates, 132 + out.metrics.swap_gates);
        assert!(out.metrics.success_rate > 0.0 && out.metrics.success_rate < 1.0);
    }
}
