// SPDX-License-Identifier: Apache-2.0

//! Independent replay checker for schedules.
//!
//! Rebuilds the machine state from the initial placement and re-applies every
//! event, checking that generic swaps are valid and reproduce the recorded
//! event, that gates respect the dependency DAG and run on co-trapped
//! operands, that the state stays consistent, and that heat never drops.

use crate::circuit::dag::DepGraph;
use crate::circuit::Circuit;
use crate::device::graph::DeviceGraph;
use crate::error::{Error, Result};
use crate::state::{Event, HeatModel, MachineState};

use super::{Counts, Schedule};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReplayReport {
    pub events: usize,
    pub counts: Counts,
    /// Largest per-trap motional quanta seen.
    pub max_nbar: f64,
}

fn violation(event: usize, message: impl Into<String>) -> Error {
    Error::ScheduleViolation { event, message: message.into() }
}

pub fn verify(circuit: &Circuit, graph: &DeviceGraph, schedule: &Schedule) -> Result<ReplayReport> {
    if schedule.n_qubits != circuit.n_qubits || schedule.initial.len() != circuit.n_qubits {
        return Err(violation(0, "placement does not cover the circuit"));
    }
    let mut state = MachineState::new(graph, &schedule.initial, HeatModel::default())?;
    state.check_invariants(graph).map_err(|m| violation(0, m))?;
    let mut dag = DepGraph::build(circuit);
    let mut counts = Counts::default();
    let mut nbar = state.nbar_all().to_vec();

    for (i, ev) in schedule.events.iter().enumerate() {
        match ev {
            Event::Gate { gate, qubits, trap } => {
                let g = circuit.gates.get(*gate).ok_or_else(|| violation(i, format!("unknown gate {gate}")))?;
                if &g.qubits != qubits {
                    return Err(violation(i, format!("gate {gate} operands {qubits:?} differ from circuit")));
                }
                if !dag.frontier().contains(gate) {
                    return Err(violation(i, format!("gate {gate} runs before its dependencies")));
                }
                if !state.is_executable(graph, qubits)? {
                    return Err(violation(i, format!("gate {gate} operands are not co-trapped")));
                }
                if state.trap_of_qubit(graph, qubits[0])? != *trap {
                    return Err(violation(i, format!("gate {gate} recorded in the wrong trap")));
                }
                dag.pop_gate(*gate)?;
                if g.is_two_qubit() {
                    counts.two_qubit_gates += 1;
                } else {
                    counts.one_qubit_gates += 1;
                }
            }
            _ => {
                let (u, v) = ev.swap_edge().expect("swap event");
                let replayed = state.apply_generic_swap(graph, u, v).map_err(|e| violation(i, e.to_string()))?;
                if &replayed != ev {
                    return Err(violation(i, format!("recorded {ev:?}, replay gives {replayed:?}")));
                }
                match ev {
                    Event::SwapGate { .. } => counts.swap_gates += 1,
                    Event::SpaceShift { .. } => counts.space_shifts += 1,
                    _ => counts.shuttles += 1,
                }
            }
        }
        state.check_invariants(graph).map_err(|m| violation(i, m))?;
        for (t, (&now, before)) in state.nbar_all().iter().zip(nbar.iter_mut()).enumerate() {
            if now < *before {
                return Err(violation(i, format!("heat of trap {t} decreased")));
            }
            *before = now;
        }
    }
    if !dag.is_done() {
        return Err(violation(
            schedule.events.len(),
            format!("{} gates never executed", dag.remaining()),
        ));
    }
    let c = &schedule.counts;
    if (c.shuttles, c.swap_gates, c.space_shifts, c.two_qubit_gates, c.one_qubit_gates)
        != (counts.shuttles, counts.swap_gates, counts.space_shifts, counts.two_qubit_gates, counts.one_qubit_gates)
    {
        return Err(violation(schedule.events.len(), "event counts do not match the event list"));
    }
    counts.planned_swaps = c.planned_swaps;
    counts.iterations = c.iterations;
    Ok(ReplayReport {
        events: schedule.events.len(),
        counts,
        max_nbar: nbar.iter().copied().fold(0.0, f64::max),
    })
}
