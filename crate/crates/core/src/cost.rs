// SPDX-License-Identifier: Apache-2.0

//! Timing and fidelity model.
//!
//! Two-qubit gate durations follow one of four gate implementations:
//!
//! | family | duration (µs)          |
//! |--------|------------------------|
//! | FM     | `max(13.33 N - 54, 100)` |
//! | PM     | `5 d + 160`            |
//! | AM1    | `100 d - 22`           |
//! | AM2    | `38 d + 10`            |
//!
//! with `N` the ions in the chain and `d` the ions between the operands. A
//! shuttle costs split + `segments` moves + each junction crossing + merge.
//! Gate fidelity is `1 - Γτ - A(2n̄ + 1)` with `A = a0 N / ln N` and `τ` in
//! seconds. Events are placed by list scheduling over trap and junction
//! resources; the success rate is the product of all gate fidelities.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicBool, Ordering};

use serde::{Deserialize, Serialize};

use crate::device::graph::DeviceGraph;
use crate::device::TrapId;
use crate::error::{Error, Result};
use crate::scheduler::Schedule;
use crate::state::{Event, HeatModel, MachineState};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateFamily {
    FM,
    PM,
    AM1,
    AM2,
}

impl GateFamily {
    pub const ALL: [GateFamily; 4] = [GateFamily::FM, GateFamily::PM, GateFamily::AM1, GateFamily::AM2];
}

impl fmt::Display for GateFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateFamily::FM => "FM",
            GateFamily::PM => "PM",
            GateFamily::AM1 => "AM1",
            GateFamily::AM2 => "AM2",
        })
    }
}

impl FromStr for GateFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "FM" => Ok(GateFamily::FM),
            "PM" => Ok(GateFamily::PM),
            "AM1" => Ok(GateFamily::AM1),
            "AM2" => Ok(GateFamily::AM2),
            _ => Err(Error::InvalidParameter(format!("unknown gate family `{s}`"))),
        }
    }
}

/// Which costs to idealize away when evaluating a schedule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Baseline {
    #[default]
    None,
    /// Shuttles take no time and add no heat.
    PerfectShuttle,
    /// SWAP gates and space shifts take no time and have no fidelity cost.
    PerfectSwap,
    Ideal,
}

impl Baseline {
    pub const ALL: [Baseline; 4] = [Baseline::None, Baseline::PerfectShuttle, Baseline::PerfectSwap, Baseline::Ideal];

    fn free_shuttles(self) -> bool {
        matches!(self, Baseline::PerfectShuttle | Baseline::Ideal)
    }

    fn free_swaps(self) -> bool {
        matches!(self, Baseline::PerfectSwap | Baseline::Ideal)
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Baseline::None => "none",
            Baseline::PerfectShuttle => "perfect-shuttle",
            Baseline::PerfectSwap => "perfect-swap",
            Baseline::Ideal => "ideal",
        })
    }
}

impl FromStr for Baseline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" => Ok(Baseline::None),
            "perfect-shuttle" => Ok(Baseline::PerfectShuttle),
            "perfect-swap" => Ok(Baseline::PerfectSwap),
            "ideal" => Ok(Baseline::Ideal),
            _ => Err(Error::InvalidParameter(format!("unknown baseline `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CostParams {
    pub gate_family: GateFamily,
    /// Background heating rate, quanta per second.
    pub gamma: f64,
    pub k1: f64,
    pub k2: f64,
    /// Share of the split/merge heat that lands on the receiving chain.
    pub heat_dest_fraction: f64,
    pub a0: f64,
    pub single_qubit_fidelity: f64,
    pub single_qubit_duration_us: f64,
    pub move_us: f64,
    pub split_us: f64,
    pub merge_us: f64,
    pub junction_base_us: f64,
    pub junction_per_path_us: f64,
    pub space_shift_us: f64,
    pub swap_gate_multiplier: u32,
    /// Also add `gamma * duration` to the heat of every trap an event uses.
    pub integrate_background_heat: bool,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            gate_family: GateFamily::FM,
            gamma: 1.0,
            k1: 0.1,
            k2: 0.01,
            heat_dest_fraction: 1.0,
            a0: 1e-4,
            single_qubit_fidelity: 0.999999,
            single_qubit_duration_us: 10.0,
            move_us: 5.0,
            split_us: 80.0,
            merge_us: 80.0,
            junction_base_us: 40.0,
            junction_per_path_us: 20.0,
            space_shift_us: 5.0,
            swap_gate_multiplier: 1,
            integrate_background_heat: false,
        }
    }
}

impl CostParams {
    pub fn validate(&self) -> Result<()> {
        let times = [
            self.single_qubit_duration_us,
            self.move_us,
            self.split_us,
            self.merge_us,
            self.junction_base_us,
            self.junction_per_path_us,
            self.space_shift_us,
        ];
        if times.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::InvalidParameter("durations must be >= 0".into()));
        }
        if !(self.single_qubit_fidelity > 0.0 && self.single_qubit_fidelity <= 1.0) {
            return Err(Error::InvalidParameter("single-qubit fidelity must be in (0, 1]".into()));
        }
        if [self.gamma, self.k1, self.k2, self.a0].iter().any(|x| !(*x >= 0.0)) {
            return Err(Error::InvalidParameter("gamma, k1, k2 and a0 must be >= 0".into()));
        }
        if !(0.0..=1.0).contains(&self.heat_dest_fraction) {
            return Err(Error::InvalidParameter("heat split fraction must be in [0, 1]".into()));
        }
        Ok(())
    }

    pub fn heat_model(&self) -> HeatModel {
        HeatModel { k1: self.k1, k2: self.k2, dest_fraction: self.heat_dest_fraction }
    }
}

static AM1_WARNED: AtomicBool = AtomicBool::new(false);

/// Two-qubit gate duration in µs for a chain of `n` ions with `d` ions
/// between the operands.
pub fn gate_duration(family: GateFamily, n: usize, d: usize) -> f64 {
    let (n, d) = (n as f64, d as f64);
    match family {
        GateFamily::FM => (13.33 * n - 54.0).max(100.0),
        GateFamily::PM => 5.0 * d + 160.0,
        GateFamily::AM1 => {
            if d < 1.0 {
                if !AM1_WARNED.swap(true, Ordering::Relaxed) {
                    log::warn!("AM1 duration is defined from d = 1; using 78 us for adjacent ions");
                }
                78.0
            } else {
                100.0 * d - 22.0
            }
        }
        GateFamily::AM2 => 38.0 * d + 10.0,
    }
}

/// Shuttle duration in µs over `segments` crossing junctions of the given
/// degrees.
pub fn shuttle_duration(params: &CostParams, segments: usize, junction_degrees: &[usize]) -> f64 {
    let junctions: f64 =
        junction_degrees.iter().map(|&k| params.junction_base_us + params.junction_per_path_us * k as f64).sum();
    params.split_us + segments as f64 * params.move_us + junctions + params.merge_us
}

/// Fidelity of a two-qubit gate lasting `tau_us` on a chain of `n` ions with
/// motional quanta `nbar`, clamped to `[0, 1]`.
pub fn gate_fidelity(tau_us: f64, n: usize, nbar: f64, params: &CostParams) -> Result<f64> {
    if n < 2 {
        return Err(Error::ChainTooShort(n));
    }
    let nf = n as f64;
    let a = params.a0 * nf / nf.ln();
    let f = 1.0 - params.gamma * tau_us * 1e-6 - a * (2.0 * nbar + 1.0);
    Ok(f.clamp(0.0, 1.0))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventTiming {
    pub index: usize,
    pub kind: &'static str,
    pub start_us: f64,
    pub duration_us: f64,
    pub trap: usize,
    /// Fidelity factor contributed by the event, if any.
    pub fidelity: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub shuttles: usize,
    pub swap_gates: usize,
    pub space_shifts: usize,
    pub two_qubit_gates: usize,
    pub makespan_us: f64,
    pub success_rate: f64,
    pub compile_ms: f64,
    #[serde(skip)]
    pub one_qubit_gates: usize,
    #[serde(skip)]
    pub log: Vec<EventTiming>,
}

/// Per-trap and per-junction clocks.
struct Timeline {
    trap_ready: Vec<f64>,
    junction_ready: Vec<f64>,
}

impl Timeline {
    fn place(&mut self, traps: &[TrapId], junctions: &[usize], duration: f64) -> f64 {
        let start = traps
            .iter()
            .map(|t| self.trap_ready[t.index()])
            .chain(junctions.iter().map(|&j| self.junction_ready[j]))
            .fold(0.0, f64::max);
        let end = start + duration;
        assert!(end >= start && start >= 0.0, "negative time in timeline");
        for t in traps {
            self.trap_ready[t.index()] = end;
        }
        for &j in junctions {
            self.junction_ready[j] = end;
        }
        start
    }
}

/// Timing and success rate of `schedule` under `params`, optionally with some
/// costs idealized away.
pub fn evaluate(schedule: &Schedule, graph: &DeviceGraph, params: &CostParams, baseline: Baseline) -> Result<Metrics> {
    params.validate()?;
    let heat = if baseline.free_shuttles() { HeatModel { k1: 0.0, k2: 0.0, ..params.heat_model() } } else { params.heat_model() };
    let mut state = MachineState::new(graph, &schedule.initial, heat)?;
    let mut extra_heat = vec![0.0; graph.n_traps()];
    let mut clock = Timeline { trap_ready: vec![0.0; graph.n_traps()], junction_ready: vec![0.0; graph.n_junctions()] };
    let mut success = 1.0f64;
    let mut log = Vec::with_capacity(schedule.events.len());
    let mut two_qubit = 0usize;
    let mut one_qubit = 0usize;
    let mult = params.swap_gate_multiplier;

    for (index, ev) in schedule.events.iter().enumerate() {
        let (duration, fidelity, traps, junctions): (f64, Option<f64>, Vec<TrapId>, Vec<usize>) = match ev {
            Event::Gate { qubits, trap, .. } => match qubits[..] {
                [_] => {
                    one_qubit += 1;
                    (params.single_qubit_duration_us, Some(params.single_qubit_fidelity), vec![*trap], vec![])
                }
                [a, b] => {
                    two_qubit += 1;
                    let n = state.chain_length(*trap);
                    let d = state.ion_distance(graph, a, b)?;
                    let tau = gate_duration(params.gate_family, n, d);
                    let nbar = state.nbar(*trap) + extra_heat[trap.index()];
                    (tau, Some(gate_fidelity(tau, n, nbar, params)?), vec![*trap], vec![])
                }
                _ => return Err(Error::InvalidCircuit("gate with more than two operands".into())),
            },
            Event::SwapGate { qubits, trap, .. } => {
                if baseline.free_swaps() {
                    (0.0, None, vec![*trap], vec![])
                } else {
                    let n = state.chain_length(*trap);
                    let d = state.ion_distance(graph, qubits[0], qubits[1])?;
                    let tau = gate_duration(params.gate_family, n, d);
                    let nbar = state.nbar(*trap) + extra_heat[trap.index()];
                    let f = gate_fidelity(tau, n, nbar, params)?.powi(mult as i32);
                    (tau * mult as f64, Some(f), vec![*trap], vec![])
                }
            }
            Event::SpaceShift { trap, .. } => {
                let t = if baseline.free_swaps() { 0.0 } else { params.space_shift_us };
                (t, None, vec![*trap], vec![])
            }
            Event::Shuttle { from_trap, to_trap, segments, junctions, .. } => {
                let t = if baseline.free_shuttles() {
                    0.0
                } else {
                    let degrees: Vec<usize> = junctions.iter().map(|&j| graph.junction_degree(j)).collect();
                    shuttle_duration(params, *segments, &degrees)
                };
                (t, None, vec![*from_trap, *to_trap], junctions.clone())
            }
        };
        let start = clock.place(&traps, &junctions, duration);
        if let Some(f) = fidelity {
            success *= f;
        }
        if params.integrate_background_heat {
            for t in &traps {
                extra_heat[t.index()] += params.gamma * duration * 1e-6;
            }
        }
        if let Some((u, v)) = ev.swap_edge() {
            state.apply_generic_swap(graph, u, v)?;
        }
        log.push(EventTiming { index, kind: ev.name(), start_us: start, duration_us: duration, trap: traps[0].index(), fidelity });
    }

    let makespan = clock.trap_ready.iter().chain(clock.junction_ready.iter()).copied().fold(0.0, f64::max);
    Ok(Metrics {
        shuttles: schedule.counts.shuttles,
        swap_gates: schedule.counts.swap_gates,
        space_shifts: schedule.counts.space_shifts,
        two_qubit_gates: two_qubit + schedule.counts.swap_gates * mult as usize,
        makespan_us: makespan,
        success_rate: success.clamp(0.0, 1.0),
        compile_ms: 0.0,
        one_qubit_gates: one_qubit,
        log,
    })
}
