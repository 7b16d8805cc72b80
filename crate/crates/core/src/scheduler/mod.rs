// SPDX-License-Identifier: Apache-2.0

//! Generic-swap shuttling scheduler.
//!
//! Each iteration first runs every frontier gate whose operands share a
//! trap. If gates remain, every valid generic swap is scored by
//!
//! ```text
//! H(swap) = min over frontier gates g of decay(g) * score(g) + w(swap)
//! score(g) = dis(g) + Pen
//! ```
//!
//! evaluated on the state the swap would produce, and the cheapest swap is
//! applied. `dis` is the lightest graph path between the operands using at
//! most `m` intermediate slots, `Pen` is the number of traps without a free
//! slot (in units of the shuttle weight), and `decay(g) = 1 + delta` while
//! an operand of `g` was moved within the last few iterations.
//!
//! When the chosen swap fails to lower the summed frontier score, the
//! scheduler falls back to a direct routing plan for the cheapest stuck gate
//! (see [`valve`]), which guarantees progress.

pub mod cmp;
pub mod paths;
pub mod replay;
pub mod valve;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::circuit::dag::DepGraph;
use crate::circuit::Circuit;
use crate::device::graph::{DeviceGraph, EdgeClass};
use crate::device::SlotId;
use crate::error::{Error, Result};
use crate::state::{HeatModel, MachineState};

pub use crate::state::Event;
use cmp::approx_lt;
use paths::PathTable;
pub use replay::{verify, ReplayReport};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SchedulerParams {
    /// Decay rate applied to recently moved qubits.
    pub delta: f64,
    /// Iterations after which a moved qubit no longer decays.
    pub decay_window: usize,
    /// Maximum intermediate slots on a scored path.
    pub m: usize,
    /// Iterations without a gate execution before giving up.
    pub iteration_cap_per_gate: usize,
    /// Consecutive non-improving heuristic choices tolerated before a direct
    /// routing plan takes over.
    pub stall_tolerance: usize,
}

impl Default for SchedulerParams {
    fn default() -> Self {
        SchedulerParams { delta: 0.001, decay_window: 5, m: 2, iteration_cap_per_gate: 10_000, stall_tolerance: 0 }
    }
}

impl SchedulerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta >= 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be >= 0, got {}", self.delta)));
        }
        if self.m < 1 {
            return Err(Error::InvalidParameter("m must be >= 1".into()));
        }
        if self.iteration_cap_per_gate == 0 {
            return Err(Error::InvalidParameter("iteration cap must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub shuttles: usize,
    pub swap_gates: usize,
    pub space_shifts: usize,
    pub two_qubit_gates: usize,
    pub one_qubit_gates: usize,
    /// Generic swaps that came from a direct routing plan.
    pub planned_swaps: usize,
    pub iterations: usize,
}

/// Output of the scheduler: the initial placement plus the ordered event list.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub n_qubits: usize,
    pub initial: Vec<SlotId>,
    pub events: Vec<Event>,
    pub counts: Counts,
}

impl Schedule {
    /// Total edge weight of the inserted generic swaps.
    pub fn inserted_weight(&self, graph: &DeviceGraph) -> f64 {
        self.events
            .iter()
            .filter_map(Event::swap_edge)
            .map(|(u, v)| graph.weight(u, v).expect("schedule edge exists"))
            .sum()
    }

    pub fn inserted_ops(&self) -> usize {
        self.counts.shuttles + self.counts.swap_gates + self.counts.space_shifts
    }
}

/// Per-qubit iteration of the most recent generic swap touching it.
#[derive(Clone, Debug)]
pub struct DecayTable {
    last: Vec<Option<usize>>,
    window: usize,
}

impl DecayTable {
    pub fn new(n_qubits: usize, window: usize) -> Self {
        DecayTable { last: vec![None; n_qubits], window }
    }

    pub fn touch(&mut self, q: usize, iteration: usize) {
        self.last[q] = Some(iteration);
    }

    pub fn is_recent(&self, q: usize, now: usize) -> bool {
        matches!(self.last[q], Some(t) if now - t <= self.window)
    }

    /// `1 + delta` if either operand moved recently, else exactly 1.
    pub fn factor(&self, qubits: &[usize], now: usize, delta: f64) -> f64 {
        if qubits.iter().any(|&q| self.is_recent(q, now)) {
            1.0 + delta
        } else {
            1.0
        }
    }

    /// Drops entries older than the window.
    pub fn prune(&mut self, now: usize) {
        for slot in &mut self.last {
            if matches!(*slot, Some(t) if now - t > self.window) {
                *slot = None;
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub u: SlotId,
    pub v: SlotId,
    pub class: EdgeClass,
    pub weight: f64,
}

/// Every edge that is currently a valid generic swap, in `(u, v)` order.
pub fn candidates(state: &MachineState, graph: &DeviceGraph) -> Vec<Candidate> {
    graph
        .edges()
        .iter()
        .filter_map(|e| {
            let class = state.classify(graph, e.u, e.v).ok()?;
            matches!(class, EdgeClass::QubitSwap | EdgeClass::SpaceShift | EdgeClass::Shuttle)
                .then_some(Candidate { u: e.u, v: e.v, class, weight: e.weight })
        })
        .collect()
}

/// The penalty term: traps without a free slot, in shuttle-weight units.
pub fn penalty(state: &MachineState, graph: &DeviceGraph) -> f64 {
    state.full_traps() as f64 * graph.params.shuttle_base
}

/// `dis + Pen` for the gate on `(a, b)` in `state`.
pub fn score_gate(a: usize, b: usize, state: &MachineState, graph: &DeviceGraph, paths: &PathTable) -> Result<f64> {
    let (sa, sb) = (state.placed_slot(a)?, state.placed_slot(b)?);
    Ok(paths.dis(sa, sb) + penalty(state, graph))
}

/// A frontier gate as seen by the heuristic.
#[derive(Clone, Copy, Debug)]
pub struct FrontierGate {
    pub id: usize,
    pub a: usize,
    pub b: usize,
    pub decay: f64,
}

/// Evaluation of one candidate: its `H` and the undecayed score sum that the
/// progress check uses.
#[derive(Clone, Copy, Debug)]
pub struct Evaluation {
    pub h: f64,
    pub score_sum: f64,
}

/// Scores `cand` against `gates` on the state the swap would produce. The
/// live state is not modified: only the two touched slots and the penalty
/// change, so they are patched on the fly.
pub fn heuristic_h(
    cand: &Candidate,
    gates: &[FrontierGate],
    state: &MachineState,
    graph: &DeviceGraph,
    paths: &PathTable,
) -> Result<Evaluation> {
    let mut full = state.full_traps() as i64;
    if cand.class == EdgeClass::Shuttle {
        let (from, to) = if state.at(cand.u).is_qubit() { (cand.u, cand.v) } else { (cand.v, cand.u) };
        if state.spaces(graph.trap_of(from)).is_empty() {
            full -= 1;
        }
        if state.spaces(graph.trap_of(to)).len() == 1 {
            full += 1;
        }
    }
    let pen = full as f64 * graph.params.shuttle_base;
    let moved = |s: SlotId| {
        if s == cand.u {
            cand.v
        } else if s == cand.v {
            cand.u
        } else {
            s
        }
    };
    let mut best = f64::INFINITY;
    let mut sum = 0.0;
    for g in gates {
        let sa = moved(state.placed_slot(g.a)?);
        let sb = moved(state.placed_slot(g.b)?);
        let score = paths.dis(sa, sb) + pen;
        best = best.min(g.decay * score);
        sum += score;
    }
    Ok(Evaluation { h: best + cand.weight, score_sum: sum })
}

/// Schedules `circuit` on `graph` starting from `placement` (slot of each
/// logical qubit).
pub fn schedule(circuit: &Circuit, graph: &DeviceGraph, placement: &[SlotId], params: &SchedulerParams) -> Result<Schedule> {
    let paths = PathTable::build(graph, params.m);
    schedule_with_paths(circuit, graph, placement, params, &paths)
}

/// As [`schedule`], reusing a prebuilt path table.
pub fn schedule_with_paths(
    circuit: &Circuit,
    graph: &DeviceGraph,
    placement: &[SlotId],
    params: &SchedulerParams,
    paths: &PathTable,
) -> Result<Schedule> {
    params.validate()?;
    circuit.validate()?;
    if placement.len() < circuit.n_qubits {
        return Err(Error::Unplaced(placement.len()));
    }
    if circuit.n_qubits >= graph.n_slots() {
        // With no free slot nothing can leave its trap.
        let trap = |q: usize| graph.trap_of(placement[q]);
        if circuit.gates.iter().filter_map(|g| g.pair()).any(|(a, b)| trap(a) != trap(b)) {
            return Err(Error::InsufficientCapacity { needed: circuit.n_qubits + 1, available: graph.n_slots() });
        }
    }
    Runner::new(circuit, graph, placement, params, paths)?.run()
}

struct Runner<'a> {
    circuit: &'a Circuit,
    graph: &'a DeviceGraph,
    params: &'a SchedulerParams,
    paths: &'a PathTable,
    state: MachineState,
    dag: DepGraph,
    decay: DecayTable,
    events: Vec<Event>,
    counts: Counts,
    initial: Vec<SlotId>,
    iteration: usize,
    since_gate: usize,
    stall: usize,
    last_swap: Option<(SlotId, SlotId)>,
    plan: VecDeque<(SlotId, SlotId)>,
    plan_gate: Option<usize>,
}

impl<'a> Runner<'a> {
    fn new(
        circuit: &'a Circuit,
        graph: &'a DeviceGraph,
        placement: &[SlotId],
        params: &'a SchedulerParams,
        paths: &'a PathTable,
    ) -> Result<Self> {
        let placement = &placement[..circuit.n_qubits];
        let state = MachineState::new(graph, placement, HeatModel::default())?;
        Ok(Runner {
            circuit,
            graph,
            params,
            paths,
            state,
            dag: DepGraph::build(circuit),
            decay: DecayTable::new(circuit.n_qubits, params.decay_window),
            events: Vec::new(),
            counts: Counts::default(),
            initial: placement.to_vec(),
            iteration: 0,
            since_gate: 0,
            stall: 0,
            last_swap: None,
            plan: VecDeque::new(),
            plan_gate: None,
        })
    }

    fn run(mut self) -> Result<Schedule> {
        loop {
            if self.execute_ready()? > 0 {
                self.iteration += 1;
                self.since_gate = 0;
                if self.plan_gate.is_some_and(|g| self.dag.is_executed(g)) {
                    self.plan.clear();
                    self.plan_gate = None;
                }
            }
            if self.dag.is_done() {
                break;
            }
            if self.since_gate >= self.params.iteration_cap_per_gate {
                return Err(Error::IterationCap {
                    cap: self.params.iteration_cap_per_gate,
                    frontier: self.dag.frontier().iter().copied().collect(),
                });
            }
            let (u, v) = match self.plan.pop_front() {
                Some(step) => {
                    self.counts.planned_swaps += 1;
                    step
                }
                None => self.choose()?,
            };
            self.apply(u, v)?;
        }
        self.counts.iterations = self.iteration;
        Ok(Schedule { n_qubits: self.circuit.n_qubits, initial: self.initial, events: self.events, counts: self.counts })
    }

    /// Runs frontier gates until none is executable; returns how many ran.
    fn execute_ready(&mut self) -> Result<usize> {
        let mut ran = 0;
        loop {
            let mut ready = Vec::new();
            for &g in self.dag.frontier() {
                if self.state.is_executable(self.graph, &self.circuit.gates[g].qubits)? {
                    ready.push(g);
                }
            }
            if ready.is_empty() {
                return Ok(ran);
            }
            for g in ready {
                let gate = &self.circuit.gates[g];
                let trap = self.state.trap_of_qubit(self.graph, gate.qubits[0])?;
                self.dag.pop_gate(g)?;
                self.events.push(Event::Gate { gate: g, qubits: gate.qubits.clone(), trap });
                if gate.is_two_qubit() {
                    self.counts.two_qubit_gates += 1;
                } else {
                    self.counts.one_qubit_gates += 1;
                }
                ran += 1;
            }
        }
    }

    fn frontier_gates(&self) -> Vec<FrontierGate> {
        self.dag
            .frontier()
            .iter()
            .filter_map(|&g| {
                let (a, b) = self.circuit.gates[g].pair()?;
                Some(FrontierGate { id: g, a, b, decay: self.decay.factor(&[a, b], self.iteration, self.params.delta) })
            })
            .collect()
    }

    fn choose(&mut self) -> Result<(SlotId, SlotId)> {
        let gates = self.frontier_gates();
        let pen = penalty(&self.state, self.graph);
        let mut now_sum = 0.0;
        for g in &gates {
            now_sum += self.paths.dis(self.state.placed_slot(g.a)?, self.state.placed_slot(g.b)?) + pen;
        }

        let mut best: Option<(Candidate, Evaluation, bool)> = None;
        for cand in candidates(&self.state, self.graph) {
            let ev = heuristic_h(&cand, &gates, &self.state, self.graph, self.paths)?;
            let undo = self.last_swap == Some((cand.u, cand.v));
            let replace = match &best {
                None => true,
                Some((_, b, b_undo)) => approx_lt(ev.h, b.h) || (!approx_lt(b.h, ev.h) && *b_undo && !undo),
            };
            if replace {
                best = Some((cand, ev, undo));
            }
        }

        let progress = best.as_ref().is_some_and(|(_, ev, _)| approx_lt(ev.score_sum, now_sum));
        if progress {
            self.stall = 0;
        } else {
            self.stall += 1;
        }
        if self.stall > self.params.stall_tolerance {
            self.stall = 0;
            if let Some(step) = self.start_plan(&gates)? {
                return Ok(step);
            }
        }
        match best {
            Some((c, _, _)) => Ok((c.u, c.v)),
            None => Err(Error::IterationCap {
                cap: self.params.iteration_cap_per_gate,
                frontier: self.dag.frontier().iter().copied().collect(),
            }),
        }
    }

    /// Plans a direct route for the stuck gate with the lowest score and
    /// returns its first step.
    fn start_plan(&mut self, gates: &[FrontierGate]) -> Result<Option<(SlotId, SlotId)>> {
        let mut order = Vec::with_capacity(gates.len());
        for g in gates {
            let d = self.paths.dis(self.state.placed_slot(g.a)?, self.state.placed_slot(g.b)?);
            order.push((d, g.id, g.a, g.b));
        }
        order.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
        for (_, id, a, b) in order {
            if let Some(plan) = valve::co_trap(self.graph, &self.state, a, b) {
                if plan.steps.is_empty() {
                    continue;
                }
                self.plan = plan.steps.into_iter().collect();
                self.plan_gate = Some(id);
                self.counts.planned_swaps += 1;
                return Ok(self.plan.pop_front());
            }
        }
        Ok(None)
    }

    fn apply(&mut self, u: SlotId, v: SlotId) -> Result<()> {
        let ev = self.state.apply_generic_swap(self.graph, u, v)?;
        match &ev {
            Event::SwapGate { qubits, .. } => {
                self.counts.swap_gates += 1;
                self.decay.touch(qubits[0], self.iteration);
                self.decay.touch(qubits[1], self.iteration);
            }
            Event::SpaceShift { qubit, .. } => {
                self.counts.space_shifts += 1;
                self.decay.touch(*qubit, self.iteration);
            }
            Event::Shuttle { qubit, .. } => {
                self.counts.shuttles += 1;
                self.decay.touch(*qubit, self.iteration);
            }
            Event::Gate { .. } => unreachable!("generic swap produced a gate event"),
        }
        self.events.push(ev);
        self.last_swap = Some((u.min(v), u.max(v)));
        self.iteration += 1;
        self.since_gate += 1;
        self.decay.prune(self.iteration);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::graph::WeightParams;
    use crate::device::{build_topology, Junction, ShuttlePath, Topology, TopologyFamily, Trap, TrapId};

    fn two_traps(cap: usize) -> DeviceGraph {
        let t = Topology {
            name: "pair".into(),
            traps: vec![Trap { id: 0, capacity: cap }, Trap { id: 1, capacity: cap }],
            paths: vec![ShuttlePath { trap_a: 0, trap_b: 1, segments: 2, junctions: vec![0] }],
            junctions: vec![Junction { id: 0, degree: 2 }],
        };
        DeviceGraph::build(&t, WeightParams::default()).unwrap()
    }

    #[test]
    fn full_device_cannot_shuttle() {
        let g = DeviceGraph::build(&build_topology(TopologyFamily::Linear(2), 2).unwrap(), WeightParams::default()).unwrap();
        let mut c = Circuit::new("t", 4);
        c.push_two("cx", 0, 2, &[]);
        let placement: Vec<SlotId> = (0..4).map(SlotId).collect();
        let err = schedule(&c, &g, &placement, &SchedulerParams::default()).unwrap_err();
        assert!(matches!(err, Error::InsufficientCapacity { needed: 5, available: 4 }));
        // co-trapped gates are still fine
        let mut c = Circuit::new("t", 4);
        c.push_two("cx", 0, 1, &[]);
        assert!(schedule(&c, &g, &placement, &SchedulerParams::default()).is_ok());
    }

    #[test]
    fn co_trapped_gates_need_no_swaps() {
        let g = two_traps(3);
        let mut c = Circuit::new("c", 2);
        c.push_two("cx", 0, 1, &[]);
        c.push_one("h", 0, &[]);
        c.push_two("cz", 1, 0, &[]);
        let s = schedule(&c, &g, &[SlotId(0), SlotId(2)], &SchedulerParams::default()).unwrap();
        assert_eq!(s.inserted_ops(), 0);
        assert_eq!(s.events.len(), 3);
    }

    #[test]
    fn two_trap_cx_takes_one_shuttle() {
        let g = two_traps(2);
        let mut c = Circuit::new("c", 2);
        c.push_two("cx", 0, 1, &[]);
        // trap 0: [q0, _]; trap 1: [_, q1]
        let s = schedule(&c, &g, &[SlotId(0), SlotId(3)], &SchedulerParams::default()).unwrap();
        assert_eq!(s.counts.shuttles, 1);
        assert_eq!(s.counts.swap_gates, 0);
        verify(&c, &g, &s).unwrap();
    }

    #[test]
    fn candidates_full_trap_only_swaps() {
        let t = Topology {
            name: "one".into(),
            traps: vec![Trap { id: 0, capacity: 3 }],
            paths: vec![],
            junctions: vec![],
        };
        let g = DeviceGraph::build(&t, WeightParams::default()).unwrap();
        let st = MachineState::new(&g, &[SlotId(0), SlotId(1), SlotId(2)], HeatModel::default()).unwrap();
        let c = candidates(&st, &g);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|c| c.class == EdgeClass::QubitSwap));
    }

    #[test]
    fn candidates_interior_space() {
        let t = Topology {
            name: "one".into(),
            traps: vec![Trap { id: 0, capacity: 3 }],
            paths: vec![],
            junctions: vec![],
        };
        let g = DeviceGraph::build(&t, WeightParams::default()).unwrap();
        let st = MachineState::new(&g, &[SlotId(0), SlotId(2)], HeatModel::default()).unwrap();
        let shifts: Vec<_> = candidates(&st, &g)
            .into_iter()
            .filter(|c| c.class == EdgeClass::SpaceShift)
            .map(|c| (c.u.index(), c.v.index()))
            .collect();
        assert_eq!(shifts, vec![(0, 1), (1, 2)]);
    }

    #[test]
    fn candidates_include_shuttle_into_end_space() {
        let g = two_traps(2);
        let st = MachineState::new(&g, &[SlotId(1), SlotId(3)], HeatModel::default()).unwrap();
        let shuttles: Vec<_> = candidates(&st, &g)
            .into_iter()
            .filter(|c| c.class == EdgeClass::Shuttle)
            .map(|c| (c.u.index(), c.v.index()))
            .collect();
        // qubit 0 at slot 1 may go to slot 2; qubit 1 at slot 3 may go to slot 0
        assert_eq!(shuttles, vec![(0, 3), (1, 2)]);
    }

    #[test]
    fn score_examples() {
        let g = two_traps(3);
        let paths = PathTable::build(&g, 2);
        let st = MachineState::new(&g, &[SlotId(0), SlotId(1)], HeatModel::default()).unwrap();
        assert!((score_gate(0, 1, &st, &g, &paths).unwrap() - 0.001).abs() < 1e-12);
        // end slot 2 to end slot 3 across one junction
        let st = MachineState::new(&g, &[SlotId(2), SlotId(3)], HeatModel::default()).unwrap();
        assert!((score_gate(0, 1, &st, &g, &paths).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn penalty_counts_full_traps() {
        let topo = build_topology(TopologyFamily::Linear(3), 2).unwrap();
        let g = DeviceGraph::build(&topo, WeightParams::default()).unwrap();
        let paths = PathTable::build(&g, 2);
        let open = MachineState::new(&g, &[SlotId(1), SlotId(2)], HeatModel::default()).unwrap();
        let full = MachineState::new(&g, &[SlotId(1), SlotId(2), SlotId(4), SlotId(5)], HeatModel::default()).unwrap();
        let a = score_gate(0, 1, &open, &g, &paths).unwrap();
        let b = score_gate(0, 1, &full, &g, &paths).unwrap();
        assert_eq!(full.full_traps(), 1);
        assert!((b - a - 1.0).abs() < 1e-12);
    }

    #[test]
    fn h_with_zero_delta_is_score_plus_weight() {
        let g = two_traps(3);
        let paths = PathTable::build(&g, 2);
        let st = MachineState::new(&g, &[SlotId(0), SlotId(4)], HeatModel::default()).unwrap();
        let gates = [FrontierGate { id: 0, a: 0, b: 1, decay: 1.0 }];
        for c in candidates(&st, &g) {
            let ev = heuristic_h(&c, &gates, &st, &g, &paths).unwrap();
            let mut tmp = st.clone();
            tmp.apply_generic_swap(&g, c.u, c.v).unwrap();
            let expect = score_gate(0, 1, &tmp, &g, &paths).unwrap() + c.weight;
            assert!((ev.h - expect).abs() < 1e-12, "{c:?}");
        }
    }

    #[test]
    fn decay_multiplies_recent_gates() {
        let mut d = DecayTable::new(3, 5);
        d.touch(1, 10);
        assert_eq!(d.factor(&[0, 1], 11, 0.001), 1.001);
        assert_eq!(d.factor(&[0, 2], 11, 0.001), 1.0);
        assert_eq!(d.factor(&[1, 2], 15, 0.001), 1.001);
        assert_eq!(d.factor(&[1, 2], 16, 0.001), 1.0);
        d.prune(16);
        assert!(!d.is_recent(1, 16));
    }

    #[test]
    fn co_trapping_shuttle_has_lower_h() {
        let topo = build_topology(TopologyFamily::Star(3), 3).unwrap();
        let g = DeviceGraph::build(&topo, WeightParams::default()).unwrap();
        let paths = PathTable::build(&g, 2);
        // trap 0: [q0 _ _]; trap 1: [q1 _ _]; trap 2: [_ _ _]
        let st = MachineState::new(&g, &[SlotId(0), SlotId(3)], HeatModel::default()).unwrap();
        let gates = [FrontierGate { id: 0, a: 0, b: 1, decay: 1.0 }];
        let h = |u: usize, v: usize| {
            let c = candidates(&st, &g).into_iter().find(|c| (c.u.index(), c.v.index()) == (u, v)).unwrap();
            heuristic_h(&c, &gates, &st, &g, &paths).unwrap().h
        };
        // q0 into trap 1 (slot 5) versus q0 into trap 2 (slot 6), same weight
        assert_eq!(g.weight(SlotId(0), SlotId(5)), g.weight(SlotId(0), SlotId(6)));
        assert!(h(0, 5) < h(0, 6));
    }

    #[test]
    fn three_trap_relay() {
        // gates (q0,q1) then (q1,q2), one qubit per trap
        let topo = build_topology(TopologyFamily::Star(3), 3).unwrap();
        let g = DeviceGraph::build(&topo, WeightParams::default()).unwrap();
        let mut c = Circuit::new("relay", 3);
        c.push_two("cx", 0, 1, &[]);
        c.push_two("cx", 1, 2, &[]);
        let s = schedule(&c, &g, &[SlotId(2), SlotId(3), SlotId(6)], &SchedulerParams::default()).unwrap();
        verify(&c, &g, &s).unwrap();
        assert_eq!(s.counts.shuttles, 2);
        assert_eq!(s.counts.two_qubit_gates, 2);
        let kinds: Vec<&str> = s.events.iter().map(Event::name).filter(|&k| k != "space_shift").collect();
        assert_eq!(kinds, ["shuttle", "gate", "shuttle", "gate"]);
    }

    #[test]
    fn scheduler_is_deterministic() {
        let topo = build_topology(TopologyFamily::Grid { rows: 2, cols: 2 }, 4).unwrap();
        let g = DeviceGraph::build(&topo, WeightParams::default()).unwrap();
        let c = crate::circuit::gen_benchmark(crate::circuit::Benchmark::Qft, 8, &Default::default()).unwrap();
        let placement: Vec<SlotId> = (0..8).map(|q| g.slot_at(TrapId(q / 2), q % 2)).collect();
        let a = schedule(&c, &g, &placement, &SchedulerParams::default()).unwrap();
        let b = schedule(&c, &g, &placement, &SchedulerParams::default()).unwrap();
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        verify(&c, &g, &a).unwrap();
    }

    #[test]
    fn rejects_bad_params() {
        let p = SchedulerParams { m: 0, ..Default::default() };
        assert!(p.validate().is_err());
        let p = SchedulerParams { delta: -1.0, ..Default::default() };
        assert!(p.validate().is_err());
    }
}
