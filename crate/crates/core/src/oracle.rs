// SPDX-License-Identifier: Apache-2.0

//! Exhaustive scheduling of tiny instances, and idealized-cost bounds.
//!
//! [`exact_schedule`] runs a uniform-cost search over machine states
//! (slot contents plus the set of executed gates). Gates are executed eagerly
//! whenever their operands share a trap, since running a gate is free and
//! never blocks a later move. The cost of a path is its total inserted edge
//! weight, ties broken by fewer shuttles and then fewer SWAP gates.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::dag::DepGraph;
use crate::circuit::Circuit;
use crate::cost::{evaluate, Baseline, CostParams, Metrics};
use crate::device::graph::{DeviceGraph, EdgeClass, WeightParams};
use crate::device::{build_topology, SlotId, Topology, TopologyFamily};
use crate::error::{Error, Result};
use crate::scheduler::{self, Counts, Event, Schedule, SchedulerParams};
use crate::state::{HeatModel, MachineState, Occupant};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct OracleLimits {
    pub max_depth: usize,
    pub max_nodes: usize,
    pub max_gates: usize,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_depth: 8, max_nodes: 12, max_gates: 5 }
    }
}

/// Lexicographic search cost: weight in integer units of 1e-9, then shuttle
/// and SWAP-gate counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Cost {
    weight: u64,
    shuttles: u32,
    swaps: u32,
}

const WEIGHT_UNIT: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct ExactSolution {
    pub weight: f64,
    pub shuttles: usize,
    pub swap_gates: usize,
    pub schedule: Schedule,
    pub expanded: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExactOutcome {
    Optimal(ExactSolution),
    /// No schedule within `depth` generic swaps.
    Infeasible { depth: usize },
}

struct Node {
    contents: Vec<Occupant>,
    executed: u64,
    parent: Option<usize>,
    step: Option<(SlotId, SlotId)>,
    depth: usize,
}

/// Runs every executable gate to a fixpoint; returns the new executed mask.
fn close_gates(circuit: &Circuit, graph: &DeviceGraph, st: &MachineState, mut executed: u64) -> Result<u64> {
    loop {
        let mut progressed = false;
        for (i, g) in circuit.gates.iter().enumerate() {
            if executed & (1 << i) != 0 {
                continue;
            }
            let ready = circuit.gates[..i]
                .iter()
                .enumerate()
                .all(|(j, h)| executed & (1 << j) != 0 || !h.qubits.iter().any(|q| g.qubits.contains(q)));
            if ready && st.is_executable(graph, &g.qubits)? {
                executed |= 1 << i;
                progressed = true;
            }
        }
        if !progressed {
            return Ok(executed);
        }
    }
}

pub fn check_limits(circuit: &Circuit, graph: &DeviceGraph, limits: &OracleLimits) -> Result<()> {
    if graph.n_slots() > limits.max_nodes {
        return Err(Error::OracleLimits(format!("{} slots > {}", graph.n_slots(), limits.max_nodes)));
    }
    if circuit.gates.len() > limits.max_gates.min(63) {
        return Err(Error::OracleLimits(format!("{} gates > {}", circuit.gates.len(), limits.max_gates)));
    }
    Ok(())
}

/// Cheapest schedule for `circuit` from `placement` within `limits`.
pub fn exact_schedule(
    circuit: &Circuit,
    graph: &DeviceGraph,
    placement: &[SlotId],
    limits: &OracleLimits,
) -> Result<ExactOutcome> {
    circuit.validate()?;
    check_limits(circuit, graph, limits)?;
    let all = if circuit.gates.is_empty() { 0 } else { (1u64 << circuit.gates.len()) - 1 };
    let start = MachineState::new(graph, &placement[..circuit.n_qubits], HeatModel::default())?;
    let executed = close_gates(circuit, graph, &start, 0)?;

    let mut nodes = vec![Node { contents: start.contents().to_vec(), executed, parent: None, step: None, depth: 0 }];
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((Cost::default(), 0usize)));
    // Best (cost, depth) pushed and smallest depth expanded, per state.
    let mut pushed: HashMap<(Vec<Occupant>, u64), (Cost, usize)> = HashMap::new();
    let mut settled: HashMap<(Vec<Occupant>, u64), usize> = HashMap::new();
    pushed.insert((nodes[0].contents.clone(), executed), (Cost::default(), 0));
    let mut expanded = 0usize;

    while let Some(Reverse((cost, id))) = heap.pop() {
        let key = (nodes[id].contents.clone(), nodes[id].executed);
        let depth = nodes[id].depth;
        if settled.get(&key).is_some_and(|&d| d <= depth) {
            continue;
        }
        settled.insert(key, depth);
        if nodes[id].executed == all {
            return Ok(ExactOutcome::Optimal(solution(circuit, graph, placement, &nodes, id, cost, expanded)?));
        }
        if depth >= limits.max_depth {
            continue;
        }
        expanded += 1;
        let st = MachineState::from_contents(graph, nodes[id].contents.clone(), circuit.n_qubits, HeatModel::default())?;
        for cand in scheduler::candidates(&st, graph) {
            let mut next = st.clone();
            next.apply_generic_swap(graph, cand.u, cand.v)?;
            let exec = close_gates(circuit, graph, &next, nodes[id].executed)?;
            let c = Cost {
                weight: cost.weight + (cand.weight / WEIGHT_UNIT).round() as u64,
                shuttles: cost.shuttles + u32::from(cand.class == EdgeClass::Shuttle),
                swaps: cost.swaps + u32::from(cand.class == EdgeClass::QubitSwap),
            };
            let k = (next.contents().to_vec(), exec);
            if pushed.get(&k).is_some_and(|&(pc, pd)| pc <= c && pd <= depth + 1) {
                continue;
            }
            pushed.insert(k, (c, depth + 1));
            nodes.push(Node {
                contents: next.contents().to_vec(),
                executed: exec,
                parent: Some(id),
                step: Some((cand.u, cand.v)),
                depth: depth + 1,
            });
            heap.push(Reverse((c, nodes.len() - 1)));
        }
    }
    Ok(ExactOutcome::Infeasible { depth: limits.max_depth })
}

/// Rebuilds a full event list from the optimal step sequence.
fn solution(
    circuit: &Circuit,
    graph: &DeviceGraph,
    placement: &[SlotId],
    nodes: &[Node],
    goal: usize,
    cost: Cost,
    expanded: usize,
) -> Result<ExactSolution> {
    let mut steps = Vec::new();
    let mut cur = Some(goal);
    while let Some(i) = cur {
        if let Some(s) = nodes[i].step {
            steps.push(s);
        }
        cur = nodes[i].parent;
    }
    steps.reverse();

    let mut st = MachineState::new(graph, &placement[..circuit.n_qubits], HeatModel::default())?;
    let mut dag = DepGraph::build(circuit);
    let mut events = Vec::new();
    let mut counts = Counts::default();
    let run_ready = |st: &MachineState, dag: &mut DepGraph, events: &mut Vec<Event>, counts: &mut Counts| -> Result<()> {
        loop {
            let ready: Vec<usize> = dag
                .frontier()
                .iter()
                .copied()
                .filter(|&g| st.is_executable(graph, &circuit.gates[g].qubits).unwrap_or(false))
                .collect();
            if ready.is_empty() {
                return Ok(());
            }
            for g in ready {
                let gate = &circuit.gates[g];
                dag.pop_gate(g)?;
                events.push(Event::Gate { gate: g, qubits: gate.qubits.clone(), trap: st.trap_of_qubit(graph, gate.qubits[0])? });
                if gate.is_two_qubit() {
                    counts.two_qubit_gates += 1;
                } else {
                    counts.one_qubit_gates += 1;
                }
            }
        }
    };
    run_ready(&st, &mut dag, &mut events, &mut counts)?;
    let mut weight = 0.0;
    for (u, v) in steps {
        weight += graph.weight(u, v).expect("edge");
        let ev = st.apply_generic_swap(graph, u, v)?;
        match ev {
            Event::SwapGate { .. } => counts.swap_gates += 1,
            Event::SpaceShift { .. } => counts.space_shifts += 1,
            Event::Shuttle { .. } => counts.shuttles += 1,
            Event::Gate { .. } => {}
        }
        events.push(ev);
        run_ready(&st, &mut dag, &mut events, &mut counts)?;
    }
    debug_assert_eq!(counts.shuttles, cost.shuttles as usize);
    Ok(ExactSolution {
        weight,
        shuttles: counts.shuttles,
        swap_gates: counts.swap_gates,
        schedule: Schedule { n_qubits: circuit.n_qubits, initial: placement[..circuit.n_qubits].to_vec(), events, counts },
        expanded,
    })
}

/// Re-evaluates `schedule` with shuttles, swaps, or both idealized.
pub fn ideal_bounds(schedule: &Schedule, graph: &DeviceGraph, params: &CostParams, mode: Baseline) -> Result<Metrics> {
    evaluate(schedule, graph, params, mode)
}

/// A tiny random scheduling problem.
#[derive(Clone, Debug)]
pub struct Instance {
    pub topology: Topology,
    pub circuit: Circuit,
    pub placement: Vec<SlotId>,
}

/// Draws an instance on 2 or 3 traps of capacity 2 or 3 with 1 to 4 random
/// two-qubit gates.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let family = match rng.gen_range(0..3) {
        0 => TopologyFamily::Linear(2),
        1 => TopologyFamily::Linear(3),
        _ => TopologyFamily::Star(3),
    };
    let cap = rng.gen_range(2..=3);
    let topology = build_topology(family, cap).expect("small topologies are valid");
    let slots = topology.total_capacity();
    let n = rng.gen_range(2..=slots - 1);
    let mut circuit = Circuit::new("random", n);
    for _ in 0..rng.gen_range(1..=4) {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        circuit.push_two("cx", a, b, &[]);
    }
    let mut all: Vec<SlotId> = (0..slots).map(SlotId).collect();
    all.shuffle(rng);
    all.truncate(n);
    Instance { topology, circuit, placement: all }
}

pub fn random_instances(seed: u64, count: usize) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_instance(&mut rng)).collect()
}

/// Heuristic versus exhaustive cost on one instance.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapResult {
    pub topology: String,
    pub qubits: usize,
    pub gates: usize,
    pub heuristic_weight: f64,
    pub optimal_weight: Option<f64>,
    pub heuristic_shuttles: usize,
    pub optimal_shuttles: Option<usize>,
    /// Heuristic over optimal weight; 1 when both are zero.
    pub ratio: Option<f64>,
}

impl GapResult {
    pub fn is_optimal(&self) -> bool {
        self.ratio.is_some_and(|r| r <= 1.0 + 1e-9)
    }
}

pub fn compare_on(
    inst: &Instance,
    weights: WeightParams,
    sched: &SchedulerParams,
    limits: &OracleLimits,
) -> Result<GapResult> {
    let graph = DeviceGraph::build(&inst.topology, weights)?;
    let heur = scheduler::schedule(&inst.circuit, &graph, &inst.placement, sched)?;
    scheduler::verify(&inst.circuit, &graph, &heur)?;
    let hw = heur.inserted_weight(&graph);
    let (ow, os) = match exact_schedule(&inst.circuit, &graph, &inst.placement, limits)? {
        ExactOutcome::Optimal(sol) => {
            scheduler::verify(&inst.circuit, &graph, &sol.schedule)?;
            (Some(sol.weight), Some(sol.shuttles))
        }
        ExactOutcome::Infeasible { .. } => (None, None),
    };
    let ratio = ow.map(|o| {
        if o == 0.0 {
            if hw == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            hw / o
        }
    });
    Ok(GapResult {
        topology: inst.topology.name.clone(),
        qubits: inst.circuit.n_qubits,
        gates: inst.circuit.gates.len(),
        heuristic_weight: hw,
        optimal_weight: ow,
        heuristic_shuttles: heur.counts.shuttles,
        optimal_shuttles: os,
        ratio,
    })
}
