// SPDX-License-Identifier: Apache-2.0

//! Dynamic machine state: which slot holds which qubit, where the free spaces
//! are, and how much motional heat each trap has picked up.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::device::graph::{DeviceGraph, EdgeClass, EdgeKind, EdgeUse};
use crate::device::{SlotId, TrapId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Occupant {
    Qubit(usize),
    Space,
}

impl Occupant {
    pub fn qubit(self) -> Option<usize> {
        match self {
            Occupant::Qubit(q) => Some(q),
            Occupant::Space => None,
        }
    }

    pub fn is_qubit(self) -> bool {
        matches!(self, Occupant::Qubit(_))
    }
}

/// One machine-level operation, as emitted by the scheduler.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Event {
    /// Execution of circuit gate `gate` inside `trap`.
    Gate { gate: usize, qubits: Vec<usize>, trap: TrapId },
    SwapGate { qubits: [usize; 2], slots: [SlotId; 2], trap: TrapId },
    SpaceShift { qubit: usize, from: SlotId, to: SlotId, trap: TrapId },
    Shuttle {
        qubit: usize,
        from: SlotId,
        to: SlotId,
        from_trap: TrapId,
        to_trap: TrapId,
        segments: usize,
        junctions: Vec<usize>,
    },
}

impl Event {
    /// The slot pair of a generic swap, `None` for gate executions.
    pub fn swap_edge(&self) -> Option<(SlotId, SlotId)> {
        match *self {
            Event::Gate { .. } => None,
            Event::SwapGate { slots, .. } => Some((slots[0], slots[1])),
            Event::SpaceShift { from, to, .. } | Event::Shuttle { from, to, .. } => Some((from, to)),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Event::Gate { .. } => "gate",
            Event::SwapGate { .. } => "swap_gate",
            Event::SpaceShift { .. } => "space_shift",
            Event::Shuttle { .. } => "shuttle",
        }
    }
}

/// Motional quanta added by one shuttle: `k1` for the split/merge pair and
/// `k2` per segment travelled. `dest_fraction` of `k1` lands on the receiving
/// chain, the rest on the chain the ion left; all of the `k2` term goes to
/// the receiving chain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeatModel {
    pub k1: f64,
    pub k2: f64,
    pub dest_fraction: f64,
}

impl Default for HeatModel {
    fn default() -> Self {
        HeatModel { k1: 0.1, k2: 0.01, dest_fraction: 1.0 }
    }
}

impl HeatModel {
    /// `(source, destination)` increments for a shuttle over `segments`.
    pub fn shuttle_increments(&self, segments: usize) -> (f64, f64) {
        let src = (1.0 - self.dest_fraction) * self.k1;
        let dst = self.dest_fraction * self.k1 + self.k2 * segments as f64;
        (src, dst)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    /// Slot of each logical qubit.
    pub pi: Vec<Option<usize>>,
    /// Per trap, slot contents from position 0 upward (`None` is a space).
    pub traps: Vec<Vec<Option<usize>>>,
    pub nbar: Vec<f64>,
}

#[derive(Clone, Debug)]
pub struct MachineState {
    contents: Vec<Occupant>,
    pi: Vec<Option<SlotId>>,
    /// Space recorder: positions of free slots per trap.
    spaces: Vec<BTreeSet<usize>>,
    chain_len: Vec<usize>,
    nbar: Vec<f64>,
    heat: HeatModel,
}

impl MachineState {
    /// Places logical qubit `q` at `placement[q]`; every other slot is a space.
    pub fn new(graph: &DeviceGraph, placement: &[SlotId], heat: HeatModel) -> Result<Self> {
        let mut contents = vec![Occupant::Space; graph.n_slots()];
        for (q, &s) in placement.iter().enumerate() {
            if s.index() >= contents.len() {
                return Err(Error::InvalidMapping(format!("qubit {q} mapped to missing slot {}", s.index())));
            }
            if let Occupant::Qubit(other) = contents[s.index()] {
                return Err(Error::InvalidMapping(format!(
                    "qubits {other} and {q} share slot {}",
                    s.index()
                )));
            }
            contents[s.index()] = Occupant::Qubit(q);
        }
        Self::from_contents(graph, contents, placement.len(), heat)
    }

    pub fn from_contents(graph: &DeviceGraph, contents: Vec<Occupant>, n_qubits: usize, heat: HeatModel) -> Result<Self> {
        if contents.len() != graph.n_slots() {
            return Err(Error::InvalidMapping(format!(
                "{} slot contents for a device with {} slots",
                contents.len(),
                graph.n_slots()
            )));
        }
        let mut pi = vec![None; n_qubits];
        let mut spaces = vec![BTreeSet::new(); graph.n_traps()];
        let mut chain_len = vec![0; graph.n_traps()];
        for (i, occ) in contents.iter().enumerate() {
            let info = graph.slot(SlotId(i));
            match *occ {
                Occupant::Qubit(q) => {
                    if q >= n_qubits {
                        return Err(Error::InvalidMapping(format!("qubit {q} out of range")));
                    }
                    if pi[q].is_some() {
                        return Err(Error::InvalidMapping(format!("qubit {q} placed twice")));
                    }
                    pi[q] = Some(SlotId(i));
                    chain_len[info.trap.index()] += 1;
                }
                Occupant::Space => {
                    spaces[info.trap.index()].insert(info.pos);
                }
            }
        }
        Ok(MachineState { contents, pi, spaces, chain_len, nbar: vec![0.0; graph.n_traps()], heat })
    }

    pub fn n_qubits(&self) -> usize {
        self.pi.len()
    }

    pub fn contents(&self) -> &[Occupant] {
        &self.contents
    }

    pub fn at(&self, s: SlotId) -> Occupant {
        self.contents[s.index()]
    }

    pub fn slot_of(&self, q: usize) -> Option<SlotId> {
        self.pi.get(q).copied().flatten()
    }

    pub fn placed_slot(&self, q: usize) -> Result<SlotId> {
        self.slot_of(q).ok_or(Error::Unplaced(q))
    }

    pub fn trap_of_qubit(&self, graph: &DeviceGraph, q: usize) -> Result<TrapId> {
        Ok(graph.trap_of(self.placed_slot(q)?))
    }

    /// Free positions in trap `t`.
    pub fn spaces(&self, t: TrapId) -> &BTreeSet<usize> {
        &self.spaces[t.index()]
    }

    /// Number of traps with no free slot.
    pub fn full_traps(&self) -> usize {
        self.spaces.iter().filter(|s| s.is_empty()).count()
    }

    pub fn nbar(&self, t: TrapId) -> f64 {
        self.nbar[t.index()]
    }

    pub fn nbar_all(&self) -> &[f64] {
        &self.nbar
    }

    pub fn heat_model(&self) -> HeatModel {
        self.heat
    }

    /// Number of ions in trap `t`.
    pub fn chain_length(&self, t: TrapId) -> usize {
        self.chain_len[t.index()]
    }

    /// Ions strictly between `qa` and `qb`; free slots are not counted.
    pub fn ion_distance(&self, graph: &DeviceGraph, qa: usize, qb: usize) -> Result<usize> {
        let sa = self.placed_slot(qa)?;
        let sb = self.placed_slot(qb)?;
        let (ia, ib) = (graph.slot(sa), graph.slot(sb));
        if ia.trap != ib.trap {
            return Err(Error::NotCoTrapped(qa, qb));
        }
        let (lo, hi) = (ia.pos.min(ib.pos), ia.pos.max(ib.pos));
        let spaces_between = self.spaces[ia.trap.index()].range(lo + 1..hi).count();
        Ok(hi - lo - 1 - spaces_between)
    }

    pub fn co_trapped(&self, graph: &DeviceGraph, qa: usize, qb: usize) -> Result<bool> {
        Ok(self.trap_of_qubit(graph, qa)? == self.trap_of_qubit(graph, qb)?)
    }

    /// Whether the gate on `qubits` can run right now: one-qubit gates always,
    /// two-qubit gates when their slots form a gate site.
    pub fn is_executable(&self, graph: &DeviceGraph, qubits: &[usize]) -> Result<bool> {
        match *qubits {
            [q] => {
                self.placed_slot(q)?;
                Ok(true)
            }
            [a, b] => {
                let (sa, sb) = (self.placed_slot(a)?, self.placed_slot(b)?);
                if graph.trap_of(sa) != graph.trap_of(sb) {
                    return Ok(false);
                }
                Ok(graph.classify_edge(sa, sb, true, true, EdgeUse::Gate)? == EdgeClass::TwoQubitGateSite)
            }
            _ => Err(Error::InvalidCircuit(format!("gate with {} operands", qubits.len()))),
        }
    }

    pub fn classify(&self, graph: &DeviceGraph, u: SlotId, v: SlotId) -> Result<EdgeClass> {
        graph.classify_edge(u, v, self.at(u).is_qubit(), self.at(v).is_qubit(), EdgeUse::Interchange)
    }

    /// Exchanges the contents of `u` and `v` if the edge is a valid SWAP gate,
    /// space shift or shuttle, and returns the corresponding event.
    pub fn apply_generic_swap(&mut self, graph: &DeviceGraph, u: SlotId, v: SlotId) -> Result<Event> {
        let class = self.classify(graph, u, v)?;
        let iu = graph.slot(u);
        let event = match class {
            EdgeClass::QubitSwap => {
                let (Occupant::Qubit(a), Occupant::Qubit(b)) = (self.at(u), self.at(v)) else {
                    unreachable!("classified as qubit swap");
                };
                Event::SwapGate { qubits: [a, b], slots: [u, v], trap: iu.trap }
            }
            EdgeClass::SpaceShift => {
                let (from, to) = if self.at(u).is_qubit() { (u, v) } else { (v, u) };
                let qubit = self.at(from).qubit().expect("qubit end");
                Event::SpaceShift { qubit, from, to, trap: iu.trap }
            }
            EdgeClass::Shuttle => {
                let (from, to) = if self.at(u).is_qubit() { (u, v) } else { (v, u) };
                let qubit = self.at(from).qubit().expect("qubit end");
                let Some(EdgeKind::Shuttle { path, segments, .. }) = graph.edge(u, v).map(|e| e.kind) else {
                    unreachable!("classified as shuttle");
                };
                let (ft, tt) = (graph.trap_of(from), graph.trap_of(to));
                assert!(
                    graph.is_end_slot(to) && self.spaces[tt.index()].contains(&graph.slot(to).pos),
                    "shuttle target must be a free end slot"
                );
                Event::Shuttle {
                    qubit,
                    from,
                    to,
                    from_trap: ft,
                    to_trap: tt,
                    segments,
                    junctions: graph.path(path).junctions.clone(),
                }
            }
            EdgeClass::TwoQubitGateSite | EdgeClass::Invalid => {
                return Err(Error::InvalidSwap {
                    u: u.index(),
                    v: v.index(),
                    reason: "not a SWAP gate, space shift or shuttle",
                })
            }
        };
        self.exchange(graph, u, v);
        if let Event::Shuttle { from_trap, to_trap, segments, .. } = event {
            let (src, dst) = self.heat.shuttle_increments(segments);
            self.nbar[from_trap.index()] += src;
            self.nbar[to_trap.index()] += dst;
        }
        Ok(event)
    }

    /// Raw content exchange with bookkeeping, no validity check.
    fn exchange(&mut self, graph: &DeviceGraph, u: SlotId, v: SlotId) {
        let (iu, iv) = (graph.slot(u), graph.slot(v));
        let (cu, cv) = (self.contents[u.index()], self.contents[v.index()]);
        self.contents[u.index()] = cv;
        self.contents[v.index()] = cu;
        for (slot, info, occ) in [(u, iu, cv), (v, iv, cu)] {
            match occ {
                Occupant::Qubit(q) => {
                    self.pi[q] = Some(slot);
                    self.spaces[info.trap.index()].remove(&info.pos);
                }
                Occupant::Space => {
                    self.spaces[info.trap.index()].insert(info.pos);
                }
            }
        }
        if iu.trap != iv.trap && cu.is_qubit() != cv.is_qubit() {
            let (from, to) = if cu.is_qubit() { (iu.trap, iv.trap) } else { (iv.trap, iu.trap) };
            self.chain_len[from.index()] -= 1;
            self.chain_len[to.index()] += 1;
        }
    }

    /// Cross-checks the redundant structures; returns a description of the
    /// first inconsistency.
    pub fn check_invariants(&self, graph: &DeviceGraph) -> std::result::Result<(), String> {
        let mut seen = vec![false; self.pi.len()];
        let mut chain = vec![0usize; graph.n_traps()];
        for (i, occ) in self.contents.iter().enumerate() {
            let info = graph.slot(SlotId(i));
            match *occ {
                Occupant::Qubit(q) => {
                    if q >= seen.len() || seen[q] {
                        return Err(format!("qubit {q} duplicated or out of range"));
                    }
                    seen[q] = true;
                    if self.pi[q] != Some(SlotId(i)) {
                        return Err(format!("pi[{q}] = {:?}, but qubit sits in slot {i}", self.pi[q]));
                    }
                    if self.spaces[info.trap.index()].contains(&info.pos) {
                        return Err(format!("slot {i} holds qubit {q} but is recorded as space"));
                    }
                    chain[info.trap.index()] += 1;
                }
                Occupant::Space => {
                    if !self.spaces[info.trap.index()].contains(&info.pos) {
                        return Err(format!("slot {i} is free but missing from the space recorder"));
                    }
                }
            }
        }
        for (q, s) in self.pi.iter().enumerate() {
            if s.is_some() && !seen[q] {
                return Err(format!("pi[{q}] points at a slot that does not hold it"));
            }
        }
        for t in 0..graph.n_traps() {
            let tid = TrapId(t);
            if chain[t] != self.chain_len[t] {
                return Err(format!("trap {t}: chain length {} recorded, {} actual", self.chain_len[t], chain[t]));
            }
            if chain[t] + self.spaces[t].len() != graph.capacity(tid) {
                return Err(format!("trap {t}: qubits + spaces != capacity"));
            }
        }
        Ok(())
    }

    pub fn snapshot(&self, graph: &DeviceGraph) -> Snapshot {
        Snapshot {
            pi: self.pi.iter().map(|s| s.map(SlotId::index)).collect(),
            traps: (0..graph.n_traps())
                .map(|t| graph.trap_slots(TrapId(t)).map(|s| self.at(s).qubit()).collect())
                .collect(),
            nbar: self.nbar.clone(),
        }
    }
}
