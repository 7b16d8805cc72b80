// SPDX-License-Identifier: Apache-2.0

//! The static weighted slot graph.
//!
//! Every trap slot is a node. Slots of one trap are fully connected with
//! weight `inner_weight * distance`. Shuttle edges join the end slots of two
//! traps that share a path, weighted `shuttle_base * (junctions + 1)`. Qubits
//! and free spaces move over this fixed graph by exchanging node contents,
//! so the graph never changes during scheduling.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{ShuttlePath, SlotId, Topology, TrapId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub inner_weight: f64,
    pub shuttle_base: f64,
    /// Edges at or below this weight stay inside a trap.
    pub threshold: f64,
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams { inner_weight: 0.001, shuttle_base: 1.0, threshold: 0.5 }
    }
}

impl WeightParams {
    /// Multiplies all three weights by `r`.
    pub fn scaled(self, r: f64) -> Self {
        WeightParams {
            inner_weight: self.inner_weight * r,
            shuttle_base: self.shuttle_base * r,
            threshold: self.threshold * r,
        }
    }

    /// Requires `0 < inner_weight * max_capacity <= threshold < shuttle_base`.
    pub fn validate(&self, max_capacity: usize) -> Result<()> {
        let top = self.inner_weight * max_capacity as f64;
        if !(self.inner_weight > 0.0 && top <= self.threshold && self.threshold < self.shuttle_base) {
            return Err(Error::InvalidWeights(format!(
                "need 0 < inner_weight*max_capacity ({top}) <= threshold ({}) < shuttle_base ({})",
                self.threshold, self.shuttle_base
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EdgeKind {
    Intra { distance: usize },
    Shuttle { path: usize, junctions: usize, segments: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub u: SlotId,
    pub v: SlotId,
    pub weight: f64,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn is_shuttle(&self) -> bool {
        matches!(self.kind, EdgeKind::Shuttle { .. })
    }
}

/// What an edge is being asked to do.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeUse {
    Gate,
    Interchange,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    TwoQubitGateSite,
    QubitSwap,
    SpaceShift,
    Shuttle,
    Invalid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SlotInfo {
    pub trap: TrapId,
    pub pos: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrapInfo {
    pub capacity: usize,
    pub first: SlotId,
}

/// Cheapest direct shuttle connection between two traps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapLink {
    pub to: TrapId,
    pub weight: f64,
    pub path: usize,
}

#[derive(Clone, Debug)]
pub struct DeviceGraph {
    pub params: WeightParams,
    slots: Vec<SlotInfo>,
    traps: Vec<TrapInfo>,
    edges: Vec<Edge>,
    adj: Vec<Vec<(SlotId, usize)>>,
    lookup: HashMap<(usize, usize), usize>,
    paths: Vec<ShuttlePath>,
    junction_degree: Vec<usize>,
    trap_links: Vec<Vec<TrapLink>>,
}

impl DeviceGraph {
    pub fn build(topology: &Topology, params: WeightParams) -> Result<Self> {
        topology.validate()?;
        params.validate(topology.max_capacity())?;

        let mut slots = Vec::with_capacity(topology.total_capacity());
        let mut traps = Vec::with_capacity(topology.traps.len());
        for t in &topology.traps {
            traps.push(TrapInfo { capacity: t.capacity, first: SlotId(slots.len()) });
            for pos in 0..t.capacity {
                slots.push(SlotInfo { trap: TrapId(t.id), pos });
            }
        }

        let mut edges: Vec<Edge> = Vec::new();
        for t in &traps {
            let base = t.first.index();
            for i in 0..t.capacity {
                for j in i + 1..t.capacity {
                    edges.push(Edge {
                        u: SlotId(base + i),
                        v: SlotId(base + j),
                        weight: params.inner_weight * (j - i) as f64,
                        kind: EdgeKind::Intra { distance: j - i },
                    });
                }
            }
        }

        // One path contributes an edge for each pair of end slots. When two
        // paths join the same traps, the cheaper one wins.
        let mut shuttle: HashMap<(usize, usize), Edge> = HashMap::new();
        for (pi, p) in topology.paths.iter().enumerate() {
            let weight = params.shuttle_base * (p.junctions.len() + 1) as f64;
            let kind = EdgeKind::Shuttle { path: pi, junctions: p.junctions.len(), segments: p.segments };
            let ta = traps[p.trap_a];
            let tb = traps[p.trap_b];
            for ea in end_positions(ta.capacity) {
                for eb in end_positions(tb.capacity) {
                    let a = ta.first.index() + ea;
                    let b = tb.first.index() + eb;
                    let key = (a.min(b), a.max(b));
                    let e = Edge { u: SlotId(key.0), v: SlotId(key.1), weight, kind };
                    shuttle
                        .entry(key)
                        .and_modify(|old| {
                            if e.weight < old.weight {
                                *old = e;
                            }
                        })
                        .or_insert(e);
                }
            }
        }
        edges.extend(shuttle.into_values());
        edges.sort_by_key(|e| (e.u, e.v));

        let mut adj = vec![Vec::new(); slots.len()];
        let mut lookup = HashMap::with_capacity(edges.len());
        for (i, e) in edges.iter().enumerate() {
            adj[e.u.index()].push((e.v, i));
            adj[e.v.index()].push((e.u, i));
            lookup.insert((e.u.index(), e.v.index()), i);
        }
        for a in &mut adj {
            a.sort_by_key(|&(s, _)| s);
        }

        let mut trap_links: Vec<Vec<TrapLink>> = vec![Vec::new(); traps.len()];
        for (pi, p) in topology.paths.iter().enumerate() {
            let weight = params.shuttle_base * (p.junctions.len() + 1) as f64;
            for (from, to) in [(p.trap_a, p.trap_b), (p.trap_b, p.trap_a)] {
                let links = &mut trap_links[from];
                match links.iter_mut().find(|l| l.to == TrapId(to)) {
                    Some(l) if weight < l.weight => *l = TrapLink { to: TrapId(to), weight, path: pi },
                    Some(_) => {}
                    None => links.push(TrapLink { to: TrapId(to), weight, path: pi }),
                }
            }
        }
        for links in &mut trap_links {
            links.sort_by_key(|l| l.to);
        }

        Ok(DeviceGraph {
            params,
            slots,
            traps,
            edges,
            adj,
            lookup,
            paths: topology.paths.clone(),
            junction_degree: topology.junctions.iter().map(|j| j.degree).collect(),
            trap_links,
        })
    }

    pub fn n_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn n_traps(&self) -> usize {
        self.traps.len()
    }

    pub fn slot(&self, s: SlotId) -> SlotInfo {
        self.slots[s.index()]
    }

    pub fn trap_of(&self, s: SlotId) -> TrapId {
        self.slots[s.index()].trap
    }

    pub fn trap(&self, t: TrapId) -> TrapInfo {
        self.traps[t.index()]
    }

    pub fn capacity(&self, t: TrapId) -> usize {
        self.traps[t.index()].capacity
    }

    pub fn max_capacity(&self) -> usize {
        self.traps.iter().map(|t| t.capacity).max().unwrap_or(0)
    }

    /// Slot at `pos` within trap `t`.
    pub fn slot_at(&self, t: TrapId, pos: usize) -> SlotId {
        debug_assert!(pos < self.capacity(t));
        SlotId(self.traps[t.index()].first.index() + pos)
    }

    pub fn trap_slots(&self, t: TrapId) -> impl Iterator<Item = SlotId> {
        let info = self.traps[t.index()];
        (0..info.capacity).map(move |p| SlotId(info.first.index() + p))
    }

    pub fn is_end_slot(&self, s: SlotId) -> bool {
        let info = self.slots[s.index()];
        info.pos == 0 || info.pos + 1 == self.capacity(info.trap)
    }

    /// All edges, sorted by `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, s: SlotId) -> &[(SlotId, usize)] {
        &self.adj[s.index()]
    }

    pub fn edge(&self, u: SlotId, v: SlotId) -> Option<&Edge> {
        let key = (u.index().min(v.index()), u.index().max(v.index()));
        self.lookup.get(&key).map(|&i| &self.edges[i])
    }

    pub fn weight(&self, u: SlotId, v: SlotId) -> Option<f64> {
        self.edge(u, v).map(|e| e.weight)
    }

    pub fn path(&self, index: usize) -> &ShuttlePath {
        &self.paths[index]
    }

    pub fn junction_degree(&self, j: usize) -> usize {
        self.junction_degree[j]
    }

    pub fn n_junctions(&self) -> usize {
        self.junction_degree.len()
    }

    /// Direct trap-to-trap connections, sorted by destination.
    pub fn trap_links(&self, t: TrapId) -> &[TrapLink] {
        &self.trap_links[t.index()]
    }

    /// Classifies edge `(u, v)` given which endpoints hold qubits.
    ///
    /// For [`EdgeUse::Gate`] the only valid answer is a gate site (two qubits,
    /// weight within the threshold). For [`EdgeUse::Interchange`]:
    /// two qubits in one trap swap with a SWAP gate; a qubit and an adjacent
    /// space in one trap exchange by a space shift; a qubit and a space across
    /// a shuttle edge exchange by shuttling. Anything else is invalid.
    pub fn classify_edge(
        &self,
        u: SlotId,
        v: SlotId,
        u_qubit: bool,
        v_qubit: bool,
        usage: EdgeUse,
    ) -> Result<EdgeClass> {
        let e = self.edge(u, v).ok_or(Error::NoSuchEdge(u.index(), v.index()))?;
        let inside = e.weight <= self.params.threshold;
        let class = match usage {
            EdgeUse::Gate if inside && u_qubit && v_qubit => EdgeClass::TwoQubitGateSite,
            EdgeUse::Gate => EdgeClass::Invalid,
            EdgeUse::Interchange => match (inside, u_qubit, v_qubit) {
                (true, true, true) => EdgeClass::QubitSwap,
                (true, true, false) | (true, false, true) => match e.kind {
                    EdgeKind::Intra { distance: 1 } => EdgeClass::SpaceShift,
                    _ => EdgeClass::Invalid,
                },
                (false, true, false) | (false, false, true) => EdgeClass::Shuttle,
                _ => EdgeClass::Invalid,
            },
        };
        Ok(class)
    }
}

fn end_positions(capacity: usize) -> Vec<usize> {
    if capacity == 1 {
        vec![0]
    } else {
        vec![0, capacity - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{build_topology, Junction, Trap, TopologyFamily};

    fn two_traps(cap: usize, junctions: usize) -> Topology {
        Topology {
            name: "pair".into(),
            traps: vec![Trap { id: 0, capacity: cap }, Trap { id: 1, capacity: cap }],
            paths: vec![ShuttlePath { trap_a: 0, trap_b: 1, segments: 2, junctions: (0..junctions).collect() }],
            junctions: (0..junctions).map(|id| Junction { id, degree: 3 }).collect(),
        }
    }

    #[test]
    fn weight_ladder() {
        let g = DeviceGraph::build(&two_traps(3, 1), WeightParams::default()).unwrap();
        assert_eq!(g.weight(SlotId(0), SlotId(1)), Some(0.001));
        assert_eq!(g.weight(SlotId(1), SlotId(2)), Some(0.001));
        assert_eq!(g.weight(SlotId(0), SlotId(2)), Some(0.002));
        assert_eq!(g.weight(SlotId(2), SlotId(3)), Some(2.0));
        assert_eq!(g.weight(SlotId(0), SlotId(5)), Some(2.0));
        assert_eq!(g.weight(SlotId(1), SlotId(4)), None);
        let g = DeviceGraph::build(&two_traps(2, 2), WeightParams::default()).unwrap();
        assert_eq!(g.weight(SlotId(1), SlotId(2)), Some(3.0));
    }

    #[test]
    fn single_trap_has_no_shuttle_edges() {
        let t = Topology { name: "one".into(), traps: vec![Trap { id: 0, capacity: 4 }], paths: vec![], junctions: vec![] };
        let g = DeviceGraph::build(&t, WeightParams::default()).unwrap();
        assert_eq!(g.n_slots(), 4);
        assert_eq!(g.edges().len(), 6);
        assert!(g.edges().iter().all(|e| !e.is_shuttle()));
    }

    #[test]
    fn rejects_bad_weights() {
        let t = two_traps(22, 0);
        let p = WeightParams { inner_weight: 0.1, ..Default::default() };
        assert!(matches!(DeviceGraph::build(&t, p), Err(Error::InvalidWeights(_))));
        let p = WeightParams { threshold: 1.0, ..Default::default() };
        assert!(DeviceGraph::build(&t, p).is_err());
    }

    #[test]
    fn classification_rules() {
        let g = DeviceGraph::build(&two_traps(4, 1), WeightParams::default()).unwrap();
        let c = |u, v, uq, vq| g.classify_edge(SlotId(u), SlotId(v), uq, vq, EdgeUse::Interchange).unwrap();
        // adjacent qubit/space in one trap
        assert_eq!(c(0, 1, true, false), EdgeClass::SpaceShift);
        // distance-3 qubit/space pair in one trap
        assert_eq!(c(0, 3, true, false), EdgeClass::Invalid);
        assert_eq!(c(0, 3, true, true), EdgeClass::QubitSwap);
        // cross-trap, both qubits
        assert_eq!(c(3, 4, true, true), EdgeClass::Invalid);
        assert_eq!(c(3, 4, false, true), EdgeClass::Shuttle);
        assert_eq!(c(3, 4, false, false), EdgeClass::Invalid);
        assert_eq!(c(1, 2, false, false), EdgeClass::Invalid);
        let gate = |u, v, uq, vq| g.classify_edge(SlotId(u), SlotId(v), uq, vq, EdgeUse::Gate).unwrap();
        assert_eq!(gate(0, 3, true, true), EdgeClass::TwoQubitGateSite);
        assert_eq!(gate(3, 4, true, true), EdgeClass::Invalid);
        assert!(matches!(
            g.classify_edge(SlotId(1), SlotId(5), true, false, EdgeUse::Interchange),
            Err(Error::NoSuchEdge(1, 5))
        ));
    }

    #[test]
    fn grid_node_and_group_counts() {
        for (r, c, cap) in [(2, 2, 22), (2, 3, 17), (3, 3, 12)] {
            let t = build_topology(TopologyFamily::Grid { rows: r, cols: c }, cap).unwrap();
            let g = DeviceGraph::build(&t, WeightParams::default()).unwrap();
            assert_eq!(g.n_slots(), r * c * cap);
            let links = r * (c - 1) + c * (r - 1);
            let shuttles = g.edges().iter().filter(|e| e.is_shuttle()).count();
            assert_eq!(shuttles, 4 * links);
        }
    }

    #[test]
    fn shuttle_edges_touch_only_end_slots_and_respect_threshold() {
        for fam in [
            TopologyFamily::Linear(4),
            TopologyFamily::Star(4),
            TopologyFamily::Grid { rows: 2, cols: 3 },
        ] {
            let t = build_topology(fam, 17).unwrap();
            let g = DeviceGraph::build(&t, WeightParams::default()).unwrap();
            let max_intra = g.edges().iter().filter(|e| !e.is_shuttle()).map(|e| e.weight).fold(0.0, f64::max);
            let min_shuttle = g.edges().iter().filter(|e| e.is_shuttle()).map(|e| e.weight).fold(f64::MAX, f64::min);
            assert!(max_intra < g.params.threshold && g.params.threshold < min_shuttle, "{fam}");
            for e in g.edges().iter().filter(|e| e.is_shuttle()) {
                assert!(g.is_end_slot(e.u) && g.is_end_slot(e.v));
                assert_ne!(g.trap_of(e.u), g.trap_of(e.v));
            }
        }
    }
}
