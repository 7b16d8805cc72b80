// SPDX-License-Identifier: Apache-2.0

//! Direct routing plans, used when the heuristic stalls.
//!
//! A plan brings one operand of a stuck gate into its partner's trap: free
//! spaces are shifted to a trap end ahead of each arrival, the mover is
//! brought to an end of its current trap, and it hops trap to trap along the
//! lightest route. A full trap on the route first receives a free slot from
//! the nearest trap that has one, by moving bystander ions outward. Plans are simulated on a copy of
//! the state, so every step is known to be a valid generic swap.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::device::graph::DeviceGraph;
use crate::device::{SlotId, TrapId};
use crate::state::MachineState;

use super::cmp::{approx_lt, W};

#[derive(Clone, Debug)]
pub struct Plan {
    pub steps: Vec<(SlotId, SlotId)>,
    pub weight: f64,
    pub shuttles: usize,
}

impl Plan {
    fn empty() -> Self {
        Plan { steps: Vec::new(), weight: 0.0, shuttles: 0 }
    }

    fn better_than(&self, other: &Plan) -> bool {
        if approx_lt(self.weight, other.weight) {
            return true;
        }
        if approx_lt(other.weight, self.weight) {
            return false;
        }
        self.shuttles < other.shuttles
    }
}

/// Simulates the plan on `st`, recording each step.
struct Sim<'a> {
    graph: &'a DeviceGraph,
    st: MachineState,
    plan: Plan,
}

impl<'a> Sim<'a> {
    fn step(&mut self, u: SlotId, v: SlotId) -> Option<()> {
        let w = self.graph.weight(u, v)?;
        let ev = self.st.apply_generic_swap(self.graph, u, v).ok()?;
        if matches!(ev, crate::state::Event::Shuttle { .. }) {
            self.plan.shuttles += 1;
        }
        self.plan.weight += w;
        self.plan.steps.push((u, v));
        Some(())
    }

    /// Shifts the space nearest to an end of `t` onto that end and returns the
    /// end slot.
    fn open_end(&mut self, t: TrapId) -> Option<SlotId> {
        let cap = self.graph.capacity(t);
        let (mut pos, end) = self
            .st
            .spaces(t)
            .iter()
            .flat_map(|&p| [(p, p, 0usize), (cap - 1 - p, p, cap - 1)])
            .min()
            .map(|(_, p, e)| (p, e))?;
        while pos != end {
            let next = if end > pos { pos + 1 } else { pos - 1 };
            let (a, b) = (self.graph.slot_at(t, pos), self.graph.slot_at(t, next));
            if self.st.at(b).is_qubit() {
                self.step(b, a)?;
            }
            pos = next;
        }
        Some(self.graph.slot_at(t, end))
    }

    /// Moves qubit `q` to the nearer end of its trap.
    fn move_to_end(&mut self, q: usize) -> Option<SlotId> {
        let s = self.st.slot_of(q)?;
        let info = self.graph.slot(s);
        let cap = self.graph.capacity(info.trap);
        let end = if info.pos <= cap - 1 - info.pos { 0 } else { cap - 1 };
        if info.pos == end {
            return Some(s);
        }
        let toward: Vec<usize> =
            if end == 0 { (0..info.pos).rev().collect() } else { (info.pos + 1..cap).collect() };
        // Swap straight past the other ions, then shift through the spaces.
        let far_ion = toward.iter().rev().copied().find(|&p| self.st.at(self.graph.slot_at(info.trap, p)).is_qubit());
        let mut pos = info.pos;
        if let Some(r) = far_ion {
            self.step(s, self.graph.slot_at(info.trap, r))?;
            pos = r;
        }
        while pos != end {
            let next = if end > pos { pos + 1 } else { pos - 1 };
            self.step(self.graph.slot_at(info.trap, pos), self.graph.slot_at(info.trap, next))?;
            pos = next;
        }
        Some(self.graph.slot_at(info.trap, end))
    }
}

/// Lightest trap route from `from` to `to`. Entering a full trap costs one
/// extra shuttle weight, since room has to be made first.
fn route(graph: &DeviceGraph, st: &MachineState, from: TrapId, to: TrapId) -> Option<Vec<TrapId>> {
    let extra = graph.params.shuttle_base;
    let (dist, prev) = dijkstra_traps(graph, from, |x| if st.spaces(x).is_empty() { extra } else { 0.0 });
    if dist[to.index()].is_infinite() {
        return None;
    }
    Some(unwind(&prev, to))
}

fn dijkstra_traps(
    graph: &DeviceGraph,
    from: TrapId,
    entry_cost: impl Fn(TrapId) -> f64,
) -> (Vec<f64>, Vec<Option<TrapId>>) {
    let n = graph.n_traps();
    let mut dist = vec![f64::INFINITY; n];
    let mut prev: Vec<Option<TrapId>> = vec![None; n];
    dist[from.index()] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((W(0.0), from.index())));
    while let Some(Reverse((W(d), t))) = heap.pop() {
        if d > dist[t] {
            continue;
        }
        for link in graph.trap_links(TrapId(t)) {
            let x = link.to;
            let nd = d + link.weight + entry_cost(x);
            if nd < dist[x.index()] {
                dist[x.index()] = nd;
                prev[x.index()] = Some(TrapId(t));
                heap.push(Reverse((W(nd), x.index())));
            }
        }
    }
    (dist, prev)
}

fn unwind(prev: &[Option<TrapId>], to: TrapId) -> Vec<TrapId> {
    let mut path = vec![to];
    let mut cur = to;
    while let Some(p) = prev[cur.index()] {
        path.push(p);
        cur = p;
    }
    path.reverse();
    path
}

impl<'a> Sim<'a> {
    /// Moves a free slot into the full trap `x` from the nearest trap that has
    /// one, shuttling one bystander ion per hop outward. Qubits in `protect`
    /// are never chosen as bystanders.
    fn pull_space(&mut self, x: TrapId, protect: &[usize]) -> Option<()> {
        let (dist, prev) = dijkstra_traps(self.graph, x, |_| 0.0);
        let y = (0..self.graph.n_traps())
            .map(TrapId)
            .filter(|&t| t != x && !self.st.spaces(t).is_empty() && dist[t.index()].is_finite())
            .min_by(|a, b| dist[a.index()].total_cmp(&dist[b.index()]).then(a.cmp(b)))?;
        // Path from x out to y; ions move one hop outward, starting at y.
        let path = unwind(&prev, y);
        for hop in path.windows(2).rev() {
            let (inner, outer) = (hop[0], hop[1]);
            let bystander = self
                .graph
                .trap_slots(inner)
                .filter_map(|s| {
                    let q = self.st.at(s).qubit()?;
                    if protect.contains(&q) {
                        return None;
                    }
                    let pos = self.graph.slot(s).pos;
                    Some((pos.min(self.graph.capacity(inner) - 1 - pos), q))
                })
                .min()?
                .1;
            let dest = self.open_end(outer)?;
            let src = self.move_to_end(bystander)?;
            self.step(src, dest)?;
        }
        Some(())
    }
}

/// Plan that brings `q` into trap `target` without moving `protect` qubits
/// other than `q` itself.
fn plan_move(graph: &DeviceGraph, st: &MachineState, q: usize, target: TrapId, protect: &[usize]) -> Option<Plan> {
    let start = graph.trap_of(st.slot_of(q)?);
    if start == target {
        return Some(Plan::empty());
    }
    let hops = route(graph, st, start, target)?;
    let mut sim = Sim { graph, st: st.clone(), plan: Plan::empty() };
    for w in hops.windows(2) {
        if sim.st.spaces(w[1]).is_empty() {
            sim.pull_space(w[1], protect)?;
        }
        let dest = sim.open_end(w[1])?;
        let src = sim.move_to_end(q)?;
        sim.step(src, dest)?;
    }
    Some(sim.plan)
}

/// Cheapest plan that co-traps `a` and `b`, or `None` if no route exists.
pub fn co_trap(graph: &DeviceGraph, st: &MachineState, a: usize, b: usize) -> Option<Plan> {
    let ta = graph.trap_of(st.slot_of(a)?);
    let tb = graph.trap_of(st.slot_of(b)?);
    let mut best: Option<Plan> = None;
    for (mover, target) in [(b, ta), (a, tb)] {
        if let Some(p) = plan_move(graph, st, mover, target, &[a, b]) {
            if best.as_ref().is_none_or(|cur| p.better_than(cur)) {
                best = Some(p);
            }
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::graph::WeightParams;
    use crate::device::{build_topology, TopologyFamily};
    use crate::state::HeatModel;

    #[test]
    fn shifts_space_then_shuttles() {
        let g = DeviceGraph::build(&build_topology(TopologyFamily::Linear(2), 3).unwrap(), WeightParams::default()).unwrap();
        // trap 0: [q0 _ q1]? no: q0 at 0, q2 at 1; trap 1: q1 at 3, space at 4, q3 at 5
        let st = MachineState::new(&g, &[SlotId(0), SlotId(3), SlotId(1), SlotId(5)], HeatModel::default()).unwrap();
        let plan = co_trap(&g, &st, 0, 1).unwrap();
        assert_eq!(plan.shuttles, 1);
        let mut s = st.clone();
        for &(u, v) in &plan.steps {
            s.apply_generic_swap(&g, u, v).unwrap();
        }
        assert!(s.co_trapped(&g, 0, 1).unwrap());
    }

    #[test]
    fn makes_room_when_both_traps_full() {
        let g = DeviceGraph::build(&build_topology(TopologyFamily::Linear(3), 2).unwrap(), WeightParams::default()).unwrap();
        // trap 0 and trap 1 full, trap 2 empty
        let st = MachineState::new(&g, &[SlotId(0), SlotId(2), SlotId(1), SlotId(3)], HeatModel::default()).unwrap();
        let plan = co_trap(&g, &st, 0, 1).unwrap();
        let mut s = st.clone();
        for &(u, v) in &plan.steps {
            s.apply_generic_swap(&g, u, v).unwrap();
        }
        assert!(s.co_trapped(&g, 0, 1).unwrap());
        s.check_invariants(&g).unwrap();
    }
}
