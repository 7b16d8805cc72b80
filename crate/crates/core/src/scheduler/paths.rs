// SPDX-License-Identifier: Apache-2.0

//! Slot-to-slot distances used by the gate score.
//!
//! The score of a gate is the lightest path between its two slots that uses
//! at most `m` intermediate nodes. Occupancy is ignored, so the table depends
//! only on the graph and is built once per compile. Pairs that no such path
//! connects fall back to the unrestricted shortest path.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::cmp::W;
use crate::device::graph::DeviceGraph;
use crate::device::SlotId;

#[derive(Clone, Debug)]
pub struct PathTable {
    n: usize,
    dist: Vec<f64>,
    truncated: Vec<bool>,
}

impl PathTable {
    pub fn build(graph: &DeviceGraph, m: usize) -> Self {
        let n = graph.n_slots();
        let mut dist = vec![f64::INFINITY; n * n];
        for s in 0..n {
            dist[s * n + s] = 0.0;
        }
        // After round r, dist holds the lightest walk of at most r edges. With
        // positive weights the lightest such walk is a simple path.
        for _ in 0..=m {
            let prev = dist.clone();
            for e in graph.edges() {
                let (u, v) = (e.u.index(), e.v.index());
                for s in 0..n {
                    let row = s * n;
                    let via_u = prev[row + u] + e.weight;
                    if via_u < dist[row + v] {
                        dist[row + v] = via_u;
                    }
                    let via_v = prev[row + v] + e.weight;
                    if via_v < dist[row + u] {
                        dist[row + u] = via_v;
                    }
                }
            }
        }
        let mut truncated = vec![true; n * n];
        let missing: Vec<usize> = (0..n).filter(|&s| dist[s * n..(s + 1) * n].iter().any(|d| d.is_infinite())).collect();
        for s in missing {
            let full = dijkstra(graph, SlotId(s));
            for (t, d) in full.into_iter().enumerate() {
                if dist[s * n + t].is_infinite() {
                    dist[s * n + t] = d;
                    truncated[s * n + t] = false;
                }
            }
        }
        PathTable { n, dist, truncated }
    }

    pub fn dis(&self, a: SlotId, b: SlotId) -> f64 {
        self.dist[a.index() * self.n + b.index()]
    }

    /// Whether `dis(a, b)` came from a path within the intermediate-node limit.
    pub fn within_limit(&self, a: SlotId, b: SlotId) -> bool {
        self.truncated[a.index() * self.n + b.index()]
    }
}

fn dijkstra(graph: &DeviceGraph, src: SlotId) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; graph.n_slots()];
    dist[src.index()] = 0.0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((W(0.0), src.index())));
    while let Some(Reverse((W(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, ei) in graph.neighbors(SlotId(u)) {
            let nd = d + graph.edges()[ei].weight;
            if nd < dist[v.index()] {
                dist[v.index()] = nd;
                heap.push(Reverse((W(nd), v.index())));
            }
        }
    }
    dist
}
