// SPDX-License-Identifier: Apache-2.0

//! Initial placement of logical qubits.
//!
//! Placement happens in two levels. The first assigns each qubit to a trap
//! (even round-robin, gathering, or interaction-driven packing). The second
//! orders the qubits inside each trap so that those with the lowest
//! `l(q) = -alpha * E(q) + beta * I(q)` sit at the chain ends, where they can
//! leave quickly, and the highest in the middle.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::circuit::dag::two_qubit_layers;
use crate::circuit::Circuit;
use crate::device::graph::DeviceGraph;
use crate::device::{SlotId, TrapId};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MappingStrategy {
    EvenDivided,
    Gathering,
    Sta,
}

impl fmt::Display for MappingStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MappingStrategy::EvenDivided => "even",
            MappingStrategy::Gathering => "gather",
            MappingStrategy::Sta => "sta",
        })
    }
}

impl FromStr for MappingStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "even" | "even_divided" | "evendivided" => Ok(MappingStrategy::EvenDivided),
            "gather" | "gathering" => Ok(MappingStrategy::Gathering),
            "sta" => Ok(MappingStrategy::Sta),
            _ => Err(Error::InvalidParameter(format!("unknown mapping strategy `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct MappingParams {
    pub alpha: f64,
    pub beta: f64,
    pub lookahead_k: usize,
    pub strategy: MappingStrategy,
}

impl Default for MappingParams {
    fn default() -> Self {
        MappingParams { alpha: 1.0, beta: 1.0, lookahead_k: 8, strategy: MappingStrategy::Gathering }
    }
}

impl MappingParams {
    pub fn validate(&self) -> Result<()> {
        if self.lookahead_k == 0 {
            return Err(Error::InvalidParameter("lookahead k must be >= 1".into()));
        }
        if !self.alpha.is_finite() || !self.beta.is_finite() {
            return Err(Error::InvalidParameter("alpha and beta must be finite".into()));
        }
        Ok(())
    }
}

/// Two-level placement: slot of every logical qubit.
pub fn initial_mapping(circuit: &Circuit, graph: &DeviceGraph, params: &MappingParams) -> Result<Vec<SlotId>> {
    params.validate()?;
    let traps = first_level(circuit, graph, params)?;
    let scores = interaction_scores(circuit, &traps, params.lookahead_k);
    second_level(graph, &traps, &scores, params)
}

/// Trap of every logical qubit.
pub fn first_level(circuit: &Circuit, graph: &DeviceGraph, params: &MappingParams) -> Result<Vec<TrapId>> {
    let n = circuit.n_qubits;
    let caps: Vec<usize> = (0..graph.n_traps()).map(|t| graph.capacity(TrapId(t))).collect();
    match params.strategy {
        MappingStrategy::EvenDivided => even_divided(n, &caps),
        MappingStrategy::Gathering => {
            let order: Vec<usize> = (0..n).collect();
            let traps: Vec<usize> = (0..caps.len()).collect();
            gather(&order, &traps, &caps)
        }
        MappingStrategy::Sta => {
            let order = sta_order(circuit);
            gather(&order, &trap_centrality_order(graph), &caps)
        }
    }
}

fn even_divided(n: usize, caps: &[usize]) -> Result<Vec<TrapId>> {
    let total: usize = caps.iter().sum();
    if total < n {
        return Err(Error::InsufficientCapacity { needed: n, available: total });
    }
    let mut load = vec![0usize; caps.len()];
    let mut out = Vec::with_capacity(n);
    let mut t = 0;
    for _ in 0..n {
        while load[t] == caps[t] {
            t = (t + 1) % caps.len();
        }
        load[t] += 1;
        out.push(TrapId(t));
        t = (t + 1) % caps.len();
    }
    Ok(out)
}

/// Fills traps in the given order up to capacity - 1, qubits in the given order.
fn gather(order: &[usize], traps: &[usize], caps: &[usize]) -> Result<Vec<TrapId>> {
    let room: usize = caps.iter().map(|c| c - 1).sum();
    if room < order.len() {
        return Err(Error::InsufficientCapacity { needed: order.len() + caps.len(), available: room + caps.len() });
    }
    let mut out = vec![TrapId(0); order.len()];
    let mut it = traps.iter().copied();
    let mut cur = it.next();
    let mut load = 0;
    for &q in order {
        while let Some(t) = cur {
            if load < caps[t] - 1 {
                break;
            }
            cur = it.next();
            load = 0;
        }
        let t = cur.expect("room checked above");
        out[q] = TrapId(t);
        load += 1;
    }
    Ok(out)
}

/// Pairwise interaction weights: each shared gate counts `1 / (1 + layer)`.
fn pair_weights(circuit: &Circuit) -> Vec<Vec<f64>> {
    let n = circuit.n_qubits;
    let mut w = vec![vec![0.0; n]; n];
    for (g, layer) in circuit.gates.iter().zip(two_qubit_layers(circuit)) {
        if let (Some((a, b)), Some(l)) = (g.pair(), layer) {
            let x = 1.0 / (1.0 + l as f64);
            w[a][b] += x;
            w[b][a] += x;
        }
    }
    w
}

/// Greedy interaction order: start from the heaviest qubit, then repeatedly
/// take the qubit most strongly tied to those already placed.
pub fn sta_order(circuit: &Circuit) -> Vec<usize> {
    let n = circuit.n_qubits;
    let w = pair_weights(circuit);
    let total: Vec<f64> = w.iter().map(|r| r.iter().sum()).collect();
    let mut placed = vec![false; n];
    let mut tie = vec![0.0; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let mut best: Option<usize> = None;
        for q in (0..n).filter(|&q| !placed[q]) {
            best = match best {
                None => Some(q),
                Some(b) => {
                    let key_q = (tie[q], total[q]);
                    let key_b = (tie[b], total[b]);
                    if key_q.0 > key_b.0 || (key_q.0 == key_b.0 && key_q.1 > key_b.1) {
                        Some(q)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let q = best.expect("unplaced qubit remains");
        placed[q] = true;
        order.push(q);
        for x in 0..n {
            tie[x] += w[q][x];
        }
    }
    order
}

/// Traps sorted from most to least central (smallest summed shuttle distance
/// to all other traps first, ties by id).
pub fn trap_centrality_order(graph: &DeviceGraph) -> Vec<usize> {
    let n = graph.n_traps();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (t, row) in d.iter_mut().enumerate() {
        row[t] = 0.0;
        for link in graph.trap_links(TrapId(t)) {
            row[link.to.index()] = link.weight;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let sums: Vec<f64> = d.iter().map(|r| r.iter().sum()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| sums[a].total_cmp(&sums[b]).then(a.cmp(&b)));
    order
}

/// `(E, I)` per qubit over two-qubit gates in layers `0..k`: gates with an
/// other-trap partner count toward `E`, same-trap partners toward `I`.
pub fn interaction_scores(circuit: &Circuit, traps: &[TrapId], k: usize) -> Vec<(usize, usize)> {
    let mut out = vec![(0usize, 0usize); circuit.n_qubits];
    for (g, layer) in circuit.gates.iter().zip(two_qubit_layers(circuit)) {
        let (Some((a, b)), Some(l)) = (g.pair(), layer) else { continue };
        if l >= k {
            continue;
        }
        for q in [a, b] {
            if traps[a] == traps[b] {
                out[q].1 += 1;
            } else {
                out[q].0 += 1;
            }
        }
    }
    out
}

pub fn l_score(e: usize, i: usize, params: &MappingParams) -> f64 {
    -params.alpha * e as f64 + params.beta * i as f64
}

/// Positions `0..n` of a trap ordered by fill sequence: left end, right end,
/// next from the left, next from the right, and so on. Returns the
/// positions (within a trap of `cap` slots) for `n` qubits, left block first.
fn mountain_positions(n: usize, cap: usize) -> (Vec<usize>, Vec<usize>) {
    let left = n.div_ceil(2);
    let right = n - left;
    ((0..left).collect(), (cap - right..cap).collect())
}

/// Slot of every qubit, given trap assignment and `(E, I)` scores.
pub fn second_level(
    graph: &DeviceGraph,
    traps: &[TrapId],
    scores: &[(usize, usize)],
    params: &MappingParams,
) -> Result<Vec<SlotId>> {
    let mut out = vec![SlotId(0); traps.len()];
    for t in 0..graph.n_traps() {
        let tid = TrapId(t);
        let mut members: Vec<usize> = (0..traps.len()).filter(|&q| traps[q] == tid).collect();
        if members.is_empty() {
            continue;
        }
        let cap = graph.capacity(tid);
        if members.len() > cap {
            return Err(Error::InsufficientCapacity { needed: members.len(), available: cap });
        }
        let l = |q: usize| l_score(scores[q].0, scores[q].1, params);
        members.sort_by(|&a, &b| l(a).total_cmp(&l(b)).then(a.cmp(&b)));

        let (left, right) = mountain_positions(members.len(), cap);
        // Alternate ends, lowest scores outermost.
        let mut pos = vec![0usize; members.len()];
        let (mut li, mut ri) = (0usize, right.len());
        for (i, slot) in pos.iter_mut().enumerate() {
            if i % 2 == 0 {
                *slot = left[li];
                li += 1;
            } else {
                ri -= 1;
                *slot = right[ri];
            }
        }
        // Qubits sharing an l value take their positions in id order, left to
        // right, so degenerate inputs give a plain id ordering.
        let mut i = 0;
        while i < members.len() {
            let mut j = i;
            while j < members.len() && l(members[j]) == l(members[i]) {
                j += 1;
            }
            let mut group_pos: Vec<usize> = pos[i..j].to_vec();
            group_pos.sort_unstable();
            let mut group_q: Vec<usize> = members[i..j].to_vec();
            group_q.sort_unstable();
            for (q, p) in group_q.into_iter().zip(group_pos) {
                out[q] = graph.slot_at(tid, p);
            }
            i = j;
        }
    }
    Ok(out)
}

/// Whether `seq` rises (weakly) to a peak and then falls (weakly).
pub fn is_mountain(seq: &[f64]) -> bool {
    let mut i = 1;
    while i < seq.len() && seq[i] >= seq[i - 1] {
        i += 1;
    }
    while i < seq.len() && seq[i] <= seq[i - 1] {
        i += 1;
    }
    i >= seq.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gen_benchmark, Benchmark};
    use crate::device::graph::WeightParams;
    use crate::device::{build_topology, Trap, Topology, TopologyFamily};

    fn uniform(traps: usize, cap: usize) -> DeviceGraph {
        let topo = Topology {
            name: "u".into(),
            traps: (0..traps).map(|id| Trap { id, capacity: cap }).collect(),
            paths: (1..traps)
                .map(|t| crate::device::ShuttlePath { trap_a: t - 1, trap_b: t, segments: 1, junctions: vec![] })
                .collect(),
            junctions: vec![],
        };
        DeviceGraph::build(&topo, WeightParams::default()).unwrap()
    }

    fn loads(traps: &[TrapId], n: usize) -> Vec<usize> {
        let mut l = vec![0; n];
        for t in traps {
            l[t.index()] += 1;
        }
        l
    }

    #[test]
    fn gathering_fills_minus_one() {
        let g = uniform(3, 4);
        let c = Circuit::new("c", 7);
        let p = MappingParams { strategy: MappingStrategy::Gathering, ..Default::default() };
        assert_eq!(loads(&first_level(&c, &g, &p).unwrap(), 3), vec![3, 3, 1]);
        let c = Circuit::new("c", 10);
        assert!(matches!(first_level(&c, &g, &p), Err(Error::InsufficientCapacity { .. })));
    }

    #[test]
    fn even_round_robin() {
        let g = uniform(4, 4);
        let c = Circuit::new("c", 8);
        let p = MappingParams { strategy: MappingStrategy::EvenDivided, ..Default::default() };
        assert_eq!(loads(&first_level(&c, &g, &p).unwrap(), 4), vec![2, 2, 2, 2]);
        let c = Circuit::new("c", 17);
        assert!(first_level(&c, &g, &p).is_err());
    }

    #[test]
    fn sta_puts_bv_target_centrally() {
        let topo = build_topology(TopologyFamily::Linear(3), 4).unwrap();
        let g = DeviceGraph::build(&topo, WeightParams::default()).unwrap();
        let c = gen_benchmark(Benchmark::Bv, 8, &Default::default()).unwrap();
        let p = MappingParams { strategy: MappingStrategy::Sta, ..Default::default() };
        let traps = first_level(&c, &g, &p).unwrap();
        // target (ancilla) touches every two-qubit gate
        let mut touches = vec![0; c.n_qubits];
        for gate in &c.gates {
            if let Some((a, b)) = gate.pair() {
                touches[a] += 1;
                touches[b] += 1;
            }
        }
        let target = (0..c.n_qubits).max_by_key(|&q| touches[q]).unwrap();
        assert_eq!(trap_centrality_order(&g)[0], 1);
        assert_eq!(traps[target], TrapId(1));
    }

    #[test]
    fn scores_count_cross_and_local() {
        let mut c = Circuit::new("c", 4);
        c.push_two("cx", 0, 1, &[]);
        c.push_two("cx", 0, 2, &[]);
        c.push_two("cx", 0, 3, &[]);
        c.push_two("cx", 0, 2, &[]);
        let traps = [TrapId(0), TrapId(0), TrapId(1), TrapId(1)];
        let s = interaction_scores(&c, &traps, 8);
        assert_eq!(s[0], (3, 1));
        assert_eq!(s[1], (0, 1));
        // window of 1 layer sees only the first gate
        assert_eq!(interaction_scores(&c, &traps, 1)[0], (0, 1));
        let co = [TrapId(0); 4];
        assert!(interaction_scores(&c, &co, 8).iter().all(|&(e, _)| e == 0));
    }

    #[test]
    fn mountain_from_scores() {
        let g = uniform(1, 4);
        let traps = [TrapId(0); 4];
        // l = I here: 5, 1, 3, 0
        let scores = [(0, 5), (0, 1), (0, 3), (0, 0)];
        let slots = second_level(&g, &traps, &scores, &MappingParams::default()).unwrap();
        let mut seq = vec![0.0; 4];
        for (q, s) in slots.iter().enumerate() {
            seq[s.index()] = scores[q].1 as f64;
        }
        assert_eq!(seq[0].min(seq[3]), 0.0);
        assert_eq!(seq[0].max(seq[3]), 1.0);
        assert!(is_mountain(&seq));
    }

    #[test]
    fn equal_scores_keep_id_order() {
        let g = uniform(1, 5);
        let traps = [TrapId(0); 3];
        let slots = second_level(&g, &traps, &[(1, 1); 3], &MappingParams::default()).unwrap();
        // two on the left, one on the right, space in the middle
        assert_eq!(slots, vec![SlotId(0), SlotId(1), SlotId(4)]);
    }

    #[test]
    fn mountain_predicate() {
        assert!(is_mountain(&[]));
        assert!(is_mountain(&[1.0]));
        assert!(is_mountain(&[0.0, 2.0, 2.0, 1.0]));
        assert!(is_mountain(&[3.0, 2.0]));
        assert!(!is_mountain(&[1.0, 0.0, 1.0]));
    }

    #[test]
    fn strategy_parse() {
        assert_eq!("even".parse::<MappingStrategy>().unwrap(), MappingStrategy::EvenDivided);
        assert_eq!("GATHER".parse::<MappingStrategy>().unwrap(), MappingStrategy::Gathering);
        assert!("nope".parse::<MappingStrategy>().is_err());
    }
}
