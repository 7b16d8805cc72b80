// SPDX-License-Identifier: Apache-2.0

//! Gate dependency DAG with an executable frontier.

use std::collections::BTreeSet;

use super::Circuit;
use crate::error::{Error, Result};

/// Dependency graph over gate ids. An edge `(a, b)` means gate `b` acts on a
/// qubit whose previous gate was `a`, so `b` may only run after `a`.
#[derive(Clone, Debug)]
pub struct DepGraph {
    succs: Vec<Vec<usize>>,
    preds: Vec<Vec<usize>>,
    in_degree: Vec<usize>,
    frontier: BTreeSet<usize>,
    executed: Vec<bool>,
    remaining: usize,
}

impl DepGraph {
    /// Builds the DAG by chaining each gate to the last earlier gate on each of
    /// its qubits. Linear in the number of gates.
    pub fn build(circuit: &Circuit) -> Self {
        let n = circuit.gates.len();
        let mut succs = vec![Vec::new(); n];
        let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut last: Vec<Option<usize>> = vec![None; circuit.n_qubits];
        for g in &circuit.gates {
            for &q in &g.qubits {
                if let Some(p) = last[q] {
                    if !preds[g.id].contains(&p) {
                        preds[g.id].push(p);
                        succs[p].push(g.id);
                    }
                }
                last[q] = Some(g.id);
            }
        }
        let in_degree: Vec<usize> = preds.iter().map(Vec::len).collect();
        let frontier = (0..n).filter(|&i| in_degree[i] == 0).collect();
        DepGraph { succs, preds, in_degree, frontier, executed: vec![false; n], remaining: n }
    }

    pub fn len(&self) -> usize {
        self.succs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.succs.is_empty()
    }

    /// Gates with no unexecuted predecessor, in ascending id order.
    pub fn frontier(&self) -> &BTreeSet<usize> {
        &self.frontier
    }

    pub fn is_done(&self) -> bool {
        self.remaining == 0
    }

    pub fn remaining(&self) -> usize {
        self.remaining
    }

    pub fn is_executed(&self, g: usize) -> bool {
        self.executed[g]
    }

    pub fn successors(&self, g: usize) -> &[usize] {
        &self.succs[g]
    }

    pub fn predecessors(&self, g: usize) -> &[usize] {
        &self.preds[g]
    }

    pub fn in_degree(&self, g: usize) -> usize {
        self.in_degree[g]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.succs.iter().enumerate().flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
    }

    /// Marks a frontier gate as executed and releases its successors.
    pub fn pop_gate(&mut self, g: usize) -> Result<()> {
        if !self.frontier.remove(&g) {
            return Err(Error::NotInFrontier(g));
        }
        self.executed[g] = true;
        self.remaining -= 1;
        for &s in &self.succs[g] {
            self.in_degree[s] -= 1;
            if self.in_degree[s] == 0 {
                self.frontier.insert(s);
            }
        }
        Ok(())
    }

    /// As-soon-as-possible layer of every gate (longest path from a source).
    pub fn asap_layers(&self) -> Vec<usize> {
        let mut layer = vec![0usize; self.len()];
        // Gate ids are already a topological order.
        for g in 0..self.len() {
            for &s in &self.succs[g] {
                layer[s] = layer[s].max(layer[g] + 1);
            }
        }
        layer
    }
}

/// ASAP layers over the two-qubit gates only. One-qubit gates map to `None`.
pub fn two_qubit_layers(circuit: &Circuit) -> Vec<Option<usize>> {
    let mut depth = vec![0usize; circuit.n_qubits];
    circuit
        .gates
        .iter()
        .map(|g| {
            let (a, b) = g.pair()?;
            let l = depth[a].max(depth[b]);
            depth[a] = l + 1;
            depth[b] = l + 1;
            Some(l)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circuit(n: usize, pairs: &[(usize, usize)]) -> Circuit {
        let mut c = Circuit::new("t", n);
        for &(a, b) in pairs {
            c.push_two("cx", a, b, &[]);
        }
        c
    }

    #[test]
    fn empty_circuit() {
        let d = DepGraph::build(&Circuit::new("e", 3));
        assert!(d.is_empty());
        assert!(d.frontier().is_empty());
        assert!(d.is_done());
    }

    #[test]
    fn chain_on_one_pair() {
        let d = DepGraph::build(&circuit(2, &[(0, 1), (0, 1), (1, 0)]));
        assert_eq!(d.edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        assert_eq!(d.frontier().iter().copied().collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn join_depends_on_both() {
        let c = circuit(4, &[(0, 1), (2, 3), (1, 2)]);
        let d = DepGraph::build(&c);
        assert_eq!(d.frontier().iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        let mut p = d.predecessors(2).to_vec();
        p.sort();
        assert_eq!(p, vec![0, 1]);
        // Pairwise qubit-sharing scan: g2 shares a qubit with both g0 and g1.
        for earlier in 0..2 {
            let shares = c.gates[earlier].qubits.iter().any(|q| c.gates[2].qubits.contains(q));
            assert!(shares);
        }
    }

    #[test]
    fn pop_chain_and_last() {
        let mut d = DepGraph::build(&circuit(2, &[(0, 1), (0, 1)]));
        d.pop_gate(0).unwrap();
        assert_eq!(d.frontier().iter().copied().collect::<Vec<_>>(), vec![1]);
        d.pop_gate(1).unwrap();
        assert!(d.frontier().is_empty());
        assert!(d.is_done());
    }

    #[test]
    fn pop_diamond() {
        // g0 on (0,1); g1 on (0,2); g2 on (1,3); g3 on (2,3)
        let mut d = DepGraph::build(&circuit(4, &[(0, 1), (0, 2), (1, 3), (2, 3)]));
        assert_eq!(d.frontier().iter().copied().collect::<Vec<_>>(), vec![0]);
        d.pop_gate(0).unwrap();
        assert_eq!(d.frontier().iter().copied().collect::<Vec<_>>(), vec![1, 2]);
        assert!(matches!(d.pop_gate(3), Err(Error::NotInFrontier(3))));
    }

    #[test]
    fn layers() {
        let mut c = circuit(4, &[(0, 1), (2, 3), (1, 2)]);
        c.push_one("h", 0, &[]);
        let d = DepGraph::build(&c);
        assert_eq!(d.asap_layers(), vec![0, 0, 1, 1]);
        assert_eq!(two_qubit_layers(&c), vec![Some(0), Some(0), Some(1), None]);
    }
}
