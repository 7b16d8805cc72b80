// SPDX-License-Identifier: Apache-2.0

//! Gate-level circuit representation.

pub mod dag;
pub mod generators;
pub mod qasm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use generators::{gen_benchmark, parse_generator_spec, Benchmark, GeneratorParams};
pub use qasm::{emit_qasm, parse_qasm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GateKind {
    OneQubit(String),
    TwoQubit(String),
}

impl GateKind {
    pub fn label(&self) -> &str {
        match self {
            GateKind::OneQubit(l) | GateKind::TwoQubit(l) => l,
        }
    }

    pub fn arity(&self) -> usize {
        match self {
            GateKind::OneQubit(_) => 1,
            GateKind::TwoQubit(_) => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub id: usize,
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    /// Rotation angles in radians. Carried for round-tripping only; the
    /// scheduler never looks at them.
    pub params: Vec<f64>,
}

impl Gate {
    pub fn is_two_qubit(&self) -> bool {
        matches!(self.kind, GateKind::TwoQubit(_))
    }

    /// The two operands of a two-qubit gate.
    pub fn pair(&self) -> Option<(usize, usize)> {
        match (&self.kind, self.qubits.as_slice()) {
            (GateKind::TwoQubit(_), &[a, b]) => Some((a, b)),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub n_qubits: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(name: impl Into<String>, n_qubits: usize) -> Self {
        Circuit { name: name.into(), n_qubits, gates: Vec::new() }
    }

    pub fn push_one(&mut self, label: &str, qubit: usize, params: &[f64]) {
        let id = self.gates.len();
        self.gates.push(Gate {
            id,
            kind: GateKind::OneQubit(label.to_string()),
            qubits: vec![qubit],
            params: params.to_vec(),
        });
    }

    pub fn push_two(&mut self, label: &str, a: usize, b: usize, params: &[f64]) {
        let id = self.gates.len();
        self.gates.push(Gate {
            id,
            kind: GateKind::TwoQubit(label.to_string()),
            qubits: vec![a, b],
            params: params.to_vec(),
        });
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    pub fn one_qubit_count(&self) -> usize {
        self.gates.len() - self.two_qubit_count()
    }

    /// Checks dense ids, arity, operand range and distinct operands.
    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            if g.id != i {
                return Err(Error::InvalidCircuit(format!("gate at index {i} has id {}", g.id)));
            }
            if g.qubits.len() != g.kind.arity() {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} ({}) has {} operands",
                    g.kind.label(),
                    g.qubits.len()
                )));
            }
            if let Some(&q) = g.qubits.iter().find(|&&q| q >= self.n_qubits) {
                return Err(Error::InvalidCircuit(format!(
                    "gate {i} uses qubit {q} but the circuit has {} qubits",
                    self.n_qubits
                )));
            }
            if let Some((a, b)) = g.pair() {
                if a == b {
                    return Err(Error::InvalidCircuit(format!("gate {i} acts twice on qubit {a}")));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validate_rejects_repeated_operand() {
        let mut c = Circuit::new("bad", 2);
        c.push_two("cx", 1, 1, &[]);
        assert!(c.validate().is_err());
    }

    #[test]
    fn validate_rejects_sparse_ids() {
        let mut c = Circuit::new("bad", 2);
        c.push_one("h", 0, &[]);
        c.gates[0].id = 3;
        assert!(c.validate().is_err());
    }

    #[test]
    fn counts() {
        let mut c = Circuit::new("c", 3);
        c.push_one("h", 0, &[]);
        c.push_two("cx", 0, 1, &[]);
        c.push_two("cz", 1, 2, &[]);
        assert_eq!(c.two_qubit_count(), 2);
        assert_eq!(c.one_qubit_count(), 1);
        assert_eq!(c.gates[1].pair(), Some((0, 1)));
        assert_eq!(c.gates[0].pair(), None);
    }
}
