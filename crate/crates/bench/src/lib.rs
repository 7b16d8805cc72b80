// SPDX-License-Identifier: Apache-2.0

//! Fixtures shared by the compile benchmarks.

use qccd_core::circuit::{gen_benchmark, Benchmark};
use qccd_core::device::build_topology;
use qccd_core::{Circuit, Topology, TopologyFamily};

/// A named circuit and device pair.
pub struct Fixture {
    pub name: String,
    pub circuit: Circuit,
    pub topology: Topology,
}

pub fn fixture(bench: Benchmark, size: usize, family: TopologyFamily, capacity: usize) -> Fixture {
    let circuit = gen_benchmark(bench, size, &Default::default()).expect("benchmark generates");
    let topology = build_topology(family, capacity).expect("topology builds");
    Fixture { name: format!("{bench}{size}_{family}_{capacity}"), circuit, topology }
}

/// QFT at growing sizes on a 2x3 grid, for compile-time scaling.
pub fn qft_scaling() -> Vec<Fixture> {
    [16, 32, 48, 64]
        .into_iter()
        .map(|n| fixture(Benchmark::Qft, n, TopologyFamily::Grid { rows: 2, cols: 3 }, 17))
        .collect()
}

/// One mid-sized circuit per benchmark family.
pub fn mixed() -> Vec<Fixture> {
    let g = TopologyFamily::Grid { rows: 2, cols: 2 };
    vec![
        fixture(Benchmark::Bv, 32, g, 12),
        fixture(Benchmark::QaoaChain, 32, g, 12),
        fixture(Benchmark::CuccaroAdder, 8, g, 12),
        fixture(Benchmark::Heisenberg, 16, g, 12),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_fit() {
        for f in qft_scaling().into_iter().chain(mixed()) {
            assert!(f.circuit.n_qubits < f.topology.total_capacity(), "{}", f.name);
        }
    }
}
