// SPDX-License-Identifier: Apache-2.0

use proptest::prelude::*;
use qccd_core::circuit::{emit_qasm, parse_qasm};
use qccd_core::cost::gate_fidelity;
use qccd_core::device::build_topology;
use qccd_core::mapping::is_mountain;
use qccd_core::scheduler::verify;
use qccd_core::state::HeatModel;
use qccd_core::{
    compile, Circuit, CompileOptions, CostParams, DepGraph, DeviceGraph, EdgeClass, MachineState, MappingStrategy,
    SlotId, TopologyFamily, WeightParams,
};

#[derive(Clone, Debug)]
enum Op {
    One(&'static str, usize, Option<f64>),
    Two(&'static str, usize, usize, Option<f64>),
}

fn op(n: usize) -> impl Strategy<Value = Op> {
    prop_oneof![
        (prop::sample::select(vec!["h", "x", "t"]), 0..n).prop_map(|(l, q)| Op::One(l, q, None)),
        (0..n, -10.0f64..10.0).prop_map(|(q, a)| Op::One("rz", q, Some(a))),
        (0..n, 1..n, any::<bool>(), -4.0f64..4.0).prop_map(move |(a, off, param, t)| {
            let b = (a + off) % n;
            if param {
                Op::Two("rzz", a, b, Some(t))
            } else {
                Op::Two("cx", a, b, None)
            }
        }),
    ]
}

fn circuit(max_qubits: usize, max_gates: usize) -> impl Strategy<Value = Circuit> {
    (2..=max_qubits)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec(op(n), 1..=max_gates)))
        .prop_map(|(n, ops)| {
            let mut c = Circuit::new("random", n);
            for o in ops {
                match o {
                    Op::One(l, q, p) => c.push_one(l, q, p.as_slice()),
                    Op::Two(l, a, b, p) => c.push_two(l, a, b, p.as_slice()),
                }
            }
            c
        })
}

fn family() -> impl Strategy<Value = TopologyFamily> {
    prop_oneof![
        (2..5usize).prop_map(TopologyFamily::Linear),
        (1..3usize, 2..4usize).prop_map(|(rows, cols)| TopologyFamily::Grid { rows, cols }),
        (2..5usize).prop_map(TopologyFamily::Star),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Popping frontier gates in any order yields an order in which every
    /// gate comes after all earlier gates sharing a qubit with it.
    #[test]
    fn dag_pops_respect_qubit_order(c in circuit(6, 30), picks in prop::collection::vec(any::<prop::sample::Index>(), 30)) {
        let mut dag = DepGraph::build(&c);
        let mut order = Vec::new();
        let mut k = 0;
        while !dag.is_done() {
            let f: Vec<usize> = dag.frontier().iter().copied().collect();
            prop_assert!(!f.is_empty());
            let g = f[picks[k % picks.len()].index(f.len())];
            k += 1;
            dag.pop_gate(g).unwrap();
            order.push(g);
        }
        let mut pos = vec![0; c.gates.len()];
        for (i, &g) in order.iter().enumerate() {
            pos[g] = i;
        }
        for i in 0..c.gates.len() {
            for j in i + 1..c.gates.len() {
                let shared = c.gates[i].qubits.iter().any(|q| c.gates[j].qubits.contains(q));
                if shared {
                    prop_assert!(pos[i] < pos[j], "gate {} popped before {}", j, i);
                }
            }
        }
    }

    #[test]
    fn qasm_round_trip(c in circuit(8, 40)) {
        let back = parse_qasm(&emit_qasm(&c)).unwrap();
        prop_assert_eq!(back.n_qubits, c.n_qubits);
        prop_assert_eq!(back.gates, c.gates);
    }

    /// Random valid generic swaps keep the occupancy consistent, and applying
    /// the same swap twice restores the contents.
    #[test]
    fn generic_swaps_keep_invariants(
        fam in family(),
        cap in 2..5usize,
        fill in 0.2f64..1.0,
        seed in prop::collection::vec(any::<prop::sample::Index>(), 40),
    ) {
        let topo = build_topology(fam, cap).unwrap();
        let g = DeviceGraph::build(&topo, WeightParams::default()).unwrap();
        let n = ((g.n_slots() as f64 * fill) as usize).clamp(1, g.n_slots());
        let placement: Vec<SlotId> = (0..n).map(|i| SlotId(i * g.n_slots() / n)).collect();
        let mut st = MachineState::new(&g, &placement, HeatModel::default()).unwrap();
        for pick in seed {
            let valid: Vec<(SlotId, SlotId)> = g
                .edges()
                .iter()
                .map(|e| (e.u, e.v))
                .filter(|&(u, v)| !matches!(st.classify(&g, u, v), Ok(EdgeClass::Invalid) | Err(_)))
                .collect();
            if valid.is_empty() {
                break;
            }
            let (u, v) = valid[pick.index(valid.len())];
            let before = st.contents().to_vec();
            st.apply_generic_swap(&g, u, v).unwrap();
            st.check_invariants(&g).unwrap();
            let mut twice = st.clone();
            twice.apply_generic_swap(&g, u, v).unwrap();
            prop_assert_eq!(twice.contents(), &before[..]);
        }
    }

    #[test]
    fn mountain_matches_peak_search(seq in prop::collection::vec(0u8..5, 0..12)) {
        let xs: Vec<f64> = seq.iter().map(|&x| x as f64).collect();
        let brute = (0..=xs.len()).any(|k| {
            xs[..k].windows(2).all(|w| w[0] <= w[1])
                && xs[k.saturating_sub(1)..].windows(2).all(|w| w[0] >= w[1])
        });
        prop_assert_eq!(is_mountain(&xs), brute);
    }

    #[test]
    fn fidelity_monotone(
        n in 2..80usize,
        t1 in 0.0f64..5000.0,
        dt in 0.0f64..5000.0,
        b1 in 0.0f64..5.0,
        db in 0.0f64..5.0,
    ) {
        let p = CostParams::default();
        let f = gate_fidelity(t1, n, b1, &p).unwrap();
        prop_assert!((0.0..=1.0).contains(&f));
        prop_assert!(gate_fidelity(t1 + dt, n, b1, &p).unwrap() <= f);
        prop_assert!(gate_fidelity(t1, n, b1 + db, &p).unwrap() <= f);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn schedules_replay_cleanly(
        c in circuit(10, 40),
        fam in family(),
        cap in 3..6usize,
        mapping in prop::sample::select(vec![MappingStrategy::EvenDivided, MappingStrategy::Gathering, MappingStrategy::Sta]),
    ) {
        let topo = build_topology(fam, cap).unwrap();
        let mut opts = CompileOptions::default();
        opts.mapping.strategy = mapping;
        match compile(&c, &topo, &opts) {
            Ok(out) => {
                let report = verify(&c, &out.graph, &out.schedule).unwrap();
                prop_assert_eq!(report.counts.two_qubit_gates, c.two_qubit_count());
                prop_assert!(out.metrics.success_rate >= 0.0 && out.metrics.success_rate <= 1.0);
            }
            // Too many qubits for the device is the only acceptable failure.
            Err(qccd_core::Error::InsufficientCapacity { .. }) => {}
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn weight_scale_invariance(c in circuit(8, 25), exp in -2i32..6) {
        let topo = build_topology(TopologyFamily::Grid { rows: 2, cols: 2 }, 4).unwrap();
        let run = |w: WeightParams| compile(&c, &topo, &CompileOptions { weights: w, ..Default::default() }).unwrap().schedule;
        let r = 10f64.powi(exp);
        prop_assert_eq!(run(WeightParams::default()), run(WeightParams::default().scaled(r)));
    }
}
