// SPDX-License-Identifier: Apache-2.0

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qccd_bench::{mixed, qft_scaling};
use qccd_core::scheduler::paths::PathTable;
use qccd_core::{compile, CompileOptions, DeviceGraph, WeightParams};

fn bench_qft_scaling(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile_qft_g2x3");
    group.sample_size(10);
    let opts = CompileOptions::default();
    for f in qft_scaling() {
        group.bench_with_input(BenchmarkId::from_parameter(f.circuit.n_qubits), &f, |b, f| {
            b.iter(|| compile(&f.circuit, &f.topology, &opts).unwrap())
        });
    }
    group.finish();
}

fn bench_mixed(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile_mixed");
    group.sample_size(10);
    let opts = CompileOptions::default();
    for f in mixed() {
        group.bench_function(&f.name, |b| b.iter(|| compile(&f.circuit, &f.topology, &opts).unwrap()));
    }
    group.finish();
}

fn bench_path_table(c: &mut Criterion) {
    let f = &qft_scaling()[0];
    let graph = DeviceGraph::build(&f.topology, WeightParams::default()).unwrap();
    c.bench_function("path_table_g2x3_17", |b| b.iter(|| PathTable::build(&graph, 2)));
}

criterion_group!(benches, bench_qft_scaling, bench_mixed, bench_path_table);
criterion_main!(benches);
