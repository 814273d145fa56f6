// Copyright 2026 The postsel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use postsel::counting::gap;
use postsel::sim::{postselect_stats, run};
use postsel::{path_sum, Bits};
use postsel_bench::{fqp_circuit, machine, pair_circuit, random_circuits};

fn random(c: &mut Criterion) {
    let circuits = random_circuits(32, 8);
    c.bench_function("simulate 32 random circuits", |b| {
        b.iter(|| {
            for (circuit, input) in &circuits {
                black_box(run(circuit, input).unwrap());
            }
        })
    });
    c.bench_function("path sum 32 random circuits", |b| {
        b.iter(|| {
            for (circuit, input) in &circuits {
                black_box(path_sum(circuit, input, &[(0, true)]).unwrap());
            }
        })
    });
}

fn constructions(c: &mut Criterion) {
    let mut group = c.benchmark_group("fqp2exp");
    for h in [3, 5, 6] {
        let circuit = fqp_circuit(h);
        group.bench_with_input(BenchmarkId::from_parameter(h), &circuit, |b, circuit| {
            b.iter(|| black_box(postselect_stats(circuit, &circuit.default_input()).unwrap()))
        });
    }
    group.finish();
    let mut group = c.benchmark_group("pair");
    for q in [2, 4, 6] {
        let circuit = pair_circuit(q, 1);
        group.bench_with_input(BenchmarkId::from_parameter(q), &circuit, |b, circuit| {
            b.iter(|| black_box(postselect_stats(circuit, &circuit.default_input()).unwrap()))
        });
    }
    group.finish();
}

fn counting(c: &mut Criterion) {
    let mut group = c.benchmark_group("gap");
    let empty = Bits::new(Vec::new());
    for q in [8, 12, 16] {
        let m = machine(q);
        group.bench_with_input(BenchmarkId::from_parameter(q), &m, |b, m| b.iter(|| black_box(gap(m, &empty).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, random, constructions, counting);
criterion_main!(benches);
