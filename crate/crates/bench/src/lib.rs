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


//! Shared fixtures for the simulation benchmarks.

use num_bigint::BigInt;
use postsel::constructions::{compile_fqp_to_exp, compile_pair_postsel, programmed_postsel, ScaleMode};
use postsel::counting::{make_gap_machine, PredicateCircuit};
use postsel::random::{random_circuit, random_machine, stream};
use postsel::{Bits, Circuit};

/// Seeded random circuits of the given width, 24 gates and at most 12 H.
pub fn random_circuits(count: usize, width: usize) -> Vec<(Circuit, Bits)> {
    (0..count)
        .map(|i| {
            let mut rng = stream(7, i as u64);
            let c = random_circuit(&mut rng, width, 24, 12);
            let input = c.default_input();
            (c, input)
        })
        .collect()
}

/// The mix-and-rescale circuit for `f = 2^h - 1`.
pub fn fqp_circuit(h: usize) -> Circuit {
    let f = (1u64 << h) - 1;
    let v = programmed_postsel(h, f, f / 2).expect("valid parameters");
    compile_fqp_to_exp(&v, &BigInt::from(f), h).expect("precondition holds")
}

/// A pair-postselection circuit over two programmed machines with `q` path bits.
pub fn pair_circuit(q: usize, k: usize) -> Circuit {
    let top = 1i64 << q;
    let m1 = make_gap_machine(top - 2, q).expect("in range");
    let m2 = make_gap_machine(2 - top, q).expect("in range");
    compile_pair_postsel(&m1, &m2, &Bits::new(Vec::new()), k, &ScaleMode::None).expect("nonzero gaps")
}

pub fn machine(q: usize) -> PredicateCircuit {
    random_machine(&mut stream(11, q as u64), 0, q, 3, 16)
}
