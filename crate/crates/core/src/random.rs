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


//! Seeded generators for circuits and machines.

use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::circuit::{Circuit, Control, Gate};
use crate::counting::PredicateCircuit;
use crate::sim::{postselect_stats, PostselStats};

/// The generator of one named stream under one seed.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn distinct(rng: &mut impl Rng, pool: &[usize], n: usize) -> Vec<usize> {
    pool.choose_multiple(rng, n).copied().collect()
}

fn control(rng: &mut impl Rng, q: usize) -> Control {
    if rng.gen_bool(0.25) {
        Control::off(q)
    } else {
        Control::on(q)
    }
}

pub fn random_bits(rng: &mut impl Rng, n: usize) -> Bits {
    Bits::new((0..n).map(|_| rng.gen()).collect())
}

/// `gates` random gates over {H, X, CX, CCX} with at most `max_h` Hadamards
/// and random negated controls. Circuits of width 2 or more get distinct
/// random output and postselect qubits.
pub fn random_circuit(rng: &mut impl Rng, width: usize, gates: usize, max_h: usize) -> Circuit {
    assert!(width >= 1);
    let all: Vec<usize> = (0..width).collect();
    let mut c = Circuit::new(width);
    let mut h = 0;
    for _ in 0..gates {
        let roll = rng.gen_range(0..100);
        let g = if roll < 30 && h < max_h {
            h += 1;
            Gate::h(rng.gen_range(0..width))
        } else if roll < 45 || width == 1 {
            Gate::x(rng.gen_range(0..width))
        } else if roll < 70 || width == 2 {
            let q = distinct(rng, &all, 2);
            Gate::cx(control(rng, q[0]), q[1])
        } else {
            let q = distinct(rng, &all, 3);
            Gate::ccx(control(rng, q[0]), control(rng, q[1]), q[2])
        };
        c.push(g).expect("indices are in range");
    }
    if width >= 2 {
        let roles = distinct(rng, &all, 2);
        c.set_output(roles[0]).expect("in range");
        c.set_postselect(roles[1]).expect("in range");
    } else {
        c.set_output(0).expect("in range");
    }
    c
}

/// A random machine with `n` input, `q` path and `work` work bits; the
/// accept bit is the last work bit and gates never write input bits.
pub fn random_machine(rng: &mut impl Rng, n: usize, q: usize, work: usize, gates: usize) -> PredicateCircuit {
    assert!(work >= 1);
    let width = n + q + work;
    let all: Vec<usize> = (0..width).collect();
    let mut list = Vec::with_capacity(gates);
    for _ in 0..gates {
        // Mostly write work bits; occasionally permute a path bit.
        let target = if q > 0 && rng.gen_bool(0.15) {
            rng.gen_range(n..n + q)
        } else {
            rng.gen_range(n + q..width)
        };
        let others: Vec<usize> = all.iter().copied().filter(|&i| i != target).collect();
        let k = rng.gen_range(0..=3usize.min(others.len()));
        let controls = distinct(rng, &others, k).into_iter().map(|c| control(rng, c)).collect();
        list.push(Gate::controlled_x(controls, target));
    }
    PredicateCircuit::new(n, q, work, list, width - 1).expect("generated machine is valid")
}

/// Draws random postselected circuits (width 3 to 6, at most 8 Hadamards)
/// until one has `P(p=1) > 0` and statistics accepted by `keep`.
pub fn random_postsel_where(rng: &mut impl Rng, keep: impl Fn(&PostselStats) -> bool) -> (Circuit, PostselStats) {
    loop {
        let width = rng.gen_range(3..=6);
        let gates = rng.gen_range(6..=16);
        let c = random_circuit(rng, width, gates, 8);
        if let Ok(stats) = postselect_stats(&c, &c.default_input()) {
            if keep(&stats) {
                return (c, stats);
            }
        }
    }
}

/// A random circuit whose conditional is at least `accept` (members) or at
/// most `reject` (others). With `strict` the conditional must also lie
/// strictly between 0 and 1.
pub fn random_bounded_postsel(
    rng: &mut impl Rng,
    member: bool,
    strict: bool,
    accept: &BigRational,
    reject: &BigRational,
) -> (Circuit, PostselStats) {
    random_postsel_where(rng, |s| {
        let c = &s.p_cond;
        let inside = c.is_positive() && c < &BigRational::one();
        (!strict || inside) && if member { c >= accept } else { c <= reject }
    })
}
