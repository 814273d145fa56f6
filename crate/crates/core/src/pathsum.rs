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


//! Feynman path-sum oracle.
//!
//! Every Hadamard splits a computational path in two, the branch taking
//! `|1> -> -|1>` contributing a sign. Summing the signs of all paths that end
//! in basis state `z` gives the integer numerator of its amplitude over
//! `√2^#H`. Nothing here shares code with the statevector kernel, so the two
//! cross-check each other.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::bits::Bits;
use crate::circuit::{Circuit, Gate, GateKind};
use crate::error::{PostselError, Result};
use crate::sim::constraint_mask;

/// Largest Hadamard count the oracle will enumerate.
pub const PATH_SUM_CAP: usize = 24;

fn walk(gates: &[Gate], mut basis: u64, negative: bool, acc: &mut HashMap<u64, i64>) {
    for (i, gate) in gates.iter().enumerate() {
        if gate.kind() != GateKind::H {
            basis = gate.apply_classical(basis);
            continue;
        }
        let bit = 1u64 << gate.target();
        let was_one = basis & bit != 0;
        let rest = &gates[i + 1..];
        walk(rest, basis & !bit, negative, acc);
        walk(rest, basis | bit, negative ^ was_one, acc);
        return;
    }
    *acc.entry(basis).or_insert(0) += if negative { -1 } else { 1 };
}

/// Nonzero amplitude numerators over `√2^#H`, in increasing basis order.
/// MCX macros are applied directly.
pub fn amplitudes(circuit: &Circuit, input: &Bits) -> Result<Vec<(u64, BigInt)>> {
    if input.len() != circuit.width() {
        return Err(PostselError::WidthMismatch {
            expected: circuit.width(),
            got: input.len(),
        });
    }
    if circuit.width() > 64 {
        return Err(PostselError::WidthCap {
            width: circuit.width(),
            cap: 64,
        });
    }
    let h = circuit.h_count();
    if h > PATH_SUM_CAP {
        return Err(PostselError::EnumerationCap {
            q: h,
            cap: PATH_SUM_CAP,
        });
    }
    let mut acc = HashMap::new();
    walk(circuit.gates(), input.to_mask(), false, &mut acc);
    let mut out: Vec<(u64, BigInt)> = acc
        .into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(z, c)| (z, BigInt::from(c)))
        .collect();
    out.sort_by_key(|&(z, _)| z);
    Ok(out)
}

/// Probability that every `(qubit, value)` constraint holds, as `g/2^m`
/// with `m` the Hadamard count.
pub fn path_sum(circuit: &Circuit, input: &Bits, constraints: &[(usize, bool)]) -> Result<(BigInt, u32)> {
    let (mask, want) = constraint_mask(constraints);
    let g = amplitudes(circuit, input)?
        .into_iter()
        .filter(|(z, _)| z & mask == want)
        .fold(BigInt::zero(), |s, (_, c)| s + &c * &c);
    Ok((g, circuit.h_count() as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;

    #[test]
    fn single_hadamard() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        let (g, m) = path_sum(&c, &Bits::zeros(1), &[(0, true)]).unwrap();
        assert_eq!((g, m), (BigInt::from(1), 1));
    }

    #[test]
    fn double_hadamard_cancels() {
        let c = parse_circuit("qubits 1\nh 0\nh 0").unwrap();
        let (g, _) = path_sum(&c, &Bits::zeros(1), &[(0, true)]).unwrap();
        assert!(g.is_zero());
        let (g, m) = path_sum(&c, &Bits::zeros(1), &[(0, false)]).unwrap();
        assert_eq!((g, m), (BigInt::from(4), 2));
    }

    #[test]
    fn unconstrained_sum_is_normalization() {
        let c = parse_circuit("qubits 3\nh 0\nh 1\nccx 0 1 2\nh 0\nh 2").unwrap();
        let (g, m) = path_sum(&c, &Bits::zeros(3), &[]).unwrap();
        assert_eq!(g, BigInt::from(1) << m as usize);
    }
}
