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

//! Exact statevector simulation.
//!
//! After `m` Hadamards every amplitude of a Hadamard+Toffoli circuit is
//! `c/√2^m` for an integer `c`, with one `m` shared by the whole state. The
//! simulator therefore stores integer numerators only and tracks `m` as the
//! running Hadamard count. Amplitudes are kept on their support (the basis
//! states with a nonzero numerator) in a flat key/coefficient table, which
//! is never larger than `2^width` and usually far smaller: the constructions
//! in this crate carry many classical work qubits.
//!
//! Numerators are bounded by `2^(m/2)` because their squares sum to `2^m`.
//! The kernel picks `i64` when `m <= 62`, `i128` when `m <= 126` and
//! `BigInt` otherwise, so no intermediate can overflow.

use std::borrow::Cow;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::bits::Bits;
use crate::circuit::{expand_mcx, Circuit, Gate, GateKind};
use crate::error::{PostselError, Result};
use crate::ring::{DyadicRational, PathAmplitude, SqrtDyadic};

/// Default simulator width cap; `POSTSEL_MAX_QUBITS` overrides it.
pub const DEFAULT_MAX_QUBITS: usize = 24;

/// Current width cap, at most 64 (basis states are packed into a `u64`).
pub fn width_cap() -> usize {
    std::env::var("POSTSEL_MAX_QUBITS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .unwrap_or(DEFAULT_MAX_QUBITS)
        .min(64)
}

trait Coeff: Clone + Zero + Add<Output = Self> + Sub<Output = Self> + Neg<Output = Self> {
    fn one() -> Self;
    fn to_big(&self) -> BigInt;
}

impl Coeff for i64 {
    fn one() -> Self {
        1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for i128 {
    fn one() -> Self {
        1
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Coeff for BigInt {
    fn one() -> Self {
        BigInt::from(1)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

#[derive(Clone, Debug)]
struct Support<C> {
    keys: Vec<u64>,
    coeffs: Vec<C>,
}

impl<C: Coeff> Support<C> {
    fn basis(z: u64) -> Self {
        Support {
            keys: vec![z],
            coeffs: vec![C::one()],
        }
    }

    fn apply_classical(&mut self, gate: &Gate) {
        let flip = 1u64 << gate.target();
        let controls = gate.controls();
        for key in &mut self.keys {
            if controls.iter().all(|c| c.fires(*key)) {
                *key ^= flip;
            }
        }
    }

    fn apply_h(&mut self, qubit: usize) {
        let bit = 1u64 << qubit;
        let ones = self.keys.iter().filter(|&&k| k & bit != 0).count();
        let n = self.keys.len();
        if ones == 0 {
            // |0> -> |0> + |1>; no two entries collide.
            self.keys.extend_from_within(..);
            self.coeffs.extend_from_within(..);
            for k in &mut self.keys[n..] {
                *k |= bit;
            }
        } else if ones == n {
            // |1> -> |0> - |1>
            self.keys.extend_from_within(..);
            self.coeffs.extend_from_within(..);
            for k in &mut self.keys[..n] {
                *k &= !bit;
            }
            for c in &mut self.coeffs[n..] {
                *c = -c.clone();
            }
        } else {
            self.merge_h(bit);
        }
    }

    fn merge_h(&mut self, bit: u64) {
        let mut order: Vec<usize> = (0..self.keys.len()).collect();
        order.sort_unstable_by_key(|&i| self.keys[i] & !bit);
        let mut keys = Vec::with_capacity(self.keys.len() * 2);
        let mut coeffs = Vec::with_capacity(self.keys.len() * 2);
        let mut i = 0;
        while i < order.len() {
            let base = self.keys[order[i]] & !bit;
            let (mut c0, mut c1) = (C::zero(), C::zero());
            while i < order.len() && self.keys[order[i]] & !bit == base {
                let idx = order[i];
                if self.keys[idx] & bit == 0 {
                    c0 = self.coeffs[idx].clone();
                } else {
                    c1 = self.coeffs[idx].clone();
                }
                i += 1;
            }
            let plus = c0.clone() + c1.clone();
            let minus = c0 - c1;
            if !plus.is_zero() {
                keys.push(base);
                coeffs.push(plus);
            }
            if !minus.is_zero() {
                keys.push(base | bit);
                coeffs.push(minus);
            }
        }
        self.keys = keys;
        self.coeffs = coeffs;
    }

    fn sort(&mut self) {
        let mut order: Vec<usize> = (0..self.keys.len()).collect();
        order.sort_unstable_by_key(|&i| self.keys[i]);
        self.keys = order.iter().map(|&i| self.keys[i]).collect();
        self.coeffs = order.iter().map(|&i| self.coeffs[i].clone()).collect();
    }
}

fn simulate<C: Coeff>(circuit: &Circuit, start: u64) -> Support<C> {
    let mut support = Support::<C>::basis(start);
    for gate in circuit.gates() {
        match gate.kind() {
            GateKind::H => support.apply_h(gate.target()),
            _ => support.apply_classical(gate),
        }
    }
    support.sort();
    support
}

#[derive(Clone, Debug)]
enum Amplitudes {
    Small(Support<i64>),
    Wide(Support<i128>),
    Big(Support<BigInt>),
}

/// Exact pure state: the amplitude of basis state `z` is `coeff(z)/√2^m`.
///
/// Basis state `z` has qubit `i` in bit `i` of `z`.
#[derive(Clone, Debug)]
pub struct QuantumState {
    width: usize,
    m: u32,
    amplitudes: Amplitudes,
}

impl QuantumState {
    pub fn width(&self) -> usize {
        self.width
    }

    /// Global √2 exponent; equals the number of Hadamards applied.
    pub fn sqrt2_exponent(&self) -> u32 {
        self.m
    }

    /// Number of basis states with a nonzero amplitude.
    pub fn support_len(&self) -> usize {
        match &self.amplitudes {
            Amplitudes::Small(s) => s.keys.len(),
            Amplitudes::Wide(s) => s.keys.len(),
            Amplitudes::Big(s) => s.keys.len(),
        }
    }

    pub fn coeff(&self, z: u64) -> BigInt {
        fn find<C: Coeff>(s: &Support<C>, z: u64) -> BigInt {
            s.keys
                .binary_search(&z)
                .map(|i| s.coeffs[i].to_big())
                .unwrap_or_default()
        }
        match &self.amplitudes {
            Amplitudes::Small(s) => find(s, z),
            Amplitudes::Wide(s) => find(s, z),
            Amplitudes::Big(s) => find(s, z),
        }
    }

    pub fn amplitude(&self, z: u64) -> PathAmplitude {
        PathAmplitude::new(self.coeff(z), self.m)
    }

    pub fn amplitude_exact(&self, z: u64) -> SqrtDyadic {
        SqrtDyadic::from(&self.amplitude(z))
    }

    /// Nonzero numerators in increasing basis order.
    pub fn nonzero(&self) -> Vec<(u64, BigInt)> {
        fn collect<C: Coeff>(s: &Support<C>) -> Vec<(u64, BigInt)> {
            s.keys
                .iter()
                .zip(&s.coeffs)
                .map(|(&k, c)| (k, c.to_big()))
                .collect()
        }
        match &self.amplitudes {
            Amplitudes::Small(s) => collect(s),
            Amplitudes::Wide(s) => collect(s),
            Amplitudes::Big(s) => collect(s),
        }
    }

    /// All `2^width` numerators. Only for small widths.
    pub fn dense_coeffs(&self) -> Vec<BigInt> {
        assert!(self.width <= 24, "dense view of a {}-qubit state", self.width);
        let mut dense = vec![BigInt::zero(); 1usize << self.width];
        for (z, c) in self.nonzero() {
            dense[z as usize] = c;
        }
        dense
    }

    /// `Σ_z [z matches] coeff(z)²`, the probability numerator over `2^m`.
    fn weight(&self, matches: impl Fn(u64) -> bool) -> BigInt {
        match &self.amplitudes {
            Amplitudes::Small(s) => {
                // Each square is at most 2^62 and the total is at most 2^m.
                let total: u128 = s
                    .keys
                    .iter()
                    .zip(&s.coeffs)
                    .filter(|(&k, _)| matches(k))
                    .map(|(_, &c)| (c as i128 * c as i128) as u128)
                    .sum();
                BigInt::from(total)
            }
            Amplitudes::Wide(s) => {
                let total: u128 = s
                    .keys
                    .iter()
                    .zip(&s.coeffs)
                    .filter(|(&k, _)| matches(k))
                    .map(|(_, &c)| c.unsigned_abs() * c.unsigned_abs())
                    .sum();
                BigInt::from(total)
            }
            Amplitudes::Big(s) => s
                .keys
                .iter()
                .zip(&s.coeffs)
                .filter(|(&k, _)| matches(k))
                .map(|(_, c)| c * c)
                .sum(),
        }
    }

    /// `Σ_z coeff(z)²`; equals `2^m` for every state `run` produces.
    pub fn norm_numerator(&self) -> BigInt {
        self.weight(|_| true)
    }

    /// Probability that every `(qubit, value)` pair is observed.
    pub fn joint_prob(&self, constraints: &[(usize, bool)]) -> DyadicRational {
        let (mask, want) = constraint_mask(constraints);
        DyadicRational::new(self.weight(|z| z & mask == want), self.m)
    }
}

pub(crate) fn constraint_mask(constraints: &[(usize, bool)]) -> (u64, u64) {
    constraints.iter().fold((0, 0), |(mask, want), &(q, v)| {
        (mask | 1 << q, want | (v as u64) << q)
    })
}

/// Probability of reading `value` on `qubit`.
pub fn measure_prob(state: &QuantumState, qubit: usize, value: bool) -> DyadicRational {
    state.joint_prob(&[(qubit, value)])
}

fn check_input(circuit: &Circuit, input: &Bits) -> Result<u64> {
    if input.len() != circuit.width() {
        return Err(PostselError::WidthMismatch {
            expected: circuit.width(),
            got: input.len(),
        });
    }
    Ok(input.to_mask())
}

/// Runs an expanded circuit on a basis input, exactly.
pub fn run(circuit: &Circuit, input: &Bits) -> Result<QuantumState> {
    run_with_cap(circuit, input, width_cap())
}

pub fn run_with_cap(circuit: &Circuit, input: &Bits, cap: usize) -> Result<QuantumState> {
    let start = check_input(circuit, input)?;
    if circuit.width() > cap.min(64) {
        return Err(PostselError::WidthCap {
            width: circuit.width(),
            cap: cap.min(64),
        });
    }
    if let Some(i) = circuit.gates().iter().position(|g| g.kind() == GateKind::Mcx) {
        return Err(PostselError::UnexpandedMcx(i));
    }
    let m = circuit.h_count();
    let amplitudes = if m <= 62 {
        Amplitudes::Small(simulate(circuit, start))
    } else if m <= 126 {
        Amplitudes::Wide(simulate(circuit, start))
    } else {
        Amplitudes::Big(simulate(circuit, start))
    };
    Ok(QuantumState {
        width: circuit.width(),
        m: m as u32,
        amplitudes,
    })
}

/// Expands MCX macros only when the circuit still has some.
pub fn prepared(circuit: &Circuit) -> Result<Cow<'_, Circuit>> {
    if circuit.is_expanded() {
        Ok(Cow::Borrowed(circuit))
    } else {
        Ok(Cow::Owned(expand_mcx(circuit)?))
    }
}

/// The three quantities every postselected class constrains.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PostselStats {
    /// `P(p=1)`
    pub p_post: DyadicRational,
    /// `P(o=1, p=1)`
    pub p_joint: DyadicRational,
    /// `P(o=1 | p=1)`
    pub p_cond: BigRational,
}

impl PostselStats {
    pub fn from_probabilities(p_post: DyadicRational, p_joint: DyadicRational) -> Result<Self> {
        if p_post.is_zero() {
            return Err(PostselError::ZeroPostselection);
        }
        let p_cond = p_joint.to_rational() / p_post.to_rational();
        Ok(PostselStats {
            p_post,
            p_joint,
            p_cond,
        })
    }

    pub fn from_state(state: &QuantumState, output: usize, postselect: usize) -> Result<Self> {
        Self::from_probabilities(
            state.joint_prob(&[(postselect, true)]),
            state.joint_prob(&[(output, true), (postselect, true)]),
        )
    }
}

/// Exact postselection statistics of a circuit with output and postselect
/// qubits. MCX macros are expanded first.
pub fn postselect_stats(circuit: &Circuit, input: &Bits) -> Result<PostselStats> {
    let output = circuit.output().ok_or(PostselError::MissingRole("output"))?;
    let post = circuit
        .postselect()
        .ok_or(PostselError::MissingRole("postselect"))?;
    let state = run(&*prepared(circuit)?, input)?;
    PostselStats::from_state(&state, output, post)
}

/// `P(o=1)` of a circuit without postselection. MCX macros are expanded first.
pub fn output_prob(circuit: &Circuit, input: &Bits) -> Result<DyadicRational> {
    let output = circuit.output().ok_or(PostselError::MissingRole("output"))?;
    let state = run(&*prepared(circuit)?, input)?;
    Ok(measure_prob(&state, output, true))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{parse_circuit, Control};
    use crate::ring::rational;

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_on_zero() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        let s = run(&c, &bits("0")).unwrap();
        assert_eq!(s.dense_coeffs(), vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(s.sqrt2_exponent(), 1);
        assert_eq!(measure_prob(&s, 0, true), DyadicRational::new(1, 1));
    }

    #[test]
    fn toffoli_permutes() {
        let c = parse_circuit("qubits 3\nccx 0 1 2").unwrap();
        let s = run(&c, &bits("110")).unwrap();
        assert_eq!(s.sqrt2_exponent(), 0);
        assert_eq!(s.nonzero(), vec![(0b111, BigInt::from(1))]);
        assert_eq!(measure_prob(&s, 2, true), DyadicRational::one());
    }

    #[test]
    fn double_hadamard_interferes() {
        let c = parse_circuit("qubits 1\nh 0\nh 0").unwrap();
        let s = run(&c, &bits("0")).unwrap();
        assert_eq!(s.dense_coeffs(), vec![BigInt::from(2), BigInt::zero()]);
        assert_eq!(s.sqrt2_exponent(), 2);
        assert_eq!(measure_prob(&s, 0, true), DyadicRational::zero());
        assert_eq!(s.amplitude_exact(0), SqrtDyadic::one());
    }

    #[test]
    fn hadamard_on_one_has_negative_branch() {
        let c = parse_circuit("qubits 1\nh 0").unwrap();
        let s = run(&c, &bits("1")).unwrap();
        assert_eq!(s.dense_coeffs(), vec![BigInt::from(1), BigInt::from(-1)]);
    }

    #[test]
    fn postselect_examples() {
        let c = parse_circuit("qubits 2\nh 0\nx 1\npostselect 0\noutput 1").unwrap();
        let st = postselect_stats(&c, &bits("00")).unwrap();
        assert_eq!(st.p_post, DyadicRational::new(1, 1));
        assert_eq!(st.p_cond, rational(1, 1));

        let c = parse_circuit("qubits 2\nh 0\ncx 0 1\npostselect 0\noutput 1").unwrap();
        let st = postselect_stats(&c, &bits("00")).unwrap();
        assert_eq!(st.p_post, DyadicRational::new(1, 1));
        assert_eq!(st.p_cond, rational(1, 1));

        let c = parse_circuit("qubits 2\nh 1\npostselect 0\noutput 1").unwrap();
        assert_eq!(postselect_stats(&c, &bits("00")), Err(PostselError::ZeroPostselection));
    }

    #[test]
    fn rejects_bad_inputs() {
        let c = parse_circuit("qubits 4\nmcx 0 1 2 3").unwrap();
        assert_eq!(run(&c, &bits("0000")).unwrap_err(), PostselError::UnexpandedMcx(0));
        assert!(matches!(run(&c, &bits("00")), Err(PostselError::WidthMismatch { .. })));
        let wide = Circuit::new(30);
        assert!(matches!(
            run_with_cap(&wide, &Bits::zeros(30), 24),
            Err(PostselError::WidthCap { width: 30, cap: 24 })
        ));
    }

    #[test]
    fn involutions_on_all_basis_inputs() {
        for width in 1..=6usize {
            for q in 0..width {
                let others: Vec<usize> = (0..width).filter(|&i| i != q).collect();
                let mut gates = vec![Gate::h(q), Gate::x(q)];
                if others.len() >= 2 {
                    gates.push(Gate::ccx(Control::on(others[0]), Control::off(others[1]), q));
                }
                for g in gates {
                    let mut c = Circuit::new(width);
                    c.push(g.clone()).unwrap();
                    c.push(g).unwrap();
                    for z in 0..1u64 << width {
                        let s = run(&c, &Bits::new((0..width).map(|i| z >> i & 1 == 1).collect())).unwrap();
                        let scale = BigInt::from(1) << (s.sqrt2_exponent() / 2) as usize;
                        assert_eq!(s.nonzero(), vec![(z, scale)]);
                    }
                }
            }
        }
    }

    #[test]
    fn mcx_expansion_preserves_statevector() {
        // Superposed controls and a dirty borrowed qubit.
        let text = "qubits 6\nh 0\nh 1\nh 2\nh 5\nmcx 0 !1 2 3\nh 0\noutput 3";
        let macro_circuit = parse_circuit(text).unwrap();
        let expanded = expand_mcx(&macro_circuit).unwrap();
        for z in 0..1u64 << 6 {
            let input = Bits::new((0..6).map(|i| z >> i & 1 == 1).collect());
            let reference = crate::pathsum::amplitudes(&macro_circuit, &input).unwrap();
            let got = run(&expanded, &input).unwrap();
            assert_eq!(got.nonzero(), reference);
        }
    }
}
