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


//! Desk-scale counting machines.
//!
//! A machine is a reversible classical circuit over input bits `w`, path
//! bits `x` and work bits that start at zero. Every `x in {0,1}^q` is a
//! computation path, so machines are normal by construction; the path
//! accepts when the accept bit ends at 1. Qubits are laid out as
//! `[w | x | work]` and `x` is read most significant bit first.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use crate::bits::Bits;
use crate::circuit::{parse_gate, Control, Gate, GateKind};
use crate::error::{PostselError, Result};
use crate::ring::ceil_log2;

/// Default largest path width `gap` will enumerate.
pub const ENUMERATION_CAP: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredicateCircuit {
    input_width: usize,
    path_width: usize,
    work: usize,
    gates: Vec<Gate>,
    accept: usize,
}

impl PredicateCircuit {
    pub fn new(input_width: usize, path_width: usize, work: usize, gates: Vec<Gate>, accept: usize) -> Result<Self> {
        let m = PredicateCircuit {
            input_width,
            path_width,
            work,
            gates,
            accept,
        };
        m.validate(0)?;
        Ok(m)
    }

    fn validate(&self, line: usize) -> Result<()> {
        let width = self.width();
        if width > 64 {
            return Err(PostselError::InvalidCircuit(format!("machine width {width} exceeds 64")));
        }
        if self.accept >= width {
            return Err(PostselError::IndexOutOfRange {
                line,
                index: self.accept,
                width,
            });
        }
        if self.accept < self.input_width {
            return Err(PostselError::InvalidCircuit("the accept bit cannot be an input bit".into()));
        }
        for g in &self.gates {
            g.check(width, line)?;
            if g.kind() == GateKind::H {
                return Err(PostselError::InvalidCircuit("machines are classical; h is not allowed".into()));
            }
            if g.target() < self.input_width {
                return Err(PostselError::InvalidCircuit(format!(
                    "gate {g} writes input bit {}",
                    g.target()
                )));
            }
        }
        Ok(())
    }

    pub fn input_width(&self) -> usize {
        self.input_width
    }

    pub fn path_width(&self) -> usize {
        self.path_width
    }

    pub fn work_width(&self) -> usize {
        self.work
    }

    pub fn width(&self) -> usize {
        self.input_width + self.path_width + self.work
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn accept(&self) -> usize {
        self.accept
    }

    fn path_qubit(&self, i: usize) -> usize {
        self.input_width + i
    }

    fn start(&self, w: &Bits, x: &Bits) -> Result<u64> {
        if w.len() != self.input_width {
            return Err(PostselError::WidthMismatch {
                expected: self.input_width,
                got: w.len(),
            });
        }
        if x.len() != self.path_width {
            return Err(PostselError::WidthMismatch {
                expected: self.path_width,
                got: x.len(),
            });
        }
        Ok(w.to_mask() | x.to_mask() << self.input_width)
    }

    fn accepts_basis(&self, mut basis: u64) -> bool {
        for g in &self.gates {
            basis = g.apply_classical(basis);
        }
        basis >> self.accept & 1 == 1
    }

    /// Fixes the input to `w` and drops the input bits. Gates whose input
    /// controls fail are removed; satisfied input controls are dropped.
    pub fn specialize(&self, w: &Bits) -> Result<PredicateCircuit> {
        let n = self.input_width;
        if w.len() != n {
            return Err(PostselError::WidthMismatch {
                expected: n,
                got: w.len(),
            });
        }
        let wmask = w.to_mask();
        let mut gates = Vec::with_capacity(self.gates.len());
        for g in &self.gates {
            let (inputs, rest): (Vec<Control>, Vec<Control>) =
                g.controls().iter().partition(|c| c.qubit < n);
            if inputs.iter().all(|c| c.fires(wmask)) {
                let shifted = rest
                    .iter()
                    .map(|c| Control {
                        qubit: c.qubit - n,
                        negated: c.negated,
                    })
                    .collect();
                gates.push(Gate::controlled_x(shifted, g.target() - n));
            }
        }
        PredicateCircuit::new(0, self.path_width, self.work, gates, self.accept - n)
    }

    /// The same machine with the accept bit negated: `G -> -G`.
    pub fn complement(&self) -> PredicateCircuit {
        let mut m = self.clone();
        m.gates.push(Gate::x(self.accept));
        m
    }

    /// Adds `s` path bits the machine never reads: `G -> 2^s G`.
    pub fn pad_paths(&self, s: usize) -> PredicateCircuit {
        let first_work = self.input_width + self.path_width;
        let shift = |q: usize| if q >= first_work { q + s } else { q };
        PredicateCircuit {
            input_width: self.input_width,
            path_width: self.path_width + s,
            work: self.work,
            gates: self.gates.iter().map(|g| g.remap(shift)).collect(),
            accept: shift(self.accept),
        }
    }

    /// Prepends `extra` input bits the machine never reads.
    pub fn widen_input(&self, extra: usize) -> PredicateCircuit {
        PredicateCircuit {
            input_width: self.input_width + extra,
            path_width: self.path_width,
            work: self.work,
            gates: self.gates.iter().map(|g| g.remap(|q| q + extra)).collect(),
            accept: self.accept + extra,
        }
    }
}

/// Gates flipping `target` exactly when the unsigned value of `xs` (most
/// significant first) is below `a`, and every control in `guard` fires.
///
/// One term per set bit of `a`: the prefix above that bit equals `a`'s and
/// the bit itself is 0. The terms are disjoint, so toggling once per term
/// computes their OR.
pub(crate) fn less_than(xs: &[usize], a: u64, target: usize, guard: &[Control]) -> Vec<Gate> {
    let len = xs.len();
    assert!(len < 64 && a <= 1u64 << len, "comparator constant out of range");
    if a == 1u64 << len {
        return vec![Gate::controlled_x(guard.to_vec(), target)];
    }
    let mut gates = Vec::new();
    for j in 0..len {
        if a >> (len - 1 - j) & 1 == 0 {
            continue;
        }
        let mut controls = guard.to_vec();
        for (i, &q) in xs.iter().enumerate().take(j) {
            let bit = a >> (len - 1 - i) & 1 == 1;
            controls.push(if bit { Control::on(q) } else { Control::off(q) });
        }
        controls.push(Control::off(xs[j]));
        gates.push(Gate::controlled_x(controls, target));
    }
    gates
}

pub fn eval_machine(m: &PredicateCircuit, w: &Bits, x: &Bits) -> Result<bool> {
    Ok(m.accepts_basis(m.start(w, x)?))
}

/// Accepting and rejecting path counts of one machine on one input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapValue {
    pub accepts: BigInt,
    pub rejects: BigInt,
    pub gap: BigInt,
    pub q: usize,
}

impl GapValue {
    pub fn from_accepts(accepts: impl Into<BigInt>, q: usize) -> Self {
        let accepts = accepts.into();
        let rejects = (BigInt::one() << q) - &accepts;
        let gap = &accepts - &rejects;
        GapValue {
            accepts,
            rejects,
            gap,
            q,
        }
    }
}

pub fn gap(m: &PredicateCircuit, w: &Bits) -> Result<GapValue> {
    gap_with_cap(m, w, ENUMERATION_CAP)
}

pub fn gap_with_cap(m: &PredicateCircuit, w: &Bits, cap: usize) -> Result<GapValue> {
    let q = m.path_width;
    if q > cap.min(40) {
        return Err(PostselError::EnumerationCap { q, cap: cap.min(40) });
    }
    let base = m.start(w, &Bits::zeros(q))?;
    let mut accepts: u64 = 0;
    for value in 0..1u64 << q {
        let mut basis = base;
        for i in 0..q {
            basis |= (value >> (q - 1 - i) & 1) << m.path_qubit(i);
        }
        accepts += m.accepts_basis(basis) as u64;
    }
    Ok(GapValue::from_accepts(accepts, q))
}

/// A machine with `input_width` 0 and gap `v`: accept iff `x < (2^q + v)/2`.
pub fn make_gap_machine(v: i64, q: usize) -> Result<PredicateCircuit> {
    let a = programmed_accepts(v, q)?;
    let xs: Vec<usize> = (0..q).collect();
    PredicateCircuit::new(0, q, 1, less_than(&xs, a, q, &[]), q)
}

/// A machine accepting exactly the path `x = v` (`q` bits, no input).
pub fn point_machine(q: usize, v: u64) -> Result<PredicateCircuit> {
    if q >= 63 || v >= 1u64 << q {
        return Err(PostselError::InvalidParameter(format!("{v} is not a {q}-bit path")));
    }
    let x = Bits::from_value(v, q);
    let controls = (0..q)
        .map(|i| if x.get(i) { Control::on(i) } else { Control::off(i) })
        .collect();
    PredicateCircuit::new(0, q, 1, vec![Gate::controlled_x(controls, q)], q)
}

/// A machine rejecting every one of its `2^q` paths.
pub fn reject_all(q: usize) -> PredicateCircuit {
    PredicateCircuit::new(0, q, 1, Vec::new(), q).expect("empty machine is valid")
}

fn programmed_accepts(v: i64, q: usize) -> Result<u64> {
    if q >= 62 {
        return Err(PostselError::InvalidParameter(format!("path width {q} is too large")));
    }
    let total = 1i64 << q;
    if v.abs() > total {
        return Err(PostselError::InvalidParameter(format!("|{v}| exceeds 2^{q}")));
    }
    if (total + v) % 2 != 0 {
        return Err(PostselError::InvalidParameter(format!(
            "gap {v} has the wrong parity for {q} path bits"
        )));
    }
    Ok(((total + v) / 2) as u64)
}

/// A machine reading an `n`-bit input whose gap on `w` is `values[w]`.
/// Inputs missing from the table get gap 0 (or -1 when `q` is 0).
pub fn table_gap_machine(n: usize, q: usize, values: &BTreeMap<Bits, i64>) -> Result<PredicateCircuit> {
    let accept = n + q;
    let xs: Vec<usize> = (n..n + q).collect();
    let default = if q == 0 { 0 } else { 1u64 << (q - 1) };
    let mut gates = Vec::new();
    for w in Bits::all(n) {
        let a = match values.get(&w) {
            Some(&v) => programmed_accepts(v, q)?,
            None => default,
        };
        let guard: Vec<Control> = (0..n)
            .map(|i| if w.get(i) { Control::on(i) } else { Control::off(i) })
            .collect();
        gates.extend(less_than(&xs, a, accept, &guard));
    }
    for w in values.keys() {
        if w.len() != n {
            return Err(PostselError::WidthMismatch {
                expected: n,
                got: w.len(),
            });
        }
    }
    PredicateCircuit::new(n, q, 1, gates, accept)
}

/// `gap(scale_gap(M, c)) = c * gap(M)` using `ceil(log2 c)` extra path bits.
pub fn scale_gap(m: &PredicateCircuit, c: &BigInt) -> Result<PredicateCircuit> {
    if !c.is_positive() {
        return Err(PostselError::InvalidParameter(format!("scale factor {c} must be positive")));
    }
    scale_gap_with_bits(m, c, ceil_log2(c) as usize)
}

/// `scale_gap` with exactly `e >= ceil(log2 c)` extra path bits, so machines
/// scaled by different factors can share a path width.
///
/// The extra bits `y` follow `x`. Paths with `y < c` copy the old verdict;
/// the `2^e - c` others are split into accept/reject pairs by the low bit of
/// `y` when `c` is even and by the last bit of `x` when `c` is odd.
pub fn scale_gap_with_bits(m: &PredicateCircuit, c: &BigInt, e: usize) -> Result<PredicateCircuit> {
    if !c.is_positive() {
        return Err(PostselError::InvalidParameter(format!("scale factor {c} must be positive")));
    }
    if e < ceil_log2(c) as usize || e >= 62 {
        return Err(PostselError::InvalidParameter(format!("{e} extra path bits cannot hold {c}")));
    }
    let cv = c.to_u64().expect("bounded by 2^e");
    if cv == 1u64 << e {
        return Ok(m.pad_paths(e));
    }
    let odd = cv % 2 == 1;
    if odd && m.path_width == 0 {
        return Err(PostselError::InvalidParameter(format!(
            "an odd factor {c} below 2^{e} needs at least one path bit to balance the excess paths"
        )));
    }
    let n = m.input_width;
    let q = m.path_width;
    let padded = m.pad_paths(e);
    let ys: Vec<usize> = (n + q..n + q + e).collect();
    let ylt = padded.width();
    let acc = ylt + 1;
    let balance = if odd { Control::off(n + q - 1) } else { Control::off(ys[e - 1]) };
    // The balancing term reads path bits before the old gates can touch them.
    let mut gates = less_than(&ys, cv, ylt, &[]);
    gates.push(Gate::ccx(Control::off(ylt), balance, acc));
    gates.extend(padded.gates.iter().cloned());
    gates.push(Gate::ccx(Control::on(ylt), Control::on(padded.accept), acc));
    PredicateCircuit::new(n, q + e, padded.work + 2, gates, acc)
}

impl fmt::Display for PredicateCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_machine(self))
    }
}

pub fn serialize_machine(m: &PredicateCircuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "machine {} {} {}", m.input_width, m.path_width, m.work);
    for g in &m.gates {
        let _ = writeln!(out, "{g}");
    }
    let _ = writeln!(out, "accept {}", m.accept);
    out
}

/// Parses `machine IN PATH WORK`, reversible gate lines, then `accept BIT`.
pub fn parse_machine(text: &str) -> Result<PredicateCircuit> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut gates = Vec::new();
    let mut accept: Option<usize> = None;
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        if !raw.is_ascii() {
            return Err(PostselError::syntax(line, "non-ASCII text"));
        }
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let (head, args) = (words[0], &words[1..]);
        match (head, header) {
            ("machine", None) => {
                if args.len() != 3 {
                    return Err(PostselError::syntax(line, "machine takes IN PATH WORK"));
                }
                let nums = args
                    .iter()
                    .map(|a| a.parse::<usize>().map_err(|_| PostselError::syntax(line, format!("bad count {a:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                header = Some((nums[0], nums[1], nums[2]));
            }
            ("machine", Some(_)) => return Err(PostselError::DuplicateDeclaration { line, what: "machine" }),
            (_, None) => return Err(PostselError::syntax(line, "expected the machine header first")),
            ("accept", Some((n, q, a))) => {
                if accept.is_some() {
                    return Err(PostselError::DuplicateDeclaration { line, what: "accept" });
                }
                if args.len() != 1 {
                    return Err(PostselError::syntax(line, "accept takes one bit index"));
                }
                let idx = args[0]
                    .parse::<usize>()
                    .map_err(|_| PostselError::syntax(line, format!("bad index {:?}", args[0])))?;
                if idx >= n + q + a {
                    return Err(PostselError::IndexOutOfRange {
                        line,
                        index: idx,
                        width: n + q + a,
                    });
                }
                accept = Some(idx);
            }
            (_, Some((n, q, a))) => {
                if accept.is_some() {
                    return Err(PostselError::syntax(line, "gates must precede the accept line"));
                }
                let g = parse_gate(head, args, line)?;
                g.check(n + q + a, line)?;
                if g.kind() == GateKind::H {
                    return Err(PostselError::syntax(line, "machines are classical; h is not allowed"));
                }
                if g.target() < n {
                    return Err(PostselError::syntax(line, format!("gate writes input bit {}", g.target())));
                }
                gates.push(g);
            }
        }
    }
    let (n, q, a) = header.ok_or_else(|| PostselError::syntax(last_line.max(1), "missing machine header"))?;
    let accept = accept.ok_or_else(|| PostselError::syntax(last_line.max(1), "missing accept line"))?;
    let m = PredicateCircuit {
        input_width: n,
        path_width: q,
        work: a,
        gates,
        accept,
    };
    m.validate(last_line)?;
    Ok(m)
}

/// A positive integer function of the input: the denominators of the
/// counting classes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FpFunction {
    /// Tabulated values with a bound `0 < f(w) <= 2^q`.
    Table { q: usize, values: BTreeMap<Bits, BigInt> },
    /// `f(w) = gap(M, 1^{|w|})`: depends on the input length only.
    GapOfLength(PredicateCircuit),
    /// `f(w) = gap(M, w)`.
    GapOfInput(PredicateCircuit),
}

impl FpFunction {
    pub fn table(q: usize, values: BTreeMap<Bits, BigInt>) -> Result<Self> {
        for (w, v) in &values {
            if !v.is_positive() || v > &(BigInt::one() << q) {
                return Err(PostselError::InvalidParameter(format!(
                    "f({w}) = {v} is outside (0, 2^{q}]"
                )));
            }
        }
        Ok(FpFunction::Table { q, values })
    }

    /// Parses fixture lines `w_bits value`; `-` stands for the empty input.
    pub fn parse_table(text: &str, q: usize) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let words: Vec<&str> = content.split_whitespace().collect();
            if words.len() != 2 {
                return Err(PostselError::syntax(line, "expected `w_bits value`"));
            }
            let w = if words[0] == "-" {
                Bits::new(Vec::new())
            } else {
                words[0]
                    .parse::<Bits>()
                    .map_err(|_| PostselError::syntax(line, format!("bad bit string {:?}", words[0])))?
            };
            let v = words[1]
                .parse::<BigInt>()
                .map_err(|_| PostselError::syntax(line, format!("bad value {:?}", words[1])))?;
            if values.insert(w, v).is_some() {
                return Err(PostselError::DuplicateDeclaration { line, what: "instance" });
            }
        }
        FpFunction::table(q, values)
    }

    pub fn eval(&self, w: &Bits) -> Result<BigInt> {
        let v = match self {
            FpFunction::Table { values, .. } => values
                .get(w)
                .cloned()
                .ok_or_else(|| PostselError::MissingReference(format!("no value for input {w}")))?,
            FpFunction::GapOfLength(m) => gap(m, &Bits::ones(w.len()))?.gap,
            FpFunction::GapOfInput(m) => gap(m, w)?.gap,
        };
        if !v.is_positive() {
            return Err(PostselError::InvalidParameter(format!("f({w}) = {v} is not positive")));
        }
        Ok(v)
    }

    /// Exponent `q` with `f(w) <= 2^q` everywhere.
    pub fn bound_exponent(&self) -> usize {
        match self {
            FpFunction::Table { q, .. } => *q,
            FpFunction::GapOfLength(m) | FpFunction::GapOfInput(m) => m.path_width,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(s: &str) -> Bits {
        if s.is_empty() {
            Bits::new(Vec::new())
        } else {
            s.parse().unwrap()
        }
    }

    fn gap_of(m: &PredicateCircuit, w: &str) -> i64 {
        gap(m, &bits(w)).unwrap().gap.to_i64().unwrap()
    }

    fn equality_machine() -> PredicateCircuit {
        let mut gates = Vec::new();
        for p in Bits::all(2) {
            let mut controls = Vec::new();
            for i in 0..2 {
                for q in [i, 2 + i] {
                    controls.push(if p.get(i) { Control::on(q) } else { Control::off(q) });
                }
            }
            gates.push(Gate::mcx(controls, 4));
        }
        PredicateCircuit::new(2, 2, 1, gates, 4).unwrap()
    }

    #[test]
    fn comparator_examples() {
        let m = make_gap_machine(2, 2).unwrap();
        assert!(eval_machine(&m, &bits(""), &bits("01")).unwrap());
        assert!(!eval_machine(&m, &bits(""), &bits("11")).unwrap());
        let g = gap(&m, &bits("")).unwrap();
        assert_eq!(g, GapValue::from_accepts(3, 2));
        assert_eq!(g.rejects, BigInt::from(1));
        assert_eq!(g.gap, BigInt::from(2));
    }

    #[test]
    fn equality_machine_reads_input() {
        let m = equality_machine();
        assert!(eval_machine(&m, &bits("10"), &bits("10")).unwrap());
        assert!(!eval_machine(&m, &bits("10"), &bits("11")).unwrap());
        assert_eq!(gap_of(&m, "10"), -2);
        assert_eq!(gap_of(&m.specialize(&bits("10")).unwrap(), ""), -2);
    }

    #[test]
    fn simple_gaps() {
        let all = PredicateCircuit::new(0, 2, 1, vec![Gate::x(2)], 2).unwrap();
        assert_eq!(gap_of(&all, ""), 4);
        let balanced = PredicateCircuit::new(0, 2, 1, vec![Gate::cx(Control::off(0), 2)], 2).unwrap();
        assert_eq!(gap_of(&balanced, ""), 0);
        assert_eq!(gap_of(&make_gap_machine(0, 1).unwrap(), ""), 0);
        let neg = make_gap_machine(-2, 2).unwrap();
        assert_eq!(gap(&neg, &bits("")).unwrap().accepts, BigInt::from(1));
        assert_eq!(gap_of(&neg, ""), -2);
    }

    #[test]
    fn make_gap_machine_round_trip() {
        for q in 0..=6usize {
            let total = 1i64 << q;
            for v in (-total..=total).step_by(2) {
                assert_eq!(gap_of(&make_gap_machine(v, q).unwrap(), ""), v, "v={v} q={q}");
            }
        }
        assert!(make_gap_machine(1, 2).is_err());
        assert!(make_gap_machine(6, 2).is_err());
    }

    #[test]
    fn scale_examples() {
        let m = make_gap_machine(2, 2).unwrap();
        assert_eq!(gap_of(&scale_gap(&m, &BigInt::from(3)).unwrap(), ""), 6);
        assert_eq!(scale_gap(&m, &BigInt::from(1)).unwrap(), m);
        let neg = make_gap_machine(-2, 2).unwrap();
        assert_eq!(gap_of(&scale_gap(&neg, &BigInt::from(2)).unwrap(), ""), -4);
        let unit = make_gap_machine(1, 0).unwrap();
        assert!(scale_gap(&unit, &BigInt::from(3)).is_err());
        assert_eq!(gap_of(&scale_gap(&unit, &BigInt::from(4)).unwrap(), ""), 4);
    }

    #[test]
    fn scaling_with_spare_bits() {
        let m = make_gap_machine(-2, 3).unwrap();
        for c in 1..=8i64 {
            for e in ceil_log2(&BigInt::from(c)) as usize..=4 {
                let s = scale_gap_with_bits(&m, &BigInt::from(c), e).unwrap();
                assert_eq!(s.path_width(), 3 + e);
                assert_eq!(gap_of(&s, ""), -2 * c);
            }
        }
    }

    #[test]
    fn table_machine_programs_each_input() {
        let values: BTreeMap<Bits, i64> = [("00", 2), ("01", -4), ("11", 0)]
            .iter()
            .map(|&(w, v)| (bits(w), v))
            .collect();
        let m = table_gap_machine(2, 2, &values).unwrap();
        assert_eq!(gap_of(&m, "00"), 2);
        assert_eq!(gap_of(&m, "01"), -4);
        assert_eq!(gap_of(&m, "10"), 0);
        assert_eq!(gap_of(&m, "11"), 0);
    }

    #[test]
    fn machine_text_round_trip() {
        let m = scale_gap(&equality_machine(), &BigInt::from(3)).unwrap();
        assert_eq!(parse_machine(&serialize_machine(&m)).unwrap(), m);
        let text = "# comment\nmachine 1 2 1\nccx !0 1 3\nmcx 1 !2 0 3\naccept 3\n";
        let parsed = parse_machine(text).unwrap();
        assert_eq!(parsed.gates().len(), 2);
    }

    #[test]
    fn machine_parse_errors() {
        let cases = [
            ("h 0\n", 1),
            ("machine 1 1 1\nh 1\naccept 2\n", 2),
            ("machine 1 1 1\nx 0\naccept 2\n", 2),
            ("machine 1 1 1\nx 2\naccept 9\n", 3),
            ("machine 1 1 1\nx 2\n", 2),
        ];
        for (text, line) in cases {
            match parse_machine(text).unwrap_err() {
                PostselError::Syntax { line: l, .. } | PostselError::IndexOutOfRange { line: l, .. } => {
                    assert_eq!(l, line, "{text:?}")
                }
                e => panic!("{text:?}: {e}"),
            }
        }
    }

    #[test]
    fn fp_table_fixture() {
        let f = FpFunction::parse_table("00 3\n01 4 # bound\n- 1\n", 2).unwrap();
        assert_eq!(f.eval(&bits("01")).unwrap(), BigInt::from(4));
        assert_eq!(f.eval(&bits("")).unwrap(), BigInt::from(1));
        assert!(f.eval(&bits("11")).is_err());
        assert!(FpFunction::parse_table("00 5\n", 2).is_err());
        assert!(FpFunction::parse_table("00 0\n", 2).is_err());
        let len = FpFunction::GapOfLength(make_gap_machine(2, 2).unwrap().widen_input(2));
        assert_eq!(len.eval(&bits("01")).unwrap(), BigInt::from(2));
    }

    fn arb_machine() -> impl Strategy<Value = PredicateCircuit> {
        (0usize..=2, 1usize..=4, 1usize..=2).prop_flat_map(|(n, q, work)| {
            let width = n + q + work;
            let gate = (n..width, proptest::collection::vec((0..width, any::<bool>()), 0..=3)).prop_map(
                |(t, cs)| {
                    let mut seen = vec![t];
                    let mut controls = Vec::new();
                    for (c, neg) in cs {
                        if !seen.contains(&c) {
                            seen.push(c);
                            controls.push(Control { qubit: c, negated: neg });
                        }
                    }
                    Gate::controlled_x(controls, t)
                },
            );
            (
                Just((n, q, work)),
                proptest::collection::vec(gate, 0..12),
                n + q..width,
                proptest::collection::vec(any::<bool>(), n),
            )
                .prop_map(|((n, q, work), gates, acc, w)| {
                    (PredicateCircuit::new(n, q, work, gates, acc).unwrap(), Bits::new(w))
                })
                .prop_map(|(m, _)| m)
        })
    }

    proptest! {
        #[test]
        fn counts_cover_all_paths(m in arb_machine()) {
            for w in Bits::all(m.input_width()) {
                let g = gap(&m, &w).unwrap();
                prop_assert_eq!(&g.accepts + &g.rejects, BigInt::one() << m.path_width());
                prop_assert_eq!(gap(&m.complement(), &w).unwrap().gap, -g.gap.clone());
                prop_assert_eq!(gap(&m.specialize(&w).unwrap(), &Bits::new(Vec::new())).unwrap().gap, g.gap.clone());
                prop_assert_eq!(gap(&m.pad_paths(2), &w).unwrap().gap, g.gap * 4);
            }
        }

        #[test]
        fn scaling_multiplies(m in arb_machine(), c in 1i64..=8) {
            let s = scale_gap(&m, &BigInt::from(c)).unwrap();
            for w in Bits::all(m.input_width()) {
                prop_assert_eq!(gap(&s, &w).unwrap().gap, gap(&m, &w).unwrap().gap * c);
            }
        }
    }
}
