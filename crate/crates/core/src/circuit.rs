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

//! Circuit IR over the gate set {H, X, CX, CCX} plus an MCX macro.
//!
//! Text format, one directive per line, `#` starts a comment:
//!
//! ```text
//! qubits N
//! ancilla Q V
//! h Q | x Q | cx C T | ccx C1 C2 T | mcx C1 ... Cn T
//! output Q
//! postselect Q
//! ```
//!
//! A control written `!C` fires when qubit `C` is 0. Postselection is always
//! on the postselect qubit reading 1.

use std::collections::HashSet;
use std::fmt::{self, Write as _};

use crate::error::{PostselError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Control {
    pub qubit: usize,
    pub negated: bool,
}

impl Control {
    /// Fires when the qubit is 1.
    pub fn on(qubit: usize) -> Self {
        Control {
            qubit,
            negated: false,
        }
    }

    /// Fires when the qubit is 0.
    pub fn off(qubit: usize) -> Self {
        Control {
            qubit,
            negated: true,
        }
    }

    #[inline]
    pub(crate) fn fires(&self, basis: u64) -> bool {
        ((basis >> self.qubit) & 1 == 1) != self.negated
    }
}

impl fmt::Display for Control {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            f.write_str("!")?;
        }
        write!(f, "{}", self.qubit)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    Cx,
    Ccx,
    Mcx,
}

impl GateKind {
    fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Cx => "cx",
            GateKind::Ccx => "ccx",
            GateKind::Mcx => "mcx",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gate {
    kind: GateKind,
    target: usize,
    controls: Vec<Control>,
}

impl Gate {
    pub fn h(target: usize) -> Self {
        Gate {
            kind: GateKind::H,
            target,
            controls: vec![],
        }
    }

    pub fn x(target: usize) -> Self {
        Gate {
            kind: GateKind::X,
            target,
            controls: vec![],
        }
    }

    pub fn cx(control: Control, target: usize) -> Self {
        Gate {
            kind: GateKind::Cx,
            target,
            controls: vec![control],
        }
    }

    pub fn ccx(c1: Control, c2: Control, target: usize) -> Self {
        Gate {
            kind: GateKind::Ccx,
            target,
            controls: vec![c1, c2],
        }
    }

    /// An MCX macro regardless of the number of controls.
    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Gate {
            kind: GateKind::Mcx,
            target,
            controls,
        }
    }

    /// The smallest gate that flips `target` when all controls fire.
    pub fn controlled_x(controls: Vec<Control>, target: usize) -> Self {
        match controls.len() {
            0 => Gate::x(target),
            1 => Gate::cx(controls[0], target),
            2 => Gate::ccx(controls[0], controls[1], target),
            _ => Gate::mcx(controls, target),
        }
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn controls(&self) -> &[Control] {
        &self.controls
    }

    pub fn is_classical(&self) -> bool {
        self.kind != GateKind::H
    }

    /// Every qubit the gate touches.
    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls
            .iter()
            .map(|c| c.qubit)
            .chain(std::iter::once(self.target))
    }

    /// Relabels every qubit through `f`.
    pub fn remap(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            target: f(self.target),
            controls: self
                .controls
                .iter()
                .map(|c| Control {
                    qubit: f(c.qubit),
                    negated: c.negated,
                })
                .collect(),
        }
    }

    /// Action of a classical gate on a packed basis state.
    ///
    /// # Panics
    /// On `H`, which has no classical action.
    #[inline]
    pub fn apply_classical(&self, basis: u64) -> u64 {
        assert!(self.kind != GateKind::H, "H is not a classical gate");
        if self.controls.iter().all(|c| c.fires(basis)) {
            basis ^ (1u64 << self.target)
        } else {
            basis
        }
    }

    pub(crate) fn check(&self, width: usize, line: usize) -> Result<()> {
        let arity_ok = match self.kind {
            GateKind::H | GateKind::X => self.controls.is_empty(),
            GateKind::Cx => self.controls.len() == 1,
            GateKind::Ccx => self.controls.len() == 2,
            GateKind::Mcx => !self.controls.is_empty(),
        };
        if !arity_ok {
            return Err(PostselError::syntax(
                line,
                format!("{} takes a different number of controls", self.kind.mnemonic()),
            ));
        }
        if self.kind == GateKind::H && self.controls.iter().any(|c| c.negated) {
            return Err(PostselError::syntax(line, "h takes no controls"));
        }
        let mut seen = HashSet::new();
        for q in self.qubits() {
            if q >= width {
                return Err(PostselError::IndexOutOfRange {
                    line,
                    index: q,
                    width,
                });
            }
            if !seen.insert(q) {
                return Err(PostselError::syntax(
                    line,
                    format!("qubit {q} used twice in one gate"),
                ));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for c in &self.controls {
            write!(f, " {c}")?;
        }
        write!(f, " {}", self.target)
    }
}

/// A work qubit that starts (and is expected to end) in a fixed value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ancilla {
    pub qubit: usize,
    pub value: bool,
}

/// One member of a circuit family, instantiated for a single input.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
    output: Option<usize>,
    postselect: Option<usize>,
    ancillas: Vec<Ancilla>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Circuit {
            width,
            ..Default::default()
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn output(&self) -> Option<usize> {
        self.output
    }

    pub fn postselect(&self) -> Option<usize> {
        self.postselect
    }

    pub fn ancillas(&self) -> &[Ancilla] {
        &self.ancillas
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.check(self.width, 0)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn set_output(&mut self, qubit: usize) -> Result<()> {
        self.check_role(qubit, self.postselect)?;
        self.output = Some(qubit);
        Ok(())
    }

    pub fn set_postselect(&mut self, qubit: usize) -> Result<()> {
        self.check_role(qubit, self.output)?;
        self.postselect = Some(qubit);
        Ok(())
    }

    pub fn declare_ancilla(&mut self, qubit: usize, value: bool) -> Result<()> {
        if qubit >= self.width {
            return Err(PostselError::IndexOutOfRange {
                line: 0,
                index: qubit,
                width: self.width,
            });
        }
        if self.ancillas.iter().any(|a| a.qubit == qubit) {
            return Err(PostselError::DuplicateDeclaration {
                line: 0,
                what: "ancilla",
            });
        }
        self.ancillas.push(Ancilla { qubit, value });
        Ok(())
    }

    fn check_role(&self, qubit: usize, other: Option<usize>) -> Result<()> {
        if qubit >= self.width {
            return Err(PostselError::IndexOutOfRange {
                line: 0,
                index: qubit,
                width: self.width,
            });
        }
        if other == Some(qubit) {
            return Err(PostselError::InvalidCircuit(
                "output and postselect qubits must differ".into(),
            ));
        }
        Ok(())
    }

    pub fn h_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind == GateKind::H).count()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn is_expanded(&self) -> bool {
        self.gates.iter().all(|g| g.kind != GateKind::Mcx)
    }

    /// Basis input matching the declared ancilla values, zero elsewhere.
    pub fn default_input(&self) -> crate::Bits {
        let mut bits = vec![false; self.width];
        for a in &self.ancillas {
            bits[a.qubit] = a.value;
        }
        crate::Bits::new(bits)
    }
}

/// Parses the line-based circuit format.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    let mut output_line = None;
    let mut postselect_line = None;

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if !content.is_ascii() {
            return Err(PostselError::syntax(line, "non-ASCII text"));
        }
        let mut words = content.split_whitespace();
        let directive = words.next().unwrap_or_default();
        let args: Vec<&str> = words.collect();

        if directive == "qubits" {
            if circuit.is_some() {
                return Err(PostselError::DuplicateDeclaration {
                    line,
                    what: "qubits",
                });
            }
            let [n] = args[..] else {
                return Err(PostselError::syntax(line, "qubits takes one argument"));
            };
            circuit = Some(Circuit::new(parse_index(n, line)?));
            continue;
        }

        let Some(c) = circuit.as_mut() else {
            if is_directive(directive) {
                return Err(PostselError::syntax(line, "qubits must be declared first"));
            }
            return Err(PostselError::syntax(line, format!("unknown directive {directive:?}")));
        };

        match directive {
            "h" | "x" | "cx" | "ccx" | "mcx" => {
                let gate = parse_gate(directive, &args, line)?;
                gate.check(c.width, line)?;
                c.gates.push(gate);
            }
            "output" | "postselect" => {
                let [q] = args[..] else {
                    return Err(PostselError::syntax(line, format!("{directive} takes one argument")));
                };
                let q = parse_index(q, line)?;
                if q >= c.width {
                    return Err(PostselError::IndexOutOfRange {
                        line,
                        index: q,
                        width: c.width,
                    });
                }
                let (slot, seen, what) = if directive == "output" {
                    (&mut c.output, &mut output_line, "output")
                } else {
                    (&mut c.postselect, &mut postselect_line, "postselect")
                };
                if seen.is_some() {
                    return Err(PostselError::DuplicateDeclaration { line, what });
                }
                *slot = Some(q);
                *seen = Some(line);
                if c.output.is_some() && c.output == c.postselect {
                    return Err(PostselError::syntax(
                        line,
                        "output and postselect qubits must differ",
                    ));
                }
            }
            "ancilla" => {
                let [q, v] = args[..] else {
                    return Err(PostselError::syntax(line, "ancilla takes a qubit and a value"));
                };
                let q = parse_index(q, line)?;
                let value = match v {
                    "0" => false,
                    "1" => true,
                    _ => return Err(PostselError::syntax(line, "ancilla value must be 0 or 1")),
                };
                if q >= c.width {
                    return Err(PostselError::IndexOutOfRange {
                        line,
                        index: q,
                        width: c.width,
                    });
                }
                if c.ancillas.iter().any(|a| a.qubit == q) {
                    return Err(PostselError::DuplicateDeclaration {
                        line,
                        what: "ancilla",
                    });
                }
                c.ancillas.push(Ancilla { qubit: q, value });
            }
            other => {
                return Err(PostselError::syntax(line, format!("unknown directive {other:?}")));
            }
        }
    }

    circuit.ok_or_else(|| PostselError::syntax(text.lines().count().max(1), "missing qubits declaration"))
}

fn is_directive(word: &str) -> bool {
    matches!(
        word,
        "h" | "x" | "cx" | "ccx" | "mcx" | "output" | "postselect" | "ancilla"
    )
}

fn parse_index(word: &str, line: usize) -> Result<usize> {
    word.parse()
        .map_err(|_| PostselError::syntax(line, format!("expected a qubit index, found {word:?}")))
}

fn parse_control(word: &str, line: usize) -> Result<Control> {
    match word.strip_prefix('!') {
        Some(rest) => Ok(Control::off(parse_index(rest, line)?)),
        None => Ok(Control::on(parse_index(word, line)?)),
    }
}

/// Parses one gate line's mnemonic and arguments. Shared with the machine format.
pub(crate) fn parse_gate(mnemonic: &str, args: &[&str], line: usize) -> Result<Gate> {
    let (kind, expected) = match mnemonic {
        "h" => (GateKind::H, Some(1)),
        "x" => (GateKind::X, Some(1)),
        "cx" => (GateKind::Cx, Some(2)),
        "ccx" => (GateKind::Ccx, Some(3)),
        "mcx" => (GateKind::Mcx, None),
        other => return Err(PostselError::syntax(line, format!("unknown gate {other:?}"))),
    };
    match expected {
        Some(n) if args.len() != n => {
            return Err(PostselError::syntax(
                line,
                format!("{mnemonic} takes {n} arguments, found {}", args.len()),
            ))
        }
        None if args.len() < 2 => {
            return Err(PostselError::syntax(line, "mcx needs at least one control and a target"))
        }
        _ => {}
    }
    let (target, controls) = args.split_last().expect("arity checked");
    if target.starts_with('!') {
        return Err(PostselError::syntax(line, "a target cannot be negated"));
    }
    let controls = controls
        .iter()
        .map(|w| parse_control(w, line))
        .collect::<Result<Vec<_>>>()?;
    Ok(Gate {
        kind,
        target: parse_index(target, line)?,
        controls,
    })
}

/// Writes the text form; `parse_circuit` inverts it exactly.
pub fn serialize_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.width);
    for a in &circuit.ancillas {
        let _ = writeln!(out, "ancilla {} {}", a.qubit, a.value as u8);
    }
    for g in &circuit.gates {
        let _ = writeln!(out, "{g}");
    }
    if let Some(o) = circuit.output {
        let _ = writeln!(out, "output {o}");
    }
    if let Some(p) = circuit.postselect {
        let _ = writeln!(out, "postselect {p}");
    }
    out
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_circuit(self))
    }
}

/// Rewrites every MCX macro (and every negated control) into {H, X, CX, CCX}.
///
/// An MCX with `n >= 3` controls becomes `4(n-2)` CCX gates that borrow
/// `n-2` qubits outside the gate. Borrowed qubits may hold any state; the
/// ladder toggles each of them an even number of times, so they come back
/// unchanged. Declared ancillas are borrowed first, then idle qubits.
pub fn expand_mcx(circuit: &Circuit) -> Result<Circuit> {
    let declared: Vec<usize> = circuit.ancillas.iter().map(|a| a.qubit).collect();
    let mut gates = Vec::with_capacity(circuit.gates.len());

    for (index, gate) in circuit.gates.iter().enumerate() {
        if gate.kind == GateKind::H {
            gates.push(gate.clone());
            continue;
        }
        let negated: Vec<usize> = gate
            .controls
            .iter()
            .filter(|c| c.negated)
            .map(|c| c.qubit)
            .collect();
        let controls: Vec<usize> = gate.controls.iter().map(|c| c.qubit).collect();
        gates.extend(negated.iter().map(|&q| Gate::x(q)));
        match controls.len() {
            0 => gates.push(Gate::x(gate.target)),
            1 => gates.push(Gate::cx(Control::on(controls[0]), gate.target)),
            2 => gates.push(Gate::ccx(
                Control::on(controls[0]),
                Control::on(controls[1]),
                gate.target,
            )),
            n => {
                let busy: HashSet<usize> = gate.qubits().collect();
                let borrowed: Vec<usize> = declared
                    .iter()
                    .copied()
                    .chain((0..circuit.width).filter(|q| !declared.contains(q)))
                    .filter(|q| !busy.contains(q))
                    .take(n - 2)
                    .collect();
                if borrowed.len() < n - 2 {
                    return Err(PostselError::InsufficientAncillas {
                        gate: index,
                        needed: n - 2,
                        available: borrowed.len(),
                    });
                }
                borrowed_ladder(&controls, &borrowed, gate.target, &mut gates);
            }
        }
        gates.extend(negated.iter().map(|&q| Gate::x(q)));
    }

    Ok(Circuit {
        width: circuit.width,
        gates,
        output: circuit.output,
        postselect: circuit.postselect,
        ancillas: circuit.ancillas.clone(),
    })
}

/// Toffoli ladder for `n >= 3` positive controls with `n-2` borrowed qubits.
fn borrowed_ladder(c: &[usize], a: &[usize], target: usize, out: &mut Vec<Gate>) {
    let n = c.len();
    let t = |x: usize, y: usize, z: usize| Gate::ccx(Control::on(x), Control::on(y), z);
    let descend = |out: &mut Vec<Gate>| {
        for i in (2..=n - 2).rev() {
            out.push(t(c[i], a[i - 2], a[i - 1]));
        }
    };
    let ascend = |out: &mut Vec<Gate>| {
        for i in 2..=n - 2 {
            out.push(t(c[i], a[i - 2], a[i - 1]));
        }
    };

    out.push(t(c[n - 1], a[n - 3], target));
    descend(out);
    out.push(t(c[0], c[1], a[0]));
    ascend(out);
    out.push(t(c[n - 1], a[n - 3], target));

    descend(out);
    out.push(t(c[0], c[1], a[0]));
    ascend(out);
}

/// Minimum width an MCX with `n` controls needs for expansion.
pub fn mcx_expansion_width(n: usize) -> usize {
    if n < 3 {
        n + 1
    } else {
        2 * n - 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let c = parse_circuit("qubits 1\nh 0\noutput 0").unwrap();
        assert_eq!(c.width(), 1);
        assert_eq!(c.gates(), &[Gate::h(0)]);
        assert_eq!(c.output(), Some(0));

        let c = parse_circuit("qubits 3\nccx 0 1 2\noutput 2").unwrap();
        assert_eq!(c.gates(), &[Gate::ccx(Control::on(0), Control::on(1), 2)]);

        match parse_circuit("qubits 1\nfoo 0") {
            Err(PostselError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a syntax error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            parse_circuit("qubits 2\nh 2"),
            Err(PostselError::IndexOutOfRange { line: 2, index: 2, width: 2 })
        ));
        assert!(matches!(
            parse_circuit("qubits 2\noutput 0\noutput 1"),
            Err(PostselError::DuplicateDeclaration { line: 3, what: "output" })
        ));
        assert!(matches!(
            parse_circuit("qubits 2\npostselect 0\npostselect 0"),
            Err(PostselError::DuplicateDeclaration { line: 3, what: "postselect" })
        ));
        assert!(matches!(parse_circuit("h 0"), Err(PostselError::Syntax { line: 1, .. })));
        assert!(matches!(parse_circuit("qubits 2\ncx 0 0"), Err(PostselError::Syntax { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 2\ncx 0"), Err(PostselError::Syntax { line: 2, .. })));
        assert!(matches!(parse_circuit("qubits 2\ncx 0 !1"), Err(PostselError::Syntax { .. })));
        assert!(matches!(
            parse_circuit("qubits 2\noutput 1\npostselect 1"),
            Err(PostselError::Syntax { line: 3, .. })
        ));
    }

    #[test]
    fn comments_and_negated_controls() {
        let text = "# header\nqubits 4 # width\nancilla 3 0\nmcx !0 1 !2 3\noutput 3\n";
        let c = parse_circuit(text).unwrap();
        assert_eq!(
            c.gates()[0].controls(),
            &[Control::off(0), Control::on(1), Control::off(2)]
        );
        let text = serialize_circuit(&c);
        assert!(text.contains("mcx !0 1 !2 3"));
        assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn round_trip_h_example() {
        let text = "qubits 1\nh 0\noutput 0\n";
        assert_eq!(serialize_circuit(&parse_circuit(text).unwrap()), text);
    }

    #[test]
    fn two_control_mcx_is_one_ccx() {
        let mut c = Circuit::new(3);
        c.push(Gate::mcx(vec![Control::on(0), Control::on(1)], 2)).unwrap();
        let e = expand_mcx(&c).unwrap();
        assert_eq!(e.gates(), &[Gate::ccx(Control::on(0), Control::on(1), 2)]);
    }

    #[test]
    fn three_control_mcx_uses_four_toffolis() {
        let mut c = Circuit::new(5);
        c.declare_ancilla(4, false).unwrap();
        c.push(Gate::mcx(vec![Control::on(0), Control::on(1), Control::on(2)], 3))
            .unwrap();
        let e = expand_mcx(&c).unwrap();
        assert_eq!(e.count(GateKind::Ccx), 4);
        assert_eq!(e.gates().len(), 4);
        assert!(e.gates().iter().all(|g| g.qubits().all(|q| q < 5)));
    }

    #[test]
    fn insufficient_ancillas() {
        let mut c = Circuit::new(4);
        c.push(Gate::mcx(vec![Control::on(0), Control::on(1), Control::on(2)], 3))
            .unwrap();
        assert!(matches!(
            expand_mcx(&c),
            Err(PostselError::InsufficientAncillas { needed: 1, available: 0, .. })
        ));
    }

    /// Exhaustive classical check: each expansion acts as MCX on every basis
    /// state, including arbitrary values on the borrowed qubits.
    #[test]
    fn expansion_matches_macro_on_all_basis_states() {
        for n in 1..=5usize {
            for neg_mask in 0..1u32 << n {
                let width = mcx_expansion_width(n).max(n + 1);
                let controls: Vec<Control> = (0..n)
                    .map(|i| Control {
                        qubit: i,
                        negated: neg_mask >> i & 1 == 1,
                    })
                    .collect();
                let gate = Gate::mcx(controls, n);
                let mut c = Circuit::new(width);
                c.push(gate.clone()).unwrap();
                let e = expand_mcx(&c).unwrap();
                assert!(e.is_expanded());
                assert!(e.gates().iter().all(|g| g.controls().iter().all(|c| !c.negated)));
                for basis in 0..1u64 << width {
                    let got = e.gates().iter().fold(basis, |s, g| g.apply_classical(s));
                    assert_eq!(got, gate.apply_classical(basis), "n={n} neg={neg_mask:b} basis={basis:b}");
                }
            }
        }
    }
}
