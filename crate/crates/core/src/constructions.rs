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


//! Circuit constructions: gap squaring, pair postselection and the gadgets
//! that adjust postselection probabilities.
//!
//! Every compiler returns a circuit that may still contain MCX macros; each
//! macro has enough qubits outside it to borrow, so `expand_mcx` always
//! succeeds. Machines are specialized to the given input first, so input
//! bits never occupy qubits.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bits::Bits;
use crate::circuit::{Circuit, Control, Gate, GateKind};
use crate::counting::{gap, less_than, scale_gap_with_bits, FpFunction, PredicateCircuit};
use crate::error::{PostselError, Result};
use crate::report::{Condition, Relation, WitnessReport};
use crate::ring::{ceil_log2, floor_log2, rational, rational_pow2_neg, DyadicRational};
use crate::sim::{prepared, run, PostselStats};

/// Appends gates over freshly allocated qubits.
#[derive(Clone, Debug, Default)]
pub struct CircuitBuilder {
    width: usize,
    gates: Vec<Gate>,
    ones: Vec<usize>,
}

impl CircuitBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn qubit(&mut self) -> usize {
        self.width += 1;
        self.width - 1
    }

    pub fn register(&mut self, n: usize) -> Vec<usize> {
        (0..n).map(|_| self.qubit()).collect()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) {
        self.gates.extend(gates);
    }

    pub fn h(&mut self, qubits: &[usize]) {
        self.gates.extend(qubits.iter().map(|&q| Gate::h(q)));
    }

    /// `Z = H X H`.
    pub fn z(&mut self, qubit: usize) {
        self.gates.extend([Gate::h(qubit), Gate::x(qubit), Gate::h(qubit)]);
    }

    /// Copies a circuit, run on its default input, onto fresh qubits.
    /// Qubits that no gate or role touches and that start at 0 are dropped
    /// (they map to `usize::MAX`); ancillas starting at 1 stay declared.
    pub fn embed(&mut self, circuit: &Circuit) -> Vec<usize> {
        let mut used = vec![false; circuit.width()];
        let ones: Vec<usize> = circuit.ancillas().iter().filter(|a| a.value).map(|a| a.qubit).collect();
        let roles = circuit.output().into_iter().chain(circuit.postselect());
        for q in circuit.gates().iter().flat_map(|g| g.qubits()).chain(roles).chain(ones.iter().copied()) {
            used[q] = true;
        }
        let map: Vec<usize> = used.iter().map(|&u| if u { self.qubit() } else { usize::MAX }).collect();
        self.ones.extend(ones.iter().map(|&q| map[q]));
        self.gates.extend(circuit.gates().iter().map(|g| g.remap(|q| map[q])));
        map
    }

    /// Swaps `a` and `b` when every control fires.
    pub fn controlled_swap(&mut self, controls: &[Control], a: usize, b: usize) {
        let mut inner = controls.to_vec();
        inner.push(Control::on(a));
        self.push(Gate::cx(Control::on(b), a));
        self.push(Gate::controlled_x(inner, b));
        self.push(Gate::cx(Control::on(b), a));
    }

    /// Adds idle qubits until every MCX macro can borrow `n - 2` qubits.
    pub fn finish(mut self, output: Option<usize>, postselect: Option<usize>) -> Result<Circuit> {
        let mut needed = self.width;
        for g in self.gates.iter().filter(|g| g.kind() == GateKind::Mcx) {
            let n = g.controls().len();
            if n >= 3 {
                needed = needed.max(2 * n - 1);
            }
        }
        self.width = needed;
        let mut c = Circuit::new(self.width);
        for g in self.gates {
            c.push(g)?;
        }
        if let Some(o) = output {
            c.set_output(o)?;
        }
        if let Some(p) = postselect {
            c.set_postselect(p)?;
        }
        for q in self.ones {
            c.declare_ancilla(q, true)?;
        }
        Ok(c)
    }
}

/// Concrete stand-ins for the polynomial parameters of the constructions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConstructionParams {
    pub k: usize,
    pub r: usize,
    pub r1: usize,
    pub r2: usize,
    pub t: usize,
    pub h: usize,
    pub q: usize,
    pub s: usize,
}

impl ConstructionParams {
    /// Checks `r >= max(r1 + 2, r2 + 2)` and `r >= 2`.
    pub fn check_pair_error(&self) -> Result<()> {
        if self.r < 2 || self.r < self.r1 + 2 || self.r < self.r2 + 2 {
            return Err(PostselError::InvalidParameter(format!(
                "r = {} must be at least max(2, r1 + 2, r2 + 2) = {}",
                self.r,
                2.max(self.r1 + 2).max(self.r2 + 2)
            )));
        }
        Ok(())
    }
}

/// Smallest `k` with `s <= 2^(2q + 2k)`.
pub fn choose_k(s: &BigInt, q: usize) -> usize {
    if !s.is_positive() {
        return 0;
    }
    let bits = ceil_log2(s) as usize;
    bits.saturating_sub(2 * q).div_ceil(2)
}

/// Gates of a specialized machine with path bits on `xs` and work bits on
/// `work`, and the qubit holding its accept bit.
fn machine_gates(m: &PredicateCircuit, xs: &[usize], work: &[usize]) -> (Vec<Gate>, usize) {
    assert_eq!(m.input_width(), 0, "machine must be specialized first");
    assert!(xs.len() == m.path_width() && work.len() >= m.work_width());
    let map = |i: usize| if i < xs.len() { xs[i] } else { work[i - xs.len()] };
    let gates = m.gates().iter().map(|g| g.remap(map)).collect();
    (gates, map(m.accept()))
}

fn all_zero(qubits: &[usize]) -> Vec<Control> {
    qubits.iter().map(|&q| Control::off(q)).collect()
}

/// Appends `H^q`, the phase `(-1)^acc(x)`, `H^q` and the all-zero test into
/// `o`, so `P(o=1) = G^2 / 2^(2q)`.
fn gap_squared_into(b: &mut CircuitBuilder, m: &PredicateCircuit, xs: &[usize], work: &[usize], o: usize) {
    let (compute, acc) = machine_gates(m, xs, work);
    b.h(xs);
    b.extend(compute.iter().cloned());
    b.z(acc);
    b.extend(compute.into_iter().rev());
    b.h(xs);
    b.push(Gate::controlled_x(all_zero(xs), o));
}

/// A circuit without postselection whose output has probability
/// `gap(M, w)^2 / 2^(2q)`.
pub fn compile_gap_squared(m: &PredicateCircuit, w: &Bits) -> Result<Circuit> {
    let s = m.specialize(w)?;
    let mut b = CircuitBuilder::new();
    let xs = b.register(s.path_width());
    let work = b.register(s.work_width());
    let o = b.qubit();
    gap_squared_into(&mut b, &s, &xs, &work, o);
    b.finish(Some(o), None)
}

/// How the two machines of a pair are cross-multiplied by denominators
/// before compilation: `M1` by `f2(w)` and `M2` by `f1(w)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScaleMode {
    None,
    FpOfInput(FpFunction, FpFunction),
    /// Both functions must be [`FpFunction::GapOfLength`].
    GapOfLength(FpFunction, FpFunction),
}

/// Specialized, cross-scaled machines of a pair construction.
pub fn scaled_pair(
    m1: &PredicateCircuit,
    m2: &PredicateCircuit,
    w: &Bits,
    scale: &ScaleMode,
) -> Result<(PredicateCircuit, PredicateCircuit)> {
    let s1 = m1.specialize(w)?;
    let s2 = m2.specialize(w)?;
    let (f1, f2) = match scale {
        ScaleMode::None => return Ok((s1, s2)),
        ScaleMode::FpOfInput(f1, f2) => (f1, f2),
        ScaleMode::GapOfLength(f1, f2) => {
            for f in [f1, f2] {
                if !matches!(f, FpFunction::GapOfLength(_)) {
                    return Err(PostselError::InvalidParameter(
                        "length-only scaling needs gap-of-length denominators".into(),
                    ));
                }
            }
            (f1, f2)
        }
    };
    let (v1, v2) = (f1.eval(w)?, f2.eval(w)?);
    let e = ceil_log2(&v1).max(ceil_log2(&v2)) as usize;
    Ok((scale_gap_with_bits(&s1, &v2, e)?, scale_gap_with_bits(&s2, &v1, e)?))
}

/// The pair-postselection circuit: with `G_i` the gaps of the (scaled)
/// machines, `P(p=1) = (G1^2 + G2^2) / 2^(2q+2+2k)` and
/// `P(o=1|p=1) = G1^2 / (G1^2 + G2^2)`.
///
/// Registers are `[pad 2k][x q][a][o]`. `o` selects the machine whose
/// accept bit is XORed into `a`; a `Z` on `a` turns it into a phase, and
/// projecting pad, `x` and `a` onto `|+>` is an `H` layer followed by an
/// all-zero test into `p`.
pub fn compile_pair_postsel(
    m1: &PredicateCircuit,
    m2: &PredicateCircuit,
    w: &Bits,
    k: usize,
    scale: &ScaleMode,
) -> Result<Circuit> {
    let (s1, s2) = scaled_pair(m1, m2, w, scale)?;
    if s1.path_width() != s2.path_width() {
        return Err(PostselError::InvalidParameter(format!(
            "machines have path widths {} and {}",
            s1.path_width(),
            s2.path_width()
        )));
    }
    let empty = Bits::new(Vec::new());
    if gap(&s1, &empty)?.gap.is_zero() && gap(&s2, &empty)?.gap.is_zero() {
        return Err(PostselError::ZeroPostselection);
    }
    let q = s1.path_width();
    let mut b = CircuitBuilder::new();
    let pad = b.register(2 * k);
    let xs = b.register(q);
    let work = b.register(s1.work_width().max(s2.work_width()));
    let a = b.qubit();
    let o = b.qubit();
    let p = b.qubit();
    b.h(&xs);
    b.h(&[o]);
    for (m, branch) in [(&s1, Control::on(o)), (&s2, Control::off(o))] {
        let (compute, acc) = machine_gates(m, &xs, &work);
        b.extend(compute.iter().cloned());
        b.push(Gate::ccx(branch, Control::on(acc), a));
        b.extend(compute.into_iter().rev());
    }
    b.z(a);
    let projected: Vec<usize> = pad.iter().chain(&xs).copied().chain([a]).collect();
    b.h(&projected);
    b.push(Gate::controlled_x(all_zero(&projected), p));
    b.finish(Some(o), Some(p))
}

/// Exact-weight pair construction: no padding register.
pub fn compile_wpp(m1: &PredicateCircuit, m2: &PredicateCircuit, w: &Bits, scale: &ScaleMode) -> Result<Circuit> {
    compile_pair_postsel(m1, m2, w, 0, scale)
}

/// Pair construction with denominators that depend on the input length only.
pub fn compile_app(
    m1: &PredicateCircuit,
    m2: &PredicateCircuit,
    f1: &PredicateCircuit,
    f2: &PredicateCircuit,
    w: &Bits,
    k: usize,
) -> Result<Circuit> {
    let scale = ScaleMode::GapOfLength(FpFunction::GapOfLength(f1.clone()), FpFunction::GapOfLength(f2.clone()));
    compile_pair_postsel(m1, m2, w, k, &scale)
}

/// Appends `H` on `coins` and a comparator so `flag` is 1 with probability
/// `a / 2^|coins|`.
fn biased_flag_into(b: &mut CircuitBuilder, coins: &[usize], a: u64, flag: usize) {
    b.h(coins);
    b.extend(less_than(coins, a, flag, &[]));
}

/// A fragment on `m` coin qubits and one flag qubit (the output) that sets
/// the flag with probability exactly `a / 2^m`.
pub fn gadget_biased_flag(a: u64, m: usize) -> Result<Circuit> {
    if m >= 63 || a > 1u64 << m {
        return Err(PostselError::InvalidParameter(format!("{a} is outside [0, 2^{m}]")));
    }
    let mut b = CircuitBuilder::new();
    let coins = b.register(m);
    let flag = b.qubit();
    biased_flag_into(&mut b, &coins, a, flag);
    b.finish(Some(flag), None)
}

/// Multiplies `P(p=1)` by `2^-t` and keeps the conditional: the new
/// postselect qubit is the AND of `t` fresh coins and the old one.
pub fn rescale_postsel(c: &Circuit, t: usize) -> Result<Circuit> {
    let old_p = c.postselect().ok_or(PostselError::MissingRole("postselect"))?;
    if t == 0 {
        return Ok(c.clone());
    }
    let mut b = CircuitBuilder::new();
    let map = b.embed(c);
    let coins = b.register(t);
    let p = b.qubit();
    b.h(&coins);
    let mut controls: Vec<Control> = coins.iter().map(|&q| Control::on(q)).collect();
    controls.push(Control::on(map[old_p]));
    b.push(Gate::controlled_x(controls, p));
    b.finish(c.output().map(|o| map[o]), Some(p))
}

/// A circuit on `h` coins with `P(p=1) = post / 2^h` and
/// `P(o=1, p=1) = joint / 2^h`: `p = [x < post]`, `o = [x < joint]`.
pub fn programmed_postsel(h: usize, post: u64, joint: u64) -> Result<Circuit> {
    if h >= 62 || joint > post || post > 1u64 << h {
        return Err(PostselError::InvalidParameter(format!(
            "need joint <= post <= 2^h, got {joint}, {post}, h = {h}"
        )));
    }
    let mut b = CircuitBuilder::new();
    let coins = b.register(h);
    let o = b.qubit();
    let p = b.qubit();
    b.h(&coins);
    b.extend(less_than(&coins, post, p, &[]));
    b.extend(less_than(&coins, joint, o, &[]));
    b.finish(Some(o), Some(p))
}

fn exact_stats(c: &Circuit) -> Result<PostselStats> {
    let o = c.output().ok_or(PostselError::MissingRole("output"))?;
    let p = c.postselect().ok_or(PostselError::MissingRole("postselect"))?;
    let state = run(&*prepared(c)?, &c.default_input())?;
    let p_post = state.joint_prob(&[(p, true)]);
    let p_joint = state.joint_prob(&[(o, true), (p, true)]);
    if p_post.is_zero() {
        return Ok(PostselStats {
            p_post,
            p_joint,
            p_cond: BigRational::zero(),
        });
    }
    PostselStats::from_probabilities(p_post, p_joint)
}

fn check_mix_parameters(f: &BigInt, h: usize) -> Result<u64> {
    if h >= 62 || !f.is_positive() || f > &(BigInt::one() << h) {
        return Err(PostselError::InvalidParameter(format!("f = {f} is outside (0, 2^{h}]")));
    }
    Ok(f.to_u64().expect("bounded by 2^h"))
}

/// Flips a coin: on heads the output and postselect bits are `V`'s; on tails
/// `o` is a fair coin and `p` is 1 with probability `(2^(t+1) - f) / 2^h`,
/// where `2^t <= f < 2^(t+1)`. Requires `P_V(p=1) = f / 2^h`, checked by
/// simulation; the result has `P(p=1) = 2^t / 2^h`.
///
/// Both branches run unconditionally on disjoint qubits and a swap
/// controlled by the coin moves the tails bits into `V`'s roles.
pub fn mix_with_constant(v: &Circuit, f: &BigInt, h: usize) -> Result<Circuit> {
    let fv = check_mix_parameters(f, h)?;
    let o_v = v.output().ok_or(PostselError::MissingRole("output"))?;
    let p_v = v.postselect().ok_or(PostselError::MissingRole("postselect"))?;
    let stats = exact_stats(v)?;
    let expected = DyadicRational::new(f.clone(), h as u32);
    if stats.p_post != expected {
        return Err(PostselError::PreconditionFailed(format!(
            "P(p=1) is {}, not f/2^h = {}",
            stats.p_post, expected
        )));
    }
    let t = floor_log2(f);
    let a = (1u64 << (t + 1)) - fv;
    let mut b = CircuitBuilder::new();
    let map = b.embed(v);
    let coin = b.qubit();
    let o_t = b.qubit();
    let coins = b.register(h);
    let p_t = b.qubit();
    b.h(&[coin, o_t]);
    biased_flag_into(&mut b, &coins, a, p_t);
    let tails = [Control::off(coin)];
    b.controlled_swap(&tails, map[o_v], o_t);
    b.controlled_swap(&tails, map[p_v], p_t);
    b.finish(Some(map[o_v]), Some(map[p_v]))
}

/// The conditional after mixing: `(f / 2^(t+1)) c + (1/2)(2^(t+1) - f) / 2^(t+1)`.
pub fn mixed_conditional(inner: &BigRational, f: &BigInt) -> BigRational {
    let top = BigInt::one() << (floor_log2(f) + 1) as usize;
    let alpha = BigRational::new(f.clone(), top.clone());
    let tails = BigRational::new(&top - f, top) * rational(1, 2);
    alpha * inner + tails
}

/// Mixing followed by rescaling by `2^-t`: `P(p=1) = 2^-h` whatever `f` is.
pub fn compile_fqp_to_exp(v: &Circuit, f: &BigInt, h: usize) -> Result<Circuit> {
    let w = mix_with_constant(v, f, h)?;
    rescale_postsel(&w, floor_log2(f) as usize)
}

/// Postselection on a ratio witness `(g, f)` with `g/f` near 1 on members and near 0 elsewhere.
///
/// `V'` and `W'` square the gaps of `Mg` and `Mf`; `V` ANDs `V'`'s output
/// with `2q_f` coins and `W` ANDs `W'`'s with `2q_g` coins, so both carry
/// `2^-(2q_g + 2q_f)`. Two coins choose `W` (both heads) or `V`: from `W`,
/// `p = o_W` and `o = 0`; from `V`, `p = o = o_V`.
pub fn compile_pp_instance(mg: &PredicateCircuit, mf: &PredicateCircuit, w: &Bits) -> Result<Circuit> {
    let sg = mg.specialize(w)?;
    let sf = mf.specialize(w)?;
    let empty = Bits::new(Vec::new());
    let gg = gap(&sg, &empty)?.gap;
    let gf = gap(&sf, &empty)?.gap;
    if gf.is_zero() {
        if gg.is_zero() {
            return Err(PostselError::ZeroPostselection);
        }
        return Err(PostselError::PreconditionFailed("the denominator machine has gap 0".into()));
    }
    let (qv, qw) = (2 * sg.path_width(), 2 * sf.path_width());
    let mut b = CircuitBuilder::new();
    let xg = b.register(sg.path_width());
    let xf = b.register(sf.path_width());
    let work = b.register(sg.work_width().max(sf.work_width()));
    let o_v1 = b.qubit();
    let o_w1 = b.qubit();
    // The two branches never both matter, so they share their coins.
    let coins = b.register(qv.max(qw));
    let o_v = b.qubit();
    let o_w = b.qubit();
    let (c1, c2) = (b.qubit(), b.qubit());
    let o = b.qubit();
    let p = b.qubit();
    gap_squared_into(&mut b, &sg, &xg, &work, o_v1);
    gap_squared_into(&mut b, &sf, &xf, &work, o_w1);
    b.h(&coins);
    let and_into = |b: &mut CircuitBuilder, src: usize, n: usize, dst: usize| {
        let mut controls: Vec<Control> = coins[..n].iter().map(|&q| Control::on(q)).collect();
        controls.push(Control::on(src));
        b.push(Gate::controlled_x(controls, dst));
    };
    and_into(&mut b, o_v1, qw, o_v);
    and_into(&mut b, o_w1, qv, o_w);
    b.h(&[c1, c2]);
    b.push(Gate::controlled_x(vec![Control::on(c1), Control::on(c2), Control::on(o_w)], p));
    for branch in [vec![Control::off(c1)], vec![Control::on(c1), Control::off(c2)]] {
        let mut controls = branch.clone();
        controls.push(Control::on(o_v));
        b.push(Gate::controlled_x(controls.clone(), p));
        b.push(Gate::controlled_x(controls, o));
    }
    b.finish(Some(o), Some(p))
}

/// The in-language lower bound `1/2 + 1/22 - (12/11) 2^-r`.
pub fn pp_in_bound(r: u32) -> BigRational {
    rational(1, 2) + rational(1, 22) - rational(12, 11) * rational_pow2_neg(r)
}

/// The out-of-language upper bound `3 * 2^-2r`.
pub fn pp_out_bound(r: u32) -> BigRational {
    rational(3, 1) * rational_pow2_neg(2 * r)
}

/// The inequalities the pair construction's error analysis rests on,
/// checked exactly for one `r >= 2`.
pub fn verify_error_algebra(r: u32) -> Result<WitnessReport> {
    if r < 2 {
        return Err(PostselError::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    let one = BigRational::one();
    let e = |k: u32| rational_pow2_neg(k);
    let e_r1 = e(r - 1);
    let e_r2 = e(r - 2);
    let instance = format!("r={r}");
    let mut report = WitnessReport::new();
    let mut add = |name: &str, lhs: BigRational, rel: Relation, rhs: BigRational| {
        report.push(Condition::new("algebra", instance.clone(), name, lhs, rel, rhs));
    };
    add(
        "inverse-upper",
        one.clone() / (&one - &e_r1),
        Relation::Le,
        &one + &e_r2,
    );
    add(
        "inverse-lower",
        one.clone() / (&one + &e_r1) - (&one - &e_r2),
        Relation::Ge,
        BigRational::zero(),
    );
    let sq = (&one - e(r)) * (&one - e(r));
    add("square-lower", sq, Relation::Ge, &one - &e_r1);
    add("square-upper", &one + e(2 * r), Relation::Le, &one + &e_r1);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::parse_circuit;
    use crate::counting::make_gap_machine;
    use crate::pathsum::path_sum;
    use crate::sim::{output_prob, postselect_stats};

    fn none() -> Bits {
        Bits::new(Vec::new())
    }

    fn d(n: i64, k: u32) -> DyadicRational {
        DyadicRational::new(n, k)
    }

    #[test]
    fn gap_squared_examples() {
        let cases = [(2, 2, d(1, 2)), (4, 2, d(1, 0)), (0, 2, d(0, 0)), (-2, 3, d(1, 4))];
        for (v, q, want) in cases {
            let c = compile_gap_squared(&make_gap_machine(v, q).unwrap(), &none()).unwrap();
            assert_eq!(output_prob(&c, &c.default_input()).unwrap(), want, "v={v} q={q}");
            let (g, m) = path_sum(&c, &c.default_input(), &[(c.output().unwrap(), true)]).unwrap();
            assert_eq!(DyadicRational::new(g, m), want);
        }
    }

    #[test]
    fn pair_examples() {
        let m = |v| make_gap_machine(v, 2).unwrap();
        let c = compile_pair_postsel(&m(2), &m(-2), &none(), 0, &ScaleMode::None).unwrap();
        let st = postselect_stats(&c, &c.default_input()).unwrap();
        assert_eq!(st.p_post, d(1, 3));
        assert_eq!(st.p_cond, rational(1, 2));
        for (k, want) in [(0, d(1, 2)), (1, d(1, 4))] {
            let c = compile_pair_postsel(&m(4), &m(0), &none(), k, &ScaleMode::None).unwrap();
            let st = postselect_stats(&c, &c.default_input()).unwrap();
            assert_eq!(st.p_post, want);
            assert_eq!(st.p_cond, rational(1, 1));
        }
        assert_eq!(
            compile_pair_postsel(&m(0), &m(0), &none(), 0, &ScaleMode::None).unwrap_err(),
            PostselError::ZeroPostselection
        );
    }

    #[test]
    fn cross_scaling_uses_the_other_denominator() {
        let f1 = FpFunction::table(3, [(none(), BigInt::from(6))].into_iter().collect()).unwrap();
        let f2 = FpFunction::table(3, [(none(), BigInt::from(3))].into_iter().collect()).unwrap();
        let m1 = make_gap_machine(4, 3).unwrap();
        let m2 = make_gap_machine(2, 3).unwrap();
        let scale = ScaleMode::FpOfInput(f1, f2);
        let (s1, s2) = scaled_pair(&m1, &m2, &none(), &scale).unwrap();
        assert_eq!(gap(&s1, &none()).unwrap().gap, BigInt::from(12));
        assert_eq!(gap(&s2, &none()).unwrap().gap, BigInt::from(12));
        let c = compile_pair_postsel(&m1, &m2, &none(), 0, &scale).unwrap();
        let st = postselect_stats(&c, &c.default_input()).unwrap();
        assert_eq!(st.p_cond, rational(1, 2));
        // q = 3 + 3 extra bits: (144 + 144) / 2^14
        assert_eq!(st.p_post, d(288, 14));
    }

    #[test]
    fn biased_flag_examples() {
        for (a, m, want) in [(3, 2, d(3, 2)), (0, 2, d(0, 0)), (4, 2, d(1, 0)), (5, 3, d(5, 3))] {
            let c = gadget_biased_flag(a, m).unwrap();
            assert_eq!(output_prob(&c, &c.default_input()).unwrap(), want);
        }
        assert!(gadget_biased_flag(5, 2).is_err());
    }

    #[test]
    fn rescale_examples() {
        let c = programmed_postsel(2, 1, 1).unwrap();
        let before = postselect_stats(&c, &c.default_input()).unwrap();
        assert_eq!(before.p_post, d(1, 2));
        let r = rescale_postsel(&c, 1).unwrap();
        let after = postselect_stats(&r, &r.default_input()).unwrap();
        assert_eq!(after.p_post, d(1, 3));
        assert_eq!(after.p_cond, before.p_cond);
        assert_eq!(rescale_postsel(&c, 0).unwrap(), c);
    }

    #[test]
    fn embedding_keeps_ancillas_and_drops_idle_qubits() {
        // p starts at 1 through an ancilla; qubit 3 is never touched.
        let c = parse_circuit("qubits 4\nancilla 2 1\nh 0\ncx 0 1\noutput 1\npostselect 2\n").unwrap();
        let r = rescale_postsel(&c, 2).unwrap();
        assert_eq!(r.width(), 3 + 2 + 1);
        let stats = postselect_stats(&r, &r.default_input()).unwrap();
        assert_eq!(stats.p_post, d(1, 2));
        assert_eq!(stats.p_cond, rational(1, 2));
    }

    #[test]
    fn mix_examples() {
        for (f, h, want) in [(3u64, 3, d(1, 2)), (4, 3, d(1, 1))] {
            let v = programmed_postsel(h, f, f).unwrap();
            let w = mix_with_constant(&v, &BigInt::from(f), h).unwrap();
            let st = postselect_stats(&w, &w.default_input()).unwrap();
            assert_eq!(st.p_post, want);
            assert_eq!(st.p_cond, mixed_conditional(&rational(1, 1), &BigInt::from(f)));
        }
        let mixed = mixed_conditional(&rational(9, 10), &BigInt::from(3));
        assert_eq!(mixed, rational(4, 5));
        assert!(mixed >= rational(7, 10));
        let v = programmed_postsel(3, 3, 3).unwrap();
        assert!(matches!(
            mix_with_constant(&v, &BigInt::from(5), 3),
            Err(PostselError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn fqp_to_exp_examples() {
        for (f, h) in [(3u64, 3), (4, 3), (1, 2)] {
            let v = programmed_postsel(h, f, 0).unwrap();
            let r = compile_fqp_to_exp(&v, &BigInt::from(f), h).unwrap();
            let st = postselect_stats(&r, &r.default_input()).unwrap();
            assert_eq!(st.p_post, DyadicRational::pow2_neg(h as u32));
        }
    }

    #[test]
    fn pp_examples() {
        let m = |v| make_gap_machine(v, 2).unwrap();
        let c = compile_pp_instance(&m(2), &m(2), &none()).unwrap();
        let st = postselect_stats(&c, &c.default_input()).unwrap();
        assert_eq!(st.p_post, d(1, 6));
        assert_eq!(st.p_cond, rational(3, 4));
        assert!(st.p_cond >= pp_in_bound(4));
        let c = compile_pp_instance(&m(0), &m(4), &none()).unwrap();
        let st = postselect_stats(&c, &c.default_input()).unwrap();
        assert_eq!(st.p_cond, rational(0, 1));
        assert!(matches!(
            compile_pp_instance(&m(2), &m(0), &none()),
            Err(PostselError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn algebra_examples() {
        let r2 = verify_error_algebra(2).unwrap();
        assert!(r2.pass());
        assert_eq!(r2.conditions[0].lhs, r2.conditions[0].rhs);
        let r3 = verify_error_algebra(3).unwrap();
        assert_eq!(r3.conditions[1].lhs, rational(3, 10));
        let r10 = verify_error_algebra(10).unwrap();
        assert!(r10.conditions.iter().all(|c| c.lhs != c.rhs && c.pass));
        assert!(verify_error_algebra(1).is_err());
    }

    #[test]
    fn k_choice() {
        assert_eq!(choose_k(&BigInt::from(16), 2), 0);
        assert_eq!(choose_k(&BigInt::from(17), 2), 1);
        assert_eq!(choose_k(&BigInt::from(1296), 3), 3);
        for s in 1..2000i64 {
            let k = choose_k(&BigInt::from(s), 2);
            assert!(BigInt::from(s) <= BigInt::one() << (4 + 2 * k));
            assert!(k == 0 || BigInt::from(s) > BigInt::one() << (2 + 2 * k));
        }
    }
}
