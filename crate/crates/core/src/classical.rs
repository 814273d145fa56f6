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


//! Postselected classical machines with a fixed number of coins.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::Bits;
use crate::circuit::{Control, Gate};
use crate::counting::{gap, FpFunction, PredicateCircuit};
use crate::error::{PostselError, Result};
use crate::report::{Condition, Relation, WitnessReport};
use crate::ring::{rational, DyadicRational};
use crate::sim::PostselStats;

/// A probabilistic machine: every run flips the same `t` coins (the path
/// bits of `machine`), then reads `p` from the machine's accept bit and `o`
/// from `o_bit`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbTM {
    machine: PredicateCircuit,
    o_bit: usize,
}

impl ProbTM {
    pub fn new(machine: PredicateCircuit, o_bit: usize) -> Result<Self> {
        if o_bit >= machine.width() || o_bit < machine.input_width() || o_bit == machine.accept() {
            return Err(PostselError::InvalidParameter(format!(
                "output bit {o_bit} must be a non-input bit distinct from the postselect bit"
            )));
        }
        Ok(ProbTM { machine, o_bit })
    }

    pub fn coin_width(&self) -> usize {
        self.machine.path_width()
    }

    pub fn input_width(&self) -> usize {
        self.machine.input_width()
    }

    /// Accepts exactly on the runs with `p = 1`.
    pub fn post_machine(&self) -> &PredicateCircuit {
        &self.machine
    }

    /// Accepts exactly on the runs with `o = 1` and `p = 1`.
    pub fn joint_machine(&self) -> PredicateCircuit {
        let m = &self.machine;
        let joint = m.width();
        let mut gates = m.gates().to_vec();
        gates.push(Gate::ccx(Control::on(m.accept()), Control::on(self.o_bit), joint));
        PredicateCircuit::new(m.input_width(), m.path_width(), m.work_width() + 1, gates, joint)
            .expect("one extra work bit keeps the machine valid")
    }

    pub fn output_bit(&self) -> usize {
        self.o_bit
    }
}

/// Exact statistics by enumerating every coin sequence.
pub fn run_ptm(m: &ProbTM, w: &Bits) -> Result<PostselStats> {
    let t = m.coin_width() as u32;
    let post = gap(m.post_machine(), w)?.accepts;
    let joint = gap(&m.joint_machine(), w)?.accepts;
    PostselStats::from_probabilities(DyadicRational::new(post, t), DyadicRational::new(joint, t))
}

/// The unambiguous-pair machine: pick `x`, run `N` and `M` on path `x`;
/// `p = 1` when exactly one accepts and `o = 1` when that one is `N`.
///
/// The promise (one machine has exactly one accepting path, the other
/// none) is checked by enumeration on `w`.
pub fn build_upcoup(n: &PredicateCircuit, m: &PredicateCircuit, w: &Bits) -> Result<ProbTM> {
    if n.input_width() != m.input_width() || n.path_width() != m.path_width() {
        return Err(PostselError::InvalidParameter(
            "both machines need the same input and path widths".into(),
        ));
    }
    let an = gap(n, w)?.accepts;
    let am = gap(m, w)?.accepts;
    let (zero, one) = (BigInt::zero(), BigInt::one());
    if !((an == one && am == zero) || (an == zero && am == one)) {
        return Err(PostselError::PromiseViolation(format!(
            "accepting paths on {w}: {an} and {am}, expected exactly one between them"
        )));
    }
    let base = n.input_width() + n.path_width();
    let (wn, wm) = (n.work_width(), m.work_width());
    // Layout: [w][x][N work][M work][copy of N's verdict][p][o]
    let copy = base + wn + wm;
    let (p, o) = (copy + 1, copy + 2);
    let shift_m = |q: usize| if q >= base { q + wn } else { q };
    let mut gates: Vec<Gate> = n.gates().to_vec();
    gates.push(Gate::cx(Control::on(n.accept()), copy));
    gates.extend(n.gates().iter().rev().cloned());
    gates.extend(m.gates().iter().map(|g| g.remap(shift_m)));
    let acc_m = shift_m(m.accept());
    gates.push(Gate::cx(Control::on(copy), p));
    gates.push(Gate::cx(Control::on(acc_m), p));
    gates.push(Gate::ccx(Control::on(copy), Control::off(acc_m), o));
    let machine = PredicateCircuit::new(n.input_width(), n.path_width(), wn + wm + 3, gates, p)?;
    ProbTM::new(machine, o)
}

/// `g(w) / (2^p_exp f(w))` with `g` the accepting-path count of a machine.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WappWitness {
    pub g: PredicateCircuit,
    pub f: FpFunction,
    pub p_exp: usize,
    pub epsilon: BigRational,
}

impl WappWitness {
    pub fn ratio(&self, w: &Bits) -> Result<BigRational> {
        let g = gap(&self.g, w)?.accepts;
        let den = self.f.eval(w)? << self.p_exp;
        Ok(BigRational::new(g, den))
    }
}

/// Extracts the counting witness of a postselected machine whose
/// postselection probability is `f(w) / 2^s`: `g = 2^s * #(o=1, p=1 runs)`
/// over `2^t f(w)`, so the ratio is exactly the conditional probability.
/// The declared `f` is checked against enumeration on every given input.
pub fn wapp_witness(m: &ProbTM, f: &FpFunction, s: usize, epsilon: BigRational, inputs: &[Bits]) -> Result<WappWitness> {
    if !epsilon.is_positive() || epsilon > BigRational::one() {
        return Err(PostselError::InvalidParameter(format!("epsilon {epsilon} is outside (0, 1]")));
    }
    for w in inputs {
        let measured = run_ptm(m, w)?.p_post;
        let declared = DyadicRational::new(f.eval(w)?, s as u32);
        if measured != declared {
            return Err(PostselError::PreconditionFailed(format!(
                "P(p=1) on {w} is {measured}, declared {declared}"
            )));
        }
    }
    Ok(WappWitness {
        g: m.joint_machine().pad_paths(s),
        f: f.clone(),
        p_exp: m.coin_width(),
        epsilon,
    })
}

/// Strict thresholds `(1+e)/2 < ratio <= 1` on members and
/// `0 <= ratio < (1-e)/2` on the others.
pub fn check_wapp_witness(witness: &WappWitness, labels: &[(Bits, bool)], scenario: &str) -> Result<WitnessReport> {
    let one = BigRational::one();
    let hi = (&one + &witness.epsilon) * rational(1, 2);
    let lo = (&one - &witness.epsilon) * rational(1, 2);
    let mut report = WitnessReport::new();
    for (w, member) in labels {
        let ratio = witness.ratio(w)?;
        let inst = format!("w={w}");
        if *member {
            report.push(Condition::new(scenario, &inst, "wapp-in-lower", ratio.clone(), Relation::Gt, hi.clone()));
            report.push(Condition::new(scenario, &inst, "wapp-in-upper", ratio, Relation::Le, one.clone()));
        } else {
            report.push(Condition::new(scenario, &inst, "wapp-out-lower", ratio.clone(), Relation::Ge, BigRational::zero()));
            report.push(Condition::new(scenario, &inst, "wapp-out-upper", ratio, Relation::Lt, lo.clone()));
        }
    }
    Ok(report)
}

/// The supremum of the `epsilon` values for which the strict thresholds
/// hold on `labels`, capped at 1; nonpositive means no `epsilon` works.
pub fn wapp_epsilon_supremum(witness: &WappWitness, labels: &[(Bits, bool)]) -> Result<BigRational> {
    let mut sup = BigRational::one();
    for (w, member) in labels {
        let ratio = witness.ratio(w)?;
        let two_r = &ratio * BigInt::from(2);
        let bound = if *member { two_r - BigInt::one() } else { BigRational::one() - two_r };
        sup = sup.min(bound);
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::{point_machine, reject_all};

    fn none() -> Bits {
        Bits::new(Vec::new())
    }

    fn d(n: i64, k: u32) -> DyadicRational {
        DyadicRational::new(n, k)
    }

    #[test]
    fn coin_machines() {
        // p = c0, o = c0
        let m = PredicateCircuit::new(0, 1, 2, vec![Gate::cx(Control::on(0), 1), Gate::cx(Control::on(0), 2)], 1).unwrap();
        let st = run_ptm(&ProbTM::new(m, 2).unwrap(), &none()).unwrap();
        assert_eq!((st.p_post, st.p_cond), (d(1, 1), rational(1, 1)));
        // p = c0 AND c1, o = 0
        let m = PredicateCircuit::new(0, 2, 2, vec![Gate::ccx(Control::on(0), Control::on(1), 2)], 2).unwrap();
        let st = run_ptm(&ProbTM::new(m, 3).unwrap(), &none()).unwrap();
        assert_eq!((st.p_post, st.p_cond), (d(1, 2), rational(0, 1)));
    }

    #[test]
    fn upcoup_examples() {
        let n = point_machine(2, 0b10).unwrap();
        let st = run_ptm(&build_upcoup(&n, &reject_all(2), &none()).unwrap(), &none()).unwrap();
        assert_eq!((st.p_post, st.p_cond), (d(1, 2), rational(1, 1)));
        let m = point_machine(2, 0b01).unwrap();
        let st = run_ptm(&build_upcoup(&reject_all(2), &m, &none()).unwrap(), &none()).unwrap();
        assert_eq!((st.p_post, st.p_cond), (d(1, 2), rational(0, 1)));
        assert!(matches!(
            build_upcoup(&reject_all(2), &reject_all(2), &none()),
            Err(PostselError::PromiseViolation(_))
        ));
        assert!(matches!(build_upcoup(&n, &m, &none()), Err(PostselError::PromiseViolation(_))));
    }

    #[test]
    fn wapp_examples() {
        let half = rational(1, 2);
        let one_path = FpFunction::table(0, [(none(), BigInt::one())].into_iter().collect()).unwrap();
        let yes = build_upcoup(&point_machine(2, 3).unwrap(), &reject_all(2), &none()).unwrap();
        let wit = wapp_witness(&yes, &one_path, 2, half.clone(), &[none()]).unwrap();
        assert_eq!(wit.ratio(&none()).unwrap(), rational(1, 1));
        assert!(check_wapp_witness(&wit, &[(none(), true)], "t").unwrap().pass());
        assert_eq!(wapp_epsilon_supremum(&wit, &[(none(), true)]).unwrap(), rational(1, 1));

        let no = build_upcoup(&reject_all(2), &point_machine(2, 1).unwrap(), &none()).unwrap();
        let wit = wapp_witness(&no, &one_path, 2, half.clone(), &[none()]).unwrap();
        assert_eq!(wit.ratio(&none()).unwrap(), rational(0, 1));
        assert!(check_wapp_witness(&wit, &[(none(), false)], "t").unwrap().pass());

        // p = 1 always, o = c0: conditional 1/2 meets neither threshold.
        let m = PredicateCircuit::new(0, 1, 2, vec![Gate::x(1), Gate::cx(Control::on(0), 2)], 1).unwrap();
        let all = FpFunction::table(0, [(none(), BigInt::one())].into_iter().collect()).unwrap();
        let wit = wapp_witness(&ProbTM::new(m, 2).unwrap(), &all, 0, half, &[none()]).unwrap();
        assert_eq!(wit.ratio(&none()).unwrap(), rational(1, 2));
        for label in [true, false] {
            assert!(!check_wapp_witness(&wit, &[(none(), label)], "t").unwrap().pass());
        }
        assert!(!wapp_epsilon_supremum(&wit, &[(none(), true)]).unwrap().is_positive());
        // Declared postselection data must match enumeration.
        let bad = FpFunction::table(2, [(none(), BigInt::from(3))].into_iter().collect()).unwrap();
        assert!(wapp_witness(&yes, &bad, 2, rational(1, 2), &[none()]).is_err());
    }
}
