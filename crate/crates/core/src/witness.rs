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


//! Class-condition checkers over labeled instances.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::bits::Bits;
use crate::counting::FpFunction;
use crate::error::{PostselError, Result};
use crate::report::{Condition, Relation, WitnessReport};
use crate::ring::{rational, rational_pow2_neg};
use crate::sim::PostselStats;

/// Bounds on `g/f`: members need `hi <= g/f <= 1`, others `0 <= g/f <= lo`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Thresholds {
    /// `lo = 2^-r`, `hi = 1 - 2^-r`.
    Exponent(u32),
    Explicit { lo: BigRational, hi: BigRational },
}

impl Thresholds {
    pub fn bounds(&self) -> (BigRational, BigRational) {
        match self {
            Thresholds::Exponent(r) => {
                let e = rational_pow2_neg(*r);
                (e.clone(), BigRational::one() - e)
            }
            Thresholds::Explicit { lo, hi } => (lo.clone(), hi.clone()),
        }
    }
}

/// One labeled input with the value of its numerator function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapInstance {
    pub w: Bits,
    pub member: bool,
    pub g: BigInt,
}

/// Checks the approximate-counting conditions on `g(w)/f(w)` for every
/// instance. `f` may be tabulated, length-only or gap-valued.
pub fn check_awpp_witness(
    instances: &[GapInstance],
    f: &FpFunction,
    thresholds: &Thresholds,
    scenario: &str,
) -> Result<WitnessReport> {
    let (lo, hi) = thresholds.bounds();
    let mut report = WitnessReport::new();
    for inst in instances {
        let fv = f.eval(&inst.w)?;
        let ratio = BigRational::new(inst.g.clone(), fv);
        let name = format!("w={}", inst.w);
        if inst.member {
            report.push(Condition::new(scenario, &name, "ratio-lower", ratio.clone(), Relation::Ge, hi.clone()));
            report.push(Condition::new(scenario, &name, "ratio-upper", ratio, Relation::Le, BigRational::one()));
        } else {
            report.push(Condition::new(scenario, &name, "ratio-lower", ratio.clone(), Relation::Ge, BigRational::zero()));
            report.push(Condition::new(scenario, &name, "ratio-upper", ratio, Relation::Le, lo.clone()));
        }
    }
    Ok(report)
}

/// Restricted postselection classes, by the constraint on `P(p=1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `P(p=1) >= 2^-u`.
    Post,
    /// `|P(p=1) - f/2^q| <= 2^-r2 P(p=1)`, `0 < f <= 2^q`, conditional error `2^-r1`.
    Afp,
    /// As `Afp` with `f` depending on the input length only.
    Asize,
    /// `P(p=1) = f/2^q`.
    Fp,
    /// `P(p=1)` depends on `|w|` only.
    Size,
    /// `P(p=1) <= 2^-q`, `q > 0`.
    LeExp,
    /// `P(p=1) = 2^-q`.
    Exp,
    /// `P(p=1) = f/2^q` with `f` evaluated exactly by other means.
    Fqp,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::Post => "post",
            Profile::Afp => "afp",
            Profile::Asize => "asize",
            Profile::Fp => "fp",
            Profile::Size => "size",
            Profile::LeExp => "leexp",
            Profile::Exp => "exp",
            Profile::Fqp => "fqp",
        }
    }
}

/// Reference data a profile may need. The conditional thresholds default to
/// `(2/3, 1/3)` and are replaced by `1 - 2^-r1` / `2^-r1` for the
/// approximate profiles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileParams {
    pub f: Option<FpFunction>,
    pub q: Option<u32>,
    pub u: Option<u32>,
    pub r1: Option<u32>,
    pub r2: Option<u32>,
    pub accept: BigRational,
    pub reject: BigRational,
}

impl Default for ProfileParams {
    fn default() -> Self {
        ProfileParams {
            f: None,
            q: None,
            u: None,
            r1: None,
            r2: None,
            accept: rational(2, 3),
            reject: rational(1, 3),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileInstance {
    pub w: Bits,
    pub member: bool,
    pub stats: PostselStats,
}

fn need<T: Clone>(v: &Option<T>, what: &str) -> Result<T> {
    v.clone()
        .ok_or_else(|| PostselError::MissingReference(format!("profile needs {what}")))
}

/// Verifies every clause of the named profile on each instance.
pub fn classify_postsel_profile(
    instances: &[ProfileInstance],
    profile: Profile,
    params: &ProfileParams,
    scenario: &str,
) -> Result<WitnessReport> {
    let approx = matches!(profile, Profile::Afp | Profile::Asize);
    let (accept, reject) = if approx {
        let e = rational_pow2_neg(need(&params.r1, "r1")?);
        (BigRational::one() - &e, e)
    } else {
        (params.accept.clone(), params.reject.clone())
    };
    if profile == Profile::Asize && !matches!(params.f, Some(FpFunction::GapOfLength(_))) {
        return Err(PostselError::MissingReference(
            "the asize profile needs a gap-of-length reference function".into(),
        ));
    }
    let mut by_length: BTreeMap<usize, BigRational> = BTreeMap::new();
    let mut report = WitnessReport::new();
    for inst in instances {
        let name = format!("w={}", inst.w);
        let mut add = |cond: &str, lhs: BigRational, rel: Relation, rhs: BigRational| {
            report.push(Condition::new(scenario, &name, cond, lhs, rel, rhs));
        };
        let post = inst.stats.p_post.to_rational();
        let cond = inst.stats.p_cond.clone();
        add("post-positive", post.clone(), Relation::Gt, BigRational::zero());
        if inst.member {
            add("cond-accept", cond, Relation::Ge, accept.clone());
        } else {
            add("cond-reject", cond, Relation::Le, reject.clone());
        }
        match profile {
            Profile::Post => {
                let u = need(&params.u, "u")?;
                add("post-lower", post, Relation::Ge, rational_pow2_neg(u));
            }
            Profile::Afp | Profile::Asize => {
                let f = need(&params.f, "f")?.eval(&inst.w)?;
                let q = need(&params.q, "q")?;
                let r2 = need(&params.r2, "r2")?;
                let bound = BigRational::from_integer(BigInt::one() << q as usize);
                let target = BigRational::new(f.clone(), BigInt::one() << q as usize);
                add("f-positive", BigRational::from_integer(f.clone()), Relation::Gt, BigRational::zero());
                add("f-bound", BigRational::from_integer(f), Relation::Le, bound);
                add(
                    "post-approx",
                    (&post - target).abs(),
                    Relation::Le,
                    rational_pow2_neg(r2) * &post,
                );
            }
            Profile::Fp | Profile::Fqp => {
                let f = need(&params.f, "f")?.eval(&inst.w)?;
                let q = need(&params.q, "q")?;
                add("f-positive", BigRational::from_integer(f.clone()), Relation::Gt, BigRational::zero());
                add("post-exact", post, Relation::Eq, BigRational::new(f, BigInt::one() << q as usize));
            }
            Profile::Size => {
                let first = by_length.entry(inst.w.len()).or_insert_with(|| post.clone()).clone();
                add("post-size-only", post, Relation::Eq, first);
            }
            Profile::LeExp => {
                let q = need(&params.q, "q")?;
                add("q-positive", rational(q as i64, 1), Relation::Gt, BigRational::zero());
                add("post-upper", post, Relation::Le, rational_pow2_neg(q));
            }
            Profile::Exp => {
                let q = need(&params.q, "q")?;
                add("post-exact", post, Relation::Eq, rational_pow2_neg(q));
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::DyadicRational;

    fn table(entries: &[(&str, i64)], q: usize) -> FpFunction {
        FpFunction::table(q, entries.iter().map(|&(w, v)| (w.parse().unwrap(), BigInt::from(v))).collect()).unwrap()
    }

    fn inst(w: &str, member: bool, g: i64) -> GapInstance {
        GapInstance {
            w: w.parse().unwrap(),
            member,
            g: BigInt::from(g),
        }
    }

    #[test]
    fn awpp_examples() {
        let f = table(&[("0", 16), ("1", 16)], 4);
        let r = Thresholds::Exponent(4);
        assert!(check_awpp_witness(&[inst("0", true, 16)], &f, &r, "t").unwrap().pass());
        assert!(check_awpp_witness(&[inst("1", false, 0)], &f, &r, "t").unwrap().pass());
        let edge = check_awpp_witness(&[inst("0", true, 15)], &f, &r, "t").unwrap();
        assert!(edge.pass());
        assert_eq!(edge.conditions[0].lhs, edge.conditions[0].rhs);
        assert!(!check_awpp_witness(&[inst("0", true, 14)], &f, &r, "t").unwrap().pass());
        assert!(!check_awpp_witness(&[inst("1", false, 2)], &f, &r, "t").unwrap().pass());
    }

    fn stats(post: (i64, u32), joint: (i64, u32)) -> PostselStats {
        PostselStats::from_probabilities(DyadicRational::new(post.0, post.1), DyadicRational::new(joint.0, joint.1)).unwrap()
    }

    #[test]
    fn size_profile_rejects_input_dependence() {
        let instances = vec![
            ProfileInstance { w: "00".parse().unwrap(), member: true, stats: stats((1, 2), (1, 2)) },
            ProfileInstance { w: "01".parse().unwrap(), member: true, stats: stats((1, 3), (1, 3)) },
        ];
        let report = classify_postsel_profile(&instances, Profile::Size, &ProfileParams::default(), "t").unwrap();
        assert!(!report.pass());
        let exp = ProfileParams { q: Some(2), ..Default::default() };
        assert!(!classify_postsel_profile(&instances, Profile::Exp, &exp, "t").unwrap().pass());
        assert!(classify_postsel_profile(&instances[..1], Profile::Exp, &exp, "t").unwrap().pass());
    }

    #[test]
    fn afp_profile_clauses() {
        let f = table(&[("0", 5)], 3);
        let params = ProfileParams { f: Some(f), q: Some(3), r1: Some(2), r2: Some(2), ..Default::default() };
        // P = 4/8 vs f/2^q = 5/8: |diff| = 1/8 <= P/4 = 1/8.
        let ok = ProfileInstance { w: "0".parse().unwrap(), member: true, stats: stats((1, 1), (1, 1)) };
        assert!(classify_postsel_profile(&[ok], Profile::Afp, &params, "t").unwrap().pass());
        let bad = ProfileInstance { w: "0".parse().unwrap(), member: true, stats: stats((3, 3), (3, 3)) };
        assert!(!classify_postsel_profile(std::slice::from_ref(&bad), Profile::Afp, &params, "t").unwrap().pass());
        assert!(matches!(
            classify_postsel_profile(&[bad], Profile::Afp, &ProfileParams::default(), "t"),
            Err(PostselError::MissingReference(_))
        ));
    }
}
