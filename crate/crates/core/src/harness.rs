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


//! Named verification scenarios: fixtures are compiled, simulated exactly,
//! cross-checked against the path sum and judged against the class
//! conditions they are meant to witness.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::bits::Bits;
use crate::circuit::Circuit;
use crate::classical::{build_upcoup, check_wapp_witness, run_ptm, wapp_epsilon_supremum, wapp_witness, ProbTM};
use crate::constructions::{
    choose_k, compile_app, compile_fqp_to_exp, compile_gap_squared, compile_pair_postsel, compile_pp_instance,
    compile_wpp, gadget_biased_flag, mixed_conditional, pp_in_bound, pp_out_bound, programmed_postsel,
    rescale_postsel, scaled_pair, verify_error_algebra, ScaleMode,
};
use crate::counting::{gap, make_gap_machine, point_machine, reject_all, table_gap_machine, FpFunction, PredicateCircuit};
use crate::error::{PostselError, Result};
use crate::pathsum::{amplitudes, path_sum};
use crate::random::{random_bits, random_bounded_postsel, random_circuit, random_machine, stream};
use crate::report::{Condition, Relation, WitnessReport};
use crate::ring::{rational, rational_pow2_neg, DyadicRational};
use crate::sim::{measure_prob, output_prob, postselect_stats, run, PostselStats};
use crate::witness::{
    check_awpp_witness, classify_postsel_profile, GapInstance, Profile, ProfileInstance, ProfileParams, Thresholds,
};

/// Compiled circuits with more Hadamards than this skip the path-sum
/// cross-check.
pub const ORACLE_H_CAP: usize = 16;

pub const SCENARIOS: &[&str] = &[
    "oracle",
    "bqp-thresholds",
    "gapsq",
    "pair",
    "awpp-forward",
    "awpp-forward-complement",
    "awpp-backward",
    "app",
    "wpp-appendixB",
    "theorem5",
    "theorem6",
    "classical",
    "pp-appendixD",
    "algebra",
];

pub const SUITES: &[&str] = &["all", "awpp", "app", "wpp", "theorem5", "theorem6", "classical", "pp", "algebra"];

/// Scenario names of a suite, in run order.
pub fn suite(name: &str) -> Result<Vec<&'static str>> {
    let list: &[&'static str] = match name {
        "all" => SCENARIOS,
        "awpp" => &["gapsq", "pair", "awpp-forward", "awpp-forward-complement", "awpp-backward"],
        "app" => &["app"],
        "wpp" => &["wpp-appendixB"],
        "theorem5" => &["theorem5"],
        "theorem6" => &["theorem6"],
        "classical" => &["classical"],
        "pp" => &["pp-appendixD"],
        "algebra" => &["algebra"],
        _ => return Err(PostselError::UnknownScenario(format!("suite {name}"))),
    };
    Ok(list.to_vec())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct HarnessConfig {
    pub seed: u64,
    /// Error exponent for the scenarios that take one; each has its own
    /// default.
    pub r: Option<u32>,
}

pub fn run_scenario(name: &str, seed: u64) -> Result<WitnessReport> {
    run_scenario_with(name, &HarnessConfig { seed, r: None })
}

pub fn run_scenario_with(name: &str, cfg: &HarnessConfig) -> Result<WitnessReport> {
    let seed = cfg.seed;
    let report = match name {
        "oracle" => oracle_agreement(seed, 100)?,
        "bqp-thresholds" => bqp_thresholds()?,
        "gapsq" => gap_squared_random(seed, 50)?,
        "pair" => pair_random(seed, 50)?,
        "awpp-forward" => awpp_forward(cfg.r.unwrap_or(4), false)?,
        "awpp-forward-complement" => awpp_forward(cfg.r.unwrap_or(4), true)?,
        "awpp-backward" => awpp_backward(seed, 16, 3, 3)?,
        "app" => app_fixture(cfg.r.unwrap_or(4))?,
        "wpp-appendixB" => wpp_fixture()?,
        "theorem5" => rescale_random(seed, 20)?,
        "theorem6" => fqp_to_exp(4)?,
        "classical" => upcoup_exhaustive(4)?,
        "pp-appendixD" => pp_fixture(cfg.r.unwrap_or(4))?,
        "algebra" => {
            let mut rs: Vec<u32> = (2..=16).collect();
            if let Some(r) = cfg.r.filter(|r| !rs.contains(r)) {
                rs.push(r);
            }
            error_algebra(&rs)?
        }
        _ => return Err(PostselError::UnknownScenario(name.to_string())),
    };
    Ok(report.with_scenario(name))
}

pub fn run_suite(name: &str, cfg: &HarnessConfig) -> Result<WitnessReport> {
    let mut report = WitnessReport::new();
    for scenario in suite(name)? {
        report.extend(run_scenario_with(scenario, cfg)?);
    }
    Ok(report)
}

struct Log {
    scenario: &'static str,
    report: WitnessReport,
}

impl Log {
    fn new(scenario: &'static str) -> Self {
        Log { scenario, report: WitnessReport::new() }
    }

    fn check(&mut self, inst: &str, cond: &str, lhs: BigRational, rel: Relation, rhs: BigRational) {
        self.report.push(Condition::new(self.scenario, inst, cond, lhs, rel, rhs));
    }

    fn eq(&mut self, inst: &str, cond: &str, lhs: BigRational, rhs: BigRational) {
        self.check(inst, cond, lhs, Relation::Eq, rhs);
    }

    fn holds(&mut self, inst: &str, cond: &str, ok: bool) {
        let v = |b: bool| BigRational::from_integer(BigInt::from(b as u8));
        self.eq(inst, cond, v(ok), v(true));
    }

    fn add(&mut self, other: WitnessReport) {
        self.report.extend(other);
    }

    fn finish(self) -> WitnessReport {
        self.report
    }
}

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn over_pow2(n: BigInt, e: usize) -> BigRational {
    BigRational::new(n, pow2(e))
}

fn int(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

fn empty() -> Bits {
    Bits::new(Vec::new())
}

fn oracle_prob(c: &Circuit, input: &Bits, constraints: &[(usize, bool)]) -> Result<BigRational> {
    let (g, m) = path_sum(c, input, constraints)?;
    Ok(DyadicRational::new(g, m).to_rational())
}

/// Path-sum cross-check of postselection statistics for small circuits.
fn cross_check(log: &mut Log, inst: &str, c: &Circuit, input: &Bits, stats: &PostselStats) -> Result<()> {
    if c.h_count() > ORACLE_H_CAP {
        return Ok(());
    }
    let (o, p) = match (c.output(), c.postselect()) {
        (Some(o), Some(p)) => (o, p),
        _ => return Ok(()),
    };
    log.eq(inst, "oracle-post", stats.p_post.to_rational(), oracle_prob(c, input, &[(p, true)])?);
    log.eq(
        inst,
        "oracle-joint",
        stats.p_joint.to_rational(),
        oracle_prob(c, input, &[(o, true), (p, true)])?,
    );
    Ok(())
}

fn table(entries: &[(&str, i64)]) -> BTreeMap<Bits, i64> {
    entries.iter().map(|&(w, v)| (w.parse().expect("fixture bits"), v)).collect()
}

fn fp_table(q: usize, values: impl IntoIterator<Item = (Bits, BigInt)>) -> Result<FpFunction> {
    FpFunction::table(q, values.into_iter().collect())
}

/// Path sum against the simulator on seeded random circuits: every output
/// marginal, every postselected probability and the full amplitude table.
pub fn oracle_agreement(seed: u64, count: usize) -> Result<WitnessReport> {
    let mut log = Log::new("oracle");
    for i in 0..count {
        let mut rng = stream(seed, i as u64);
        let width = rng.gen_range(1..=8);
        let gates = rng.gen_range(1..=24);
        let c = random_circuit(&mut rng, width, gates, 12);
        let input = random_bits(&mut rng, width);
        let inst = format!("circuit#{i}");
        let state = run(&c, &input)?;
        let sim: BTreeMap<u64, BigInt> = state.nonzero().into_iter().collect();
        let oracle: BTreeMap<u64, BigInt> = amplitudes(&c, &input)?.into_iter().filter(|(_, a)| !a.is_zero()).collect();
        log.holds(&inst, "amplitudes", sim == oracle);
        for q in 0..width {
            let p = measure_prob(&state, q, true).to_rational();
            log.eq(&inst, &format!("marginal-{q}"), p, oracle_prob(&c, &input, &[(q, true)])?);
        }
        if let (Some(o), Some(p)) = (c.output(), c.postselect()) {
            let joint = state.joint_prob(&[(o, true), (p, true)]).to_rational();
            log.eq(&inst, "joint", joint, oracle_prob(&c, &input, &[(o, true), (p, true)])?);
        }
    }
    Ok(log.finish())
}

/// Circuits without postselection separating a labeled family at `(1/3, 2/3)`.
pub fn bqp_thresholds() -> Result<WitnessReport> {
    let mut log = Log::new("bqp-thresholds");
    let (hi, lo) = (rational(2, 3), rational(1, 3));
    let judge = |log: &mut Log, inst: &str, c: &Circuit, member: bool, expected: BigRational| -> Result<()> {
        let p = output_prob(c, &c.default_input())?.to_rational();
        log.eq(inst, "prob-exact", p.clone(), expected);
        if c.h_count() <= ORACLE_H_CAP {
            let o = c.output().expect("fixture has an output");
            log.eq(inst, "oracle", p.clone(), oracle_prob(c, &c.default_input(), &[(o, true)])?);
        }
        if member {
            log.check(inst, "accept", p, Relation::Ge, hi.clone());
        } else {
            log.check(inst, "reject", p, Relation::Le, lo.clone());
        }
        Ok(())
    };
    // Gap-squared circuits of a machine whose gap is +-2^q on members and 0 elsewhere.
    let values = table(&[("00", 4), ("01", 0), ("10", -4), ("11", 0)]);
    let m = table_gap_machine(2, 2, &values)?;
    for (w, &g) in &values {
        let c = compile_gap_squared(&m, w)?;
        judge(&mut log, &format!("gapsq w={w}"), &c, g != 0, over_pow2(BigInt::from(g * g), 4))?;
    }
    for a in (0..=8u64).filter(|a| !(3..=5).contains(a)) {
        let c = gadget_biased_flag(a, 3)?;
        judge(&mut log, &format!("flag a={a}/8"), &c, a >= 6, over_pow2(BigInt::from(a), 3))?;
    }
    Ok(log.finish())
}

/// `P(o=1) = G^2 / 2^(2q)` for random machines, plus the pinned `G = 2, q = 2`.
pub fn gap_squared_random(seed: u64, count: usize) -> Result<WitnessReport> {
    let mut log = Log::new("gapsq");
    let one = |log: &mut Log, inst: &str, m: &PredicateCircuit, w: &Bits| -> Result<()> {
        let g = gap(m, w)?.gap;
        let q = m.path_width();
        let c = compile_gap_squared(m, w)?;
        let p = output_prob(&c, &c.default_input())?.to_rational();
        log.eq(inst, "gap-squared", p.clone(), over_pow2(&g * &g, 2 * q));
        if c.h_count() <= ORACLE_H_CAP {
            let o = c.output().expect("gap-squared circuits have an output");
            log.eq(inst, "oracle", p, oracle_prob(&c, &c.default_input(), &[(o, true)])?);
        }
        Ok(())
    };
    for i in 0..count {
        let mut rng = stream(seed, i as u64);
        let (n, q, work) = (rng.gen_range(0..=2), rng.gen_range(0..=4), rng.gen_range(1..=3));
        let gates = rng.gen_range(1..=12);
        let m = random_machine(&mut rng, n, q, work, gates);
        let w = random_bits(&mut rng, n);
        one(&mut log, &format!("machine#{i} q={q}"), &m, &w)?;
    }
    let pinned = make_gap_machine(2, 2)?;
    one(&mut log, "pinned G=2 q=2", &pinned, &empty())?;
    let c = compile_gap_squared(&pinned, &empty())?;
    log.eq("pinned G=2 q=2", "value", output_prob(&c, &c.default_input())?.to_rational(), rational(1, 4));
    Ok(log.finish())
}

/// Exact pair statistics of the pair construction and their closed forms.
fn pair_closed_form(
    log: &mut Log,
    inst: &str,
    m1: &PredicateCircuit,
    m2: &PredicateCircuit,
    w: &Bits,
    k: usize,
    scale: &ScaleMode,
) -> Result<PostselStats> {
    let (s1, s2) = scaled_pair(m1, m2, w, scale)?;
    let (g1, g2) = (gap(&s1, &empty())?.gap, gap(&s2, &empty())?.gap);
    let q = s1.path_width();
    let c = compile_pair_postsel(m1, m2, w, k, scale)?;
    let stats = postselect_stats(&c, &c.default_input())?;
    let sum = &g1 * &g1 + &g2 * &g2;
    log.eq(inst, "post-closed-form", stats.p_post.to_rational(), over_pow2(sum.clone(), 2 * q + 2 + 2 * k));
    log.eq(inst, "cond-closed-form", stats.p_cond.clone(), BigRational::new(&g1 * &g1, sum));
    cross_check(log, inst, &c, &c.default_input(), &stats)?;
    Ok(stats)
}

/// Random machine pairs: closed forms, complement symmetry and the
/// half-gap reconciliation `G1^2 + G2^2 = 4(h1^2 + h2^2)`.
pub fn pair_random(seed: u64, count: usize) -> Result<WitnessReport> {
    let mut log = Log::new("pair");
    for i in 0..count {
        let mut rng = stream(seed, i as u64);
        let (n, q, k) = (rng.gen_range(0..=1), rng.gen_range(0..=3), rng.gen_range(0..=2));
        let work = rng.gen_range(1..=2);
        let (n1, n2) = (rng.gen_range(1..=8), rng.gen_range(1..=8));
        let m1 = random_machine(&mut rng, n, q, work, n1);
        let m2 = random_machine(&mut rng, n, q, work, n2);
        let w = random_bits(&mut rng, n);
        let inst = format!("pair#{i} q={q} k={k}");
        let g1 = gap(&m1, &w)?.gap;
        let g2 = gap(&m2, &w)?.gap;
        if g1.is_zero() && g2.is_zero() {
            let refused = matches!(
                compile_pair_postsel(&m1, &m2, &w, k, &ScaleMode::None),
                Err(PostselError::ZeroPostselection)
            );
            log.holds(&inst, "zero-postselection-refused", refused);
            continue;
        }
        let stats = pair_closed_form(&mut log, &inst, &m1, &m2, &w, k, &ScaleMode::None)?;
        let c = compile_pair_postsel(&m2, &m1, &w, k, &ScaleMode::None)?;
        let swapped = postselect_stats(&c, &c.default_input())?;
        log.eq(&inst, "complement", swapped.p_cond, BigRational::one() - &stats.p_cond);
        let half = |g: &BigInt| BigRational::new(g.clone(), BigInt::from(2));
        let (h1, h2) = (half(&g1), half(&g2));
        log.eq(&inst, "half-gap", int(&g1 * &g1 + &g2 * &g2), int(4) * (&h1 * &h1 + &h2 * &h2));
    }
    let (m1, m2) = (make_gap_machine(2, 2)?, make_gap_machine(-2, 2)?);
    let stats = pair_closed_form(&mut log, "pinned G=(2,-2)", &m1, &m2, &empty(), 0, &ScaleMode::None)?;
    log.eq("pinned G=(2,-2)", "post", stats.p_post.to_rational(), rational(1, 8));
    log.eq("pinned G=(2,-2)", "cond", stats.p_cond, rational(1, 2));
    Ok(log.finish())
}

/// Two-bit fixture of the approximate-counting pair: `L = {01, 10}`,
/// `g1 = f1` on members and 0 elsewhere, `g2 = f2` off `L` and 0 on it.
struct PairFixture {
    labels: Vec<(Bits, bool)>,
    f1: BTreeMap<Bits, i64>,
    f2: BTreeMap<Bits, i64>,
    m1: PredicateCircuit,
    m2: PredicateCircuit,
}

impl PairFixture {
    fn new() -> Result<Self> {
        let f1 = table(&[("00", 2), ("01", 4), ("10", 6), ("11", 8)]);
        let f2 = table(&[("00", 6), ("01", 8), ("10", 2), ("11", 6)]);
        let labels: Vec<(Bits, bool)> = f1.keys().map(|w| (w.clone(), w.count_ones() == 1)).collect();
        let g1 = labels.iter().map(|(w, m)| (w.clone(), if *m { f1[w] } else { 0 })).collect();
        let g2 = labels.iter().map(|(w, m)| (w.clone(), if *m { 0 } else { f2[w] })).collect();
        Ok(PairFixture {
            m1: table_gap_machine(2, 3, &g1)?,
            m2: table_gap_machine(2, 3, &g2)?,
            labels,
            f1,
            f2,
        })
    }

    fn fp(map: &BTreeMap<Bits, i64>) -> Result<FpFunction> {
        fp_table(3, map.iter().map(|(w, &v)| (w.clone(), BigInt::from(v))))
    }

    fn swapped(self) -> Self {
        PairFixture {
            labels: self.labels.into_iter().map(|(w, m)| (w, !m)).collect(),
            f1: self.f2,
            f2: self.f1,
            m1: self.m2,
            m2: self.m1,
        }
    }

    fn scale(&self) -> Result<ScaleMode> {
        Ok(ScaleMode::FpOfInput(Self::fp(&self.f1)?, Self::fp(&self.f2)?))
    }

    fn s(&self, w: &Bits) -> BigInt {
        let p = BigInt::from(self.f1[w] * self.f2[w]);
        &p * &p
    }
}

/// Forward direction of the approximate-counting equality on the pair
/// fixture: witness check, compiled statistics against their closed forms
/// and the approximate-FP profile with `r1 = r2 = r - 2`. With `complement`
/// the machines, denominators and labels are swapped.
pub fn awpp_forward(r: u32, complement: bool) -> Result<WitnessReport> {
    let mut log = Log::new(if complement { "awpp-forward-complement" } else { "awpp-forward" });
    if r < 2 {
        return Err(PostselError::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    let (r1, r2) = (r - 2, r - 2);
    let base = PairFixture::new()?;
    let original = if complement { Some(base.scale()?) } else { None };
    let original_pair = if complement { Some((base.m1.clone(), base.m2.clone())) } else { None };
    let fx = if complement { base.swapped() } else { base };

    let gaps = |m: &PredicateCircuit| -> Result<Vec<GapInstance>> {
        fx.labels
            .iter()
            .map(|(w, member)| Ok(GapInstance { w: w.clone(), member: *member, g: gap(m, w)?.gap }))
            .collect()
    };
    log.add(check_awpp_witness(&gaps(&fx.m1)?, &PairFixture::fp(&fx.f1)?, &Thresholds::Exponent(r), "m1")?);
    let co: Vec<GapInstance> = gaps(&fx.m2)?.into_iter().map(|g| GapInstance { member: !g.member, ..g }).collect();
    log.add(check_awpp_witness(&co, &PairFixture::fp(&fx.f2)?, &Thresholds::Exponent(r), "m2")?);

    let scale = fx.scale()?;
    // Every input shares the scaled path width, so one k serves them all.
    let mut qs = Vec::new();
    for (w, _) in &fx.labels {
        qs.push(scaled_pair(&fx.m1, &fx.m2, w, &scale)?.0.path_width());
    }
    let q = qs[0];
    log.holds("all", "uniform-path-width", qs.iter().all(|&x| x == q));
    let k = fx.labels.iter().map(|(w, _)| choose_k(&fx.s(w), q)).max().unwrap_or(0);
    let q_ref = 2 * q + 2 + 2 * k;
    let mut instances = Vec::new();
    for (w, member) in &fx.labels {
        let inst = format!("w={w}");
        let stats = pair_closed_form(&mut log, &inst, &fx.m1, &fx.m2, w, k, &scale)?;
        if let (Some(scale0), Some((m1, m2))) = (&original, &original_pair) {
            let c = compile_pair_postsel(m1, m2, w, k, scale0)?;
            let before = postselect_stats(&c, &c.default_input())?;
            log.eq(&inst, "complement", stats.p_cond.clone(), BigRational::one() - before.p_cond);
        }
        instances.push(ProfileInstance { w: w.clone(), member: *member, stats });
    }
    let f_ref = fp_table(q_ref, fx.labels.iter().map(|(w, _)| (w.clone(), fx.s(w))))?;
    let params = ProfileParams {
        f: Some(f_ref),
        q: Some(q_ref as u32),
        r1: Some(r1),
        r2: Some(r2),
        ..Default::default()
    };
    log.add(classify_postsel_profile(&instances, Profile::Afp, &params, "profile")?);
    Ok(log.finish())
}

/// Backward direction: seeded random postselected circuits meeting the
/// approximate-FP profile yield counting witnesses
/// `g 2^q (2^r2 - 1) / (2^(s + r2) f)` with `(g, s)` from the path sum.
pub fn awpp_backward(seed: u64, count: usize, r1: u32, r2: u32) -> Result<WitnessReport> {
    let mut log = Log::new("awpp-backward");
    let accept = BigRational::one() - rational_pow2_neg(r1);
    let reject = rational_pow2_neg(r1);
    let mut drawn = Vec::new();
    for i in 0..count {
        let mut rng = stream(seed, i as u64);
        let member = i % 2 == 0;
        let (c, stats) = random_bounded_postsel(&mut rng, member, i % 4 < 2, &accept, &reject);
        drawn.push((Bits::from_value(i as u64, 8), c, stats, member, rng));
    }
    // A common exponent with slack for the approximation window.
    let q = drawn.iter().map(|d| d.2.p_post.exponent() as usize).max().unwrap_or(0) + r2 as usize + 1;
    let mut f = BTreeMap::new();
    let mut instances = Vec::new();
    let mut witnesses = Vec::new();
    let mut den = BTreeMap::new();
    for (w, c, stats, member, mut rng) in drawn {
        let exact = stats.p_post.numerator_over(q as u32);
        let slack: BigInt = &exact >> r2 as usize;
        let lo = (&exact - &slack).max(BigInt::one());
        let hi = (&exact + &slack).min(pow2(q));
        let span = u64::try_from(&hi - &lo).expect("window fits in u64");
        let fw = &lo + BigInt::from(rng.gen_range(0..=span));
        let input = c.default_input();
        let inst = format!("w={w}");
        cross_check(&mut log, &inst, &c, &input, &stats)?;
        let (o, p) = (c.output().expect("has output"), c.postselect().expect("has postselect"));
        let (g, s) = path_sum(&c, &input, &[(o, true), (p, true)])?;
        let num = g * pow2(q) * (pow2(r2 as usize) - 1);
        let d = pow2(s as usize + r2 as usize) * &fw;
        den.insert(w.clone(), d);
        witnesses.push(GapInstance { w: w.clone(), member, g: num });
        f.insert(w.clone(), fw);
        instances.push(ProfileInstance { w, member, stats });
    }
    let params = ProfileParams {
        f: Some(fp_table(q, f)?),
        q: Some(q as u32),
        r1: Some(r1),
        r2: Some(r2),
        ..Default::default()
    };
    log.add(classify_postsel_profile(&instances, Profile::Afp, &params, "profile")?);
    let den_q = den.values().map(|d| crate::ring::ceil_log2(d) as usize).max().unwrap_or(0);
    let den = fp_table(den_q, den)?;
    let one = BigRational::one();
    let (e1, e2) = (rational_pow2_neg(r1), rational_pow2_neg(r2));
    let tight = Thresholds::Explicit {
        lo: e1.clone(),
        hi: (&one - &e2) / (&one + &e2) * (&one - &e1),
    };
    log.add(check_awpp_witness(&witnesses, &den, &tight, "witness-exact")?);
    let third = Thresholds::Explicit { lo: rational(1, 3), hi: rational(2, 3) };
    log.add(check_awpp_witness(&witnesses, &den, &third, "witness-thirds")?);
    log.check(
        &format!("r1={r1}"),
        "thirds-bound",
        (&one - &e1) * (&one - &e1) / (&one + &e1),
        Relation::Ge,
        rational(2, 3),
    );
    Ok(log.finish())
}

/// Length-only denominators: `f1 = 6` and `f2 = 8` on every two-bit input.
pub fn app_fixture(r: u32) -> Result<WitnessReport> {
    let mut log = Log::new("app");
    if r < 2 {
        return Err(PostselError::InvalidParameter(format!("r = {r} must be at least 2")));
    }
    let (r1, r2) = (r - 2, r - 2);
    let (a, b) = (6i64, 8i64);
    let f1m = make_gap_machine(a, 3)?.widen_input(2);
    let f2m = make_gap_machine(b, 3)?.widen_input(2);
    let labels: Vec<(Bits, bool)> = Bits::all(2).map(|w| { let m = w.count_ones() == 1; (w, m) }).collect();
    let g1 = labels.iter().map(|(w, m)| (w.clone(), if *m { a } else { 0 })).collect();
    let g2 = labels.iter().map(|(w, m)| (w.clone(), if *m { 0 } else { b })).collect();
    let (m1, m2) = (table_gap_machine(2, 3, &g1)?, table_gap_machine(2, 3, &g2)?);

    let gaps = |m: &PredicateCircuit, flip: bool| -> Result<Vec<GapInstance>> {
        labels
            .iter()
            .map(|(w, member)| Ok(GapInstance { w: w.clone(), member: *member != flip, g: gap(m, w)?.gap }))
            .collect()
    };
    let (fl1, fl2) = (FpFunction::GapOfLength(f1m.clone()), FpFunction::GapOfLength(f2m.clone()));
    log.add(check_awpp_witness(&gaps(&m1, false)?, &fl1, &Thresholds::Exponent(r), "m1")?);
    log.add(check_awpp_witness(&gaps(&m2, true)?, &fl2, &Thresholds::Exponent(r), "m2")?);

    let s = BigInt::from(a * b) * BigInt::from(a * b);
    let scale = ScaleMode::GapOfLength(fl1, fl2);
    let q = scaled_pair(&m1, &m2, &labels[0].0, &scale)?.0.path_width();
    let k = choose_k(&s, q);
    let q_ref = 2 * q + 2 + 2 * k;
    let mut instances = Vec::new();
    for (w, member) in &labels {
        let inst = format!("w={w}");
        let c = compile_app(&m1, &m2, &f1m, &f2m, w, k)?;
        let stats = postselect_stats(&c, &c.default_input())?;
        let via_pair = pair_closed_form(&mut log, &inst, &m1, &m2, w, k, &scale)?;
        log.eq(&inst, "app-matches-pair", stats.p_post.to_rational(), via_pair.p_post.to_rational());
        instances.push(ProfileInstance { w: w.clone(), member: *member, stats });
    }
    let s_machine = make_gap_machine(i64::try_from(&s).expect("small"), q_ref)?.widen_input(2);
    let params = ProfileParams {
        f: Some(FpFunction::GapOfLength(s_machine)),
        q: Some(q_ref as u32),
        r1: Some(r1),
        r2: Some(r2),
        ..Default::default()
    };
    log.add(classify_postsel_profile(&instances, Profile::Asize, &params, "profile")?);
    log.add(classify_postsel_profile(&instances, Profile::Size, &ProfileParams::default(), "profile")?);
    Ok(log.finish())
}

/// Exact-weight pair without padding on the promise fixture.
pub fn wpp_fixture() -> Result<WitnessReport> {
    let mut log = Log::new("wpp-appendixB");
    let fx = PairFixture::new()?;
    let exact = Thresholds::Explicit { lo: BigRational::zero(), hi: BigRational::one() };
    let gaps: Vec<GapInstance> = fx
        .labels
        .iter()
        .map(|(w, member)| Ok(GapInstance { w: w.clone(), member: *member, g: gap(&fx.m1, w)?.gap }))
        .collect::<Result<_>>()?;
    log.add(check_awpp_witness(&gaps, &PairFixture::fp(&fx.f1)?, &exact, "m1")?);
    let scale = fx.scale()?;
    let mut instances = Vec::new();
    let mut q_ref = 0;
    for (w, member) in &fx.labels {
        let inst = format!("w={w}");
        let q = scaled_pair(&fx.m1, &fx.m2, w, &scale)?.0.path_width();
        q_ref = 2 * q + 2;
        let c = compile_wpp(&fx.m1, &fx.m2, w, &scale)?;
        let stats = postselect_stats(&c, &c.default_input())?;
        log.check(&inst, "post-lower", stats.p_post.to_rational(), Relation::Ge, rational_pow2_neg(2 * q as u32));
        log.eq(&inst, "cond-exact", stats.p_cond.clone(), int(*member as u8));
        cross_check(&mut log, &inst, &c, &c.default_input(), &stats)?;
        instances.push(ProfileInstance { w: w.clone(), member: *member, stats });
    }
    let f_ref = fp_table(q_ref, fx.labels.iter().map(|(w, _)| (w.clone(), fx.s(w))))?;
    let params = ProfileParams { f: Some(f_ref), q: Some(q_ref as u32), ..Default::default() };
    log.add(classify_postsel_profile(&instances, Profile::Fp, &params, "profile")?);
    Ok(log.finish())
}

/// Rescaling random bounded-error circuits by `2^-t`.
pub fn rescale_random(seed: u64, count: usize) -> Result<WitnessReport> {
    let mut log = Log::new("theorem5");
    for i in 0..count {
        let mut rng = stream(seed, i as u64);
        let member = i % 2 == 0;
        let (c, stats) = random_bounded_postsel(&mut rng, member, i % 4 < 2, &rational(2, 3), &rational(1, 3));
        let t = rng.gen_range(1..=4usize);
        let inst = format!("circuit#{i} t={t}");
        let r = rescale_postsel(&c, t)?;
        let input = r.default_input();
        let after = postselect_stats(&r, &input)?;
        log.eq(&inst, "post-scaled", after.p_post.to_rational(), stats.p_post.to_rational() * rational_pow2_neg(t as u32));
        log.eq(&inst, "cond-preserved", after.p_cond.clone(), stats.p_cond.clone());
        cross_check(&mut log, &inst, &r, &input, &after)?;
        let params = ProfileParams { q: Some(t as u32), ..Default::default() };
        let one = [ProfileInstance { w: Bits::from_value(i as u64, 8), member, stats: after }];
        log.add(classify_postsel_profile(&one, Profile::LeExp, &params, "profile")?);
    }
    Ok(log.finish())
}

/// Mixing with a constant and rescaling: for every `h <= max_h` and every
/// `0 < f <= 2^h`, inner circuits with conditional at least 9/10 (members)
/// or at most 1/10 (others) become circuits with `P(p=1) = 2^-h` and
/// conditional at least 7/10 or at most 3/10.
pub fn fqp_to_exp(max_h: usize) -> Result<WitnessReport> {
    let mut log = Log::new("theorem6");
    for h in 1..=max_h {
        let mut fqp = Vec::new();
        let mut exp = Vec::new();
        let mut f_values = BTreeMap::new();
        for f in 1..=(1u64 << h) {
            for member in [true, false] {
                let joint = if member { (9 * f).div_ceil(10) } else { f / 10 };
                let v = programmed_postsel(h, f, joint)?;
                let inner = postselect_stats(&v, &v.default_input())?;
                let w = Bits::from_value(2 * f + member as u64, h + 2);
                let inst = format!("h={h} f={f} member={member}");
                let fb = BigInt::from(f);
                let c = compile_fqp_to_exp(&v, &fb, h)?;
                let stats = postselect_stats(&c, &c.default_input())?;
                log.eq(&inst, "post-exp", stats.p_post.to_rational(), rational_pow2_neg(h as u32));
                log.eq(&inst, "cond-mixed", stats.p_cond.clone(), mixed_conditional(&inner.p_cond, &fb));
                f_values.insert(w.clone(), fb);
                fqp.push(ProfileInstance { w: w.clone(), member, stats: inner });
                exp.push(ProfileInstance { w, member, stats });
            }
        }
        let inner = ProfileParams {
            f: Some(fp_table(h, f_values)?),
            q: Some(h as u32),
            accept: rational(9, 10),
            reject: rational(1, 10),
            ..Default::default()
        };
        log.add(classify_postsel_profile(&fqp, Profile::Fqp, &inner, "inner")?);
        let outer = ProfileParams {
            q: Some(h as u32),
            accept: rational(7, 10),
            reject: rational(3, 10),
            ..Default::default()
        };
        log.add(classify_postsel_profile(&exp, Profile::Exp, &outer, "profile")?);
    }
    Ok(log.finish())
}

fn upcoup_instance(log: &mut Log, inst: &str, m: &ProbTM, member: bool) -> Result<()> {
    let stats = run_ptm(m, &empty())?;
    let q = m.coin_width();
    log.eq(inst, "post-exp", stats.p_post.to_rational(), rational_pow2_neg(q as u32));
    log.eq(inst, "cond-exact", stats.p_cond, int(member as u8));
    let f = fp_table(0, [(empty(), BigInt::one())])?;
    let witness = wapp_witness(m, &f, q, rational(1, 2), &[empty()])?;
    let labels = [(empty(), member)];
    let mut report = check_wapp_witness(&witness, &labels, log.scenario)?;
    for c in &mut report.conditions {
        c.instance = format!("{inst} {}", c.instance);
    }
    log.add(report);
    log.check(inst, "epsilon-supremum", wapp_epsilon_supremum(&witness, &labels)?, Relation::Ge, rational(1, 2));
    Ok(())
}

/// Every unambiguous promise pair on `q <= max_q` coins, the counting
/// witness at `epsilon = 1/2`, and the rejected half-conditional machine.
pub fn upcoup_exhaustive(max_q: usize) -> Result<WitnessReport> {
    let mut log = Log::new("classical");
    for q in 1..=max_q {
        for v in 0..(1u64 << q) {
            let (n, none) = (point_machine(q, v)?, reject_all(q));
            upcoup_instance(&mut log, &format!("q={q} x={v} member"), &build_upcoup(&n, &none, &empty())?, true)?;
            upcoup_instance(&mut log, &format!("q={q} x={v} other"), &build_upcoup(&none, &n, &empty())?, false)?;
        }
    }
    // Every run postselects and o is the single coin: conditional 1/2.
    let half = PredicateCircuit::new(0, 1, 1, vec![crate::circuit::Gate::x(1)], 1)?;
    let m = ProbTM::new(half, 0)?;
    let stats = run_ptm(&m, &empty())?;
    log.eq("half", "cond", stats.p_cond, rational(1, 2));
    let f = fp_table(0, [(empty(), BigInt::one())])?;
    let witness = wapp_witness(&m, &f, 0, rational(1, 2), &[empty()])?;
    for member in [true, false] {
        let labels = [(empty(), member)];
        let rejected = !check_wapp_witness(&witness, &labels, "half")?.pass();
        log.holds(&format!("half member={member}"), "boundary-rejected", rejected);
        log.check(
            &format!("half member={member}"),
            "epsilon-supremum",
            wapp_epsilon_supremum(&witness, &labels)?,
            Relation::Le,
            BigRational::zero(),
        );
    }
    Ok(log.finish())
}

/// Majority-style fixture: `f` on two input bits, `g = f` on `L = {00, 11}`
/// and `g = 0` elsewhere, both at two path bits.
pub fn pp_fixture(r: u32) -> Result<WitnessReport> {
    let mut log = Log::new("pp-appendixD");
    let f = table(&[("00", 2), ("01", 4), ("10", 4), ("11", 2)]);
    let labels: Vec<(Bits, bool)> = f.keys().map(|w| (w.clone(), w.count_ones() != 1)).collect();
    let g: BTreeMap<Bits, i64> = labels.iter().map(|(w, m)| (w.clone(), if *m { f[w] } else { 0 })).collect();
    let (mf, mg) = (table_gap_machine(2, 2, &f)?, table_gap_machine(2, 2, &g)?);
    let witness: Vec<GapInstance> = labels
        .iter()
        .map(|(w, member)| Ok(GapInstance { w: w.clone(), member: *member, g: gap(&mg, w)?.gap }))
        .collect::<Result<_>>()?;
    log.add(check_awpp_witness(&witness, &FpFunction::GapOfInput(mf.clone()), &Thresholds::Exponent(r), "witness")?);
    let (q, qp) = (2 * mg.path_width(), 2 * mf.path_width());
    for (w, member) in &labels {
        let inst = format!("w={w}");
        let (gv, fv) = (gap(&mg, w)?.gap, gap(&mf, w)?.gap);
        let c = compile_pp_instance(&mg, &mf, w)?;
        let stats = postselect_stats(&c, &c.default_input())?;
        let pv = over_pow2(&gv * &gv, q + qp);
        let pw = over_pow2(&fv * &fv, q + qp);
        let three = int(3);
        let post = (&three * &pv + &pw) / int(4);
        log.eq(&inst, "post-closed-form", stats.p_post.to_rational(), post);
        log.eq(&inst, "cond-closed-form", stats.p_cond.clone(), &three * &pv / (&three * &pv + &pw));
        log.check(&inst, "post-lower", stats.p_post.to_rational(), Relation::Gt, rational_pow2_neg((q + qp + 2) as u32));
        if *member {
            log.check(&inst, "cond-in", stats.p_cond.clone(), Relation::Ge, pp_in_bound(r));
        } else {
            log.check(&inst, "cond-out", stats.p_cond.clone(), Relation::Le, pp_out_bound(r));
        }
        cross_check(&mut log, &inst, &c, &c.default_input(), &stats)?;
    }
    Ok(log.finish())
}

pub fn error_algebra(rs: &[u32]) -> Result<WitnessReport> {
    let mut report = WitnessReport::new();
    for &r in rs {
        report.extend(verify_error_algebra(r)?);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_names() {
        assert!(matches!(run_scenario("nope", 1), Err(PostselError::UnknownScenario(_))));
        assert!(matches!(suite("nope"), Err(PostselError::UnknownScenario(_))));
    }

    #[test]
    fn every_suite_names_registered_scenarios() {
        for s in SUITES {
            for name in suite(s).unwrap() {
                assert!(SCENARIOS.contains(&name));
            }
        }
    }

    #[test]
    fn small_scenarios_pass() {
        for report in [
            oracle_agreement(7, 10).unwrap(),
            gap_squared_random(7, 10).unwrap(),
            pair_random(7, 10).unwrap(),
            upcoup_exhaustive(2).unwrap(),
            fqp_to_exp(2).unwrap(),
            error_algebra(&[2, 3, 10]).unwrap(),
        ] {
            let failures: Vec<String> = report.failures().map(|c| c.to_string()).collect();
            assert!(failures.is_empty(), "{failures:?}");
        }
    }
}
