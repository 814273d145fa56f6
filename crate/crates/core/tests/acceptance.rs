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


//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use postsel::harness::{
    awpp_backward, error_algebra, fqp_to_exp, gap_squared_random, oracle_agreement, pair_random, pp_fixture,
    rescale_random, run_suite, upcoup_exhaustive, wpp_fixture, HarnessConfig,
};
use postsel::report::WitnessReport;
use postsel::ring::{rational, rational_pow2_neg};
use postsel::constructions::{pp_in_bound, pp_out_bound};
use postsel::Result;

const SEED: u64 = 20_240_101;

type Check = (&'static str, Box<dyn FnOnce() -> (Outcome, Duration)>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn judged(report: Result<WitnessReport>, limit: Option<Duration>, elapsed: Duration) -> Outcome {
    match report {
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
        Ok(r) => {
            let mut detail = format!("{} conditions", r.len());
            let mut pass = r.pass() && !r.is_empty();
            if let Some(c) = r.failures().next() {
                detail.push_str(&format!(", first failure: {c}"));
            }
            if let Some(limit) = limit {
                if elapsed > limit {
                    pass = false;
                    detail.push_str(&format!(", over the {}s budget", limit.as_secs()));
                }
            }
            Outcome { pass, detail }
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Result<WitnessReport>) -> (Outcome, Duration) {
    let start = Instant::now();
    let report = f();
    let elapsed = start.elapsed();
    (judged(report, limit, elapsed), elapsed)
}

fn determinism() -> (Outcome, Duration) {
    let start = Instant::now();
    let cfg = HarnessConfig { seed: 42, r: None };
    let runs: Result<Vec<String>> = (0..2).map(|_| run_suite("all", &cfg).map(|r| r.to_machine())).collect();
    let elapsed = start.elapsed();
    let outcome = match runs {
        Err(e) => Outcome { pass: false, detail: format!("error: {e}") },
        Ok(runs) => {
            let same = runs[0] == runs[1];
            let all_pass = !runs[0].contains("pass=false");
            let fast = elapsed < Duration::from_secs(300);
            Outcome {
                pass: same && all_pass && fast,
                detail: format!(
                    "{} report lines, identical={same}, all conditions pass={all_pass}, two runs in {:.2}s",
                    runs[0].lines().count(),
                    elapsed.as_secs_f64()
                ),
            }
        }
    };
    (outcome, elapsed)
}

fn main() -> ExitCode {
    let minute = Some(Duration::from_secs(60));
    let criteria: Vec<Check> = vec![
        ("oracle equivalence on 120 random circuits", Box::new(move || timed(minute, || oracle_agreement(SEED, 120)))),
        ("gap-squared probability on 50 random machines", Box::new(|| timed(None, || gap_squared_random(SEED, 50)))),
        ("pair statistics on 50 random machine pairs", Box::new(|| timed(None, || pair_random(SEED, 50)))),
        ("counting witness from 24 random bounded circuits", Box::new(|| timed(None, || awpp_backward(SEED, 24, 3, 3)))),
        ("error algebra for r in 2..=16", Box::new(|| timed(None, || error_algebra(&(2..=16).collect::<Vec<_>>())))),
        ("mix and rescale for every f with h <= 6", Box::new(|| timed(None, || fqp_to_exp(6)))),
        ("rescaling on 20 random circuits", Box::new(|| timed(None, || rescale_random(SEED, 20)))),
        ("exact-weight pair on promise fixtures", Box::new(|| timed(None, wpp_fixture))),
        ("unambiguous pairs for q <= 6", Box::new(|| timed(None, || upcoup_exhaustive(6)))),
        (
            "majority fixtures at r = 4",
            Box::new(|| {
                let (mut outcome, elapsed) = timed(None, || pp_fixture(4));
                let bounds = pp_in_bound(4) == rational(1, 2) + rational(1, 22) - rational(12, 11) * rational_pow2_neg(4)
                    && pp_out_bound(4) == rational(3, 1) * rational_pow2_neg(8);
                outcome.pass &= bounds;
                outcome.detail.push_str(&format!(", bounds instantiated={bounds}"));
                (outcome, elapsed)
            }),
        ),
        ("determinism of the full suite", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let (outcome, elapsed) = run();
        if !outcome.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {}: {} ({}, {:.2}s)",
            i + 1,
            if outcome.pass { "PASS" } else { "FAIL" },
            name,
            outcome.detail,
            elapsed.as_secs_f64()
        );
    }
    println!("{} of 11 criteria pass", 11 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
