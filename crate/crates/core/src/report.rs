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


//! Exact verdicts: one record per checked inequality or equality.

use std::fmt::{self, Write as _};

use num_rational::BigRational;

use crate::ring::format_rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Le,
    Lt,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Eq => lhs == rhs,
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Gt => lhs > rhs,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }

    fn keyword(self) -> &'static str {
        match self {
            Relation::Eq => "eq",
            Relation::Le => "le",
            Relation::Lt => "lt",
            Relation::Ge => "ge",
            Relation::Gt => "gt",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// `lhs rel rhs`, evaluated exactly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condition {
    pub scenario: String,
    pub instance: String,
    pub condition: String,
    pub lhs: BigRational,
    pub rel: Relation,
    pub rhs: BigRational,
    pub pass: bool,
}

impl Condition {
    pub fn new(
        scenario: impl Into<String>,
        instance: impl Into<String>,
        condition: impl Into<String>,
        lhs: BigRational,
        rel: Relation,
        rhs: BigRational,
    ) -> Self {
        let pass = rel.holds(&lhs, &rhs);
        Condition {
            scenario: scenario.into(),
            instance: instance.into(),
            condition: condition.into(),
            lhs,
            rel,
            rhs,
            pass,
        }
    }

    /// The `key=value` record of `--format machine`.
    pub fn machine_line(&self) -> String {
        format!(
            "scenario={} instance={} condition={} lhs={} rel={} rhs={} pass={}",
            self.scenario,
            self.instance,
            self.condition,
            format_rational(&self.lhs),
            self.rel.keyword(),
            format_rational(&self.rhs),
            self.pass
        )
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} {}: {} {} {}",
            if self.pass { "pass" } else { "FAIL" },
            self.instance,
            self.condition,
            format_rational(&self.lhs),
            self.rel,
            format_rational(&self.rhs)
        )
    }
}

/// Per-instance verdicts; any failed condition fails the report.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessReport {
    pub conditions: Vec<Condition>,
}

impl WitnessReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, c: Condition) {
        self.conditions.push(c);
    }

    pub fn extend(&mut self, other: WitnessReport) {
        self.conditions.extend(other.conditions);
    }

    pub fn pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Condition> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    pub fn len(&self) -> usize {
        self.conditions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.conditions.is_empty()
    }

    /// Rewrites the scenario field of every condition.
    pub fn with_scenario(mut self, scenario: &str) -> Self {
        for c in &mut self.conditions {
            c.scenario = scenario.to_string();
        }
        self
    }

    pub fn to_machine(&self) -> String {
        let mut out = String::new();
        for c in &self.conditions {
            let _ = writeln!(out, "{}", c.machine_line());
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut current: Option<&str> = None;
        for c in &self.conditions {
            if current != Some(c.scenario.as_str()) {
                let _ = writeln!(out, "{}", c.scenario);
                current = Some(&c.scenario);
            }
            let _ = writeln!(out, "  {c}");
        }
        let failed = self.failures().count();
        let _ = writeln!(
            out,
            "{} conditions, {} failed: {}",
            self.len(),
            failed,
            if failed == 0 { "PASS" } else { "FAIL" }
        );
        out
    }
}
