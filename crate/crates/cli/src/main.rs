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


//! `postsel`: simulate, compile and verify postselected circuits.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;

use postsel::constructions::{
    compile_app, compile_fqp_to_exp, compile_gap_squared, compile_pair_postsel, compile_pp_instance, compile_wpp,
    pp_in_bound, pp_out_bound, rescale_postsel, ScaleMode,
};
use postsel::counting::{parse_machine, FpFunction, PredicateCircuit};
use postsel::harness::{run_suite, HarnessConfig};
use postsel::ring::DyadicRational;
use postsel::sim::{measure_prob, run};
use postsel::{parse_circuit, path_sum, serialize_circuit, Bits, Circuit, PostselError, PostselStats};

#[derive(Parser)]
#[command(name = "postsel", version, about = "Exact simulation of postselected Hadamard+Toffoli circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Report {
    Text,
    #[value(alias = "machine")]
    MachineReadable,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Machine,
}

#[derive(Clone, Copy, ValueEnum)]
enum Construction {
    Gapsq,
    Pair,
    Wpp,
    App,
    Fqp2exp,
    Rescale,
    Pp,
}

#[derive(Subcommand)]
enum Command {
    /// Run a circuit exactly and print its output statistics.
    Simulate {
        #[arg(long)]
        circuit: PathBuf,
        /// Input bits, qubit 0 first; defaults to the declared ancilla values.
        #[arg(long)]
        input: Option<String>,
        /// Also evaluate every probability by path sum and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "text")]
        report: Report,
    },
    /// Compile machines (or a circuit) into a postselected circuit.
    Compile {
        #[arg(long, value_enum)]
        construction: Construction,
        #[arg(long)]
        machine1: Option<PathBuf>,
        #[arg(long)]
        machine2: Option<PathBuf>,
        /// Source circuit for fqp2exp and rescale.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Input bits the machines are specialized to.
        #[arg(long, default_value = "")]
        input: String,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
        #[arg(long)]
        f: Option<BigInt>,
        #[arg(long)]
        h: Option<usize>,
        #[arg(long)]
        r: Option<u32>,
        /// Denominator tables (`bits value` lines) scaling machine2 and
        /// machine1 respectively for pair and wpp.
        #[arg(long)]
        f1_table: Option<PathBuf>,
        #[arg(long)]
        f2_table: Option<PathBuf>,
        /// Length-only denominator machines for app.
        #[arg(long)]
        f1_machine: Option<PathBuf>,
        #[arg(long)]
        f2_machine: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a probability by path sum: `g / 2^m`.
    Oracle {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long)]
        input: Option<String>,
        /// Constraints `qubit=value`; defaults to the output qubit being 1.
        #[arg(long = "constraint", value_parser = parse_constraint)]
        constraints: Vec<(usize, bool)>,
    },
    /// Run a verification suite and report every condition.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        r: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

fn parse_constraint(s: &str) -> Result<(usize, bool), String> {
    let (q, v) = s.split_once('=').ok_or("expected qubit=value")?;
    let q = q.trim().parse().map_err(|_| format!("bad qubit {q:?}"))?;
    match v.trim() {
        "0" => Ok((q, false)),
        "1" => Ok((q, true)),
        _ => Err(format!("bad value {v:?}")),
    }
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_circuit(path: &Path) -> anyhow::Result<Circuit> {
    parse_circuit(&read(path)?).with_context(|| path.display().to_string())
}

fn load_machine(path: &Path) -> anyhow::Result<PredicateCircuit> {
    parse_machine(&read(path)?).with_context(|| path.display().to_string())
}

fn required<'a>(v: &'a Option<PathBuf>, flag: &str) -> anyhow::Result<&'a Path> {
    v.as_deref()
        .ok_or_else(|| PostselError::InvalidParameter(format!("--{flag} is required")).into())
}

fn parse_bits(s: &str) -> anyhow::Result<Bits> {
    if s.is_empty() {
        return Ok(Bits::new(Vec::new()));
    }
    Ok(s.parse::<Bits>()?)
}

fn input_for(circuit: &Circuit, input: &Option<String>) -> anyhow::Result<Bits> {
    match input {
        Some(s) => parse_bits(s),
        None => Ok(circuit.default_input()),
    }
}

fn prob_line(report: Report, name: &str, p: &DyadicRational) -> String {
    match report {
        Report::Text => format!("{name} = {p} ({:.6})", p.to_f64()),
        Report::MachineReadable => format!("{name}={p}"),
    }
}

/// A reported probability: label, constraints, value.
type Probe = (String, Vec<(usize, bool)>, DyadicRational);

fn simulate(path: &Path, input: &Option<String>, oracle: bool, report: Report) -> anyhow::Result<bool> {
    let circuit = load_circuit(path)?;
    let input = input_for(&circuit, input)?;
    let state = run(&*postsel::sim::prepared(&circuit)?, &input)?;
    let mut lines = Vec::new();
    let mut probes: Vec<Probe> = Vec::new();
    if let Some(o) = circuit.output() {
        probes.push(("P(o=1)".into(), vec![(o, true)], measure_prob(&state, o, true)));
    }
    if let Some(p) = circuit.postselect() {
        let post = measure_prob(&state, p, true);
        probes.push(("P(p=1)".into(), vec![(p, true)], post.clone()));
        if let Some(o) = circuit.output() {
            let joint = state.joint_prob(&[(o, true), (p, true)]);
            probes.push(("P(o=1,p=1)".into(), vec![(o, true), (p, true)], joint.clone()));
            match PostselStats::from_probabilities(post, joint) {
                Ok(stats) => lines.push(match report {
                    Report::Text => format!("P(o=1|p=1) = {}", postsel::ring::format_rational(&stats.p_cond)),
                    Report::MachineReadable => format!("P(o=1|p=1)={}", postsel::ring::format_rational(&stats.p_cond)),
                }),
                Err(_) => lines.push(match report {
                    Report::Text => "P(o=1|p=1) undefined: P(p=1) = 0".into(),
                    Report::MachineReadable => "P(o=1|p=1)=undefined".into(),
                }),
            }
        }
    }
    let mut ok = true;
    let mut out = Vec::new();
    if let Report::Text = report {
        out.push(format!("width {}, {} Hadamards, {} basis states in support", circuit.width(), circuit.h_count(), state.support_len()));
    }
    for (name, constraints, p) in &probes {
        out.push(prob_line(report, name, p));
        if oracle {
            let (g, m) = path_sum(&circuit, &input, constraints)?;
            let o = DyadicRational::new(g, m);
            let agree = &o == p;
            ok &= agree;
            out.push(match report {
                Report::Text => format!("  path sum {o}: {}", if agree { "agrees" } else { "MISMATCH" }),
                Report::MachineReadable => format!("oracle {name}={o} agree={agree}"),
            });
        }
    }
    out.extend(lines);
    println!("{}", out.join("\n"));
    Ok(ok)
}

fn table_fn(path: &Path) -> anyhow::Result<FpFunction> {
    FpFunction::parse_table(&read(path)?, 64).with_context(|| path.display().to_string())
}

#[allow(clippy::too_many_arguments)]
fn compile(
    construction: Construction,
    machine1: &Option<PathBuf>,
    machine2: &Option<PathBuf>,
    circuit: &Option<PathBuf>,
    input: &str,
    k: usize,
    t: usize,
    f: &Option<BigInt>,
    h: Option<usize>,
    r: Option<u32>,
    tables: (&Option<PathBuf>, &Option<PathBuf>),
    lengths: (&Option<PathBuf>, &Option<PathBuf>),
) -> anyhow::Result<Circuit> {
    let w = parse_bits(input)?;
    let pair = || -> anyhow::Result<(PredicateCircuit, PredicateCircuit)> {
        Ok((load_machine(required(machine1, "machine1")?)?, load_machine(required(machine2, "machine2")?)?))
    };
    let scale = || -> anyhow::Result<ScaleMode> {
        match tables {
            (None, None) => Ok(ScaleMode::None),
            (Some(a), Some(b)) => Ok(ScaleMode::FpOfInput(table_fn(a)?, table_fn(b)?)),
            _ => Err(PostselError::InvalidParameter("give both --f1-table and --f2-table".into()).into()),
        }
    };
    let c = match construction {
        Construction::Gapsq => compile_gap_squared(&load_machine(required(machine1, "machine1")?)?, &w)?,
        Construction::Pair => {
            let (m1, m2) = pair()?;
            compile_pair_postsel(&m1, &m2, &w, k, &scale()?)?
        }
        Construction::Wpp => {
            let (m1, m2) = pair()?;
            compile_wpp(&m1, &m2, &w, &scale()?)?
        }
        Construction::App => {
            let (m1, m2) = pair()?;
            let f1 = load_machine(required(lengths.0, "f1-machine")?)?;
            let f2 = load_machine(required(lengths.1, "f2-machine")?)?;
            compile_app(&m1, &m2, &f1, &f2, &w, k)?
        }
        Construction::Fqp2exp => {
            let v = load_circuit(required(circuit, "circuit")?)?;
            let f = f.clone().ok_or_else(|| PostselError::InvalidParameter("--f is required".into()))?;
            let h = h.ok_or_else(|| PostselError::InvalidParameter("--h is required".into()))?;
            compile_fqp_to_exp(&v, &f, h)?
        }
        Construction::Rescale => rescale_postsel(&load_circuit(required(circuit, "circuit")?)?, t)?,
        Construction::Pp => {
            let (mg, mf) = pair()?;
            if let Some(r) = r {
                eprintln!(
                    "conditional bounds at r={r}: members >= {}, others <= {}",
                    postsel::ring::format_rational(&pp_in_bound(r)),
                    postsel::ring::format_rational(&pp_out_bound(r))
                );
            }
            compile_pp_instance(&mg, &mf, &w)?
        }
    };
    Ok(c)
}

fn oracle(path: &Path, input: &Option<String>, constraints: &[(usize, bool)]) -> anyhow::Result<bool> {
    let circuit = load_circuit(path)?;
    let input = input_for(&circuit, input)?;
    let constraints = if constraints.is_empty() {
        vec![(circuit.output().ok_or(PostselError::MissingRole("output"))?, true)]
    } else {
        constraints.to_vec()
    };
    let (g, m) = path_sum(&circuit, &input, &constraints)?;
    let p = DyadicRational::new(g.clone(), m);
    let state = run(&*postsel::sim::prepared(&circuit)?, &input)?;
    let sim = state.joint_prob(&constraints);
    println!("g = {g}\nm = {m}\nP = {p}\nsimulator = {sim}");
    Ok(p == sim)
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Simulate { circuit, input, oracle, report } => simulate(&circuit, &input, oracle, report),
        Command::Compile {
            construction,
            machine1,
            machine2,
            circuit,
            input,
            k,
            t,
            f,
            h,
            r,
            f1_table,
            f2_table,
            f1_machine,
            f2_machine,
            output,
        } => {
            let c = compile(
                construction,
                &machine1,
                &machine2,
                &circuit,
                &input,
                k,
                t,
                &f,
                h,
                r,
                (&f1_table, &f2_table),
                (&f1_machine, &f2_machine),
            )?;
            let text = serialize_circuit(&c);
            match output {
                Some(path) => fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?,
                None => print!("{text}"),
            }
            Ok(true)
        }
        Command::Oracle { circuit, input, constraints } => oracle(&circuit, &input, &constraints),
        Command::Verify { suite, seed, r, format } => {
            let report = run_suite(&suite, &HarnessConfig { seed, r })?;
            match format {
                Format::Text => print!("{}", report.to_text()),
                Format::Machine => print!("{}", report.to_machine()),
            }
            Ok(report.pass())
        }
    }
}

/// Input errors (unreadable or malformed files, bad flags, caps) exit 2;
/// a construction refusing its fixture exits 1.
fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<PostselError>() {
        Some(e) if !e.is_input_error() => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
