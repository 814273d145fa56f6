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


//! Exact simulation of postselected Hadamard+Toffoli circuits and the
//! counting-class constructions built on them.

pub mod bits;
pub mod circuit;
pub mod classical;
pub mod constructions;
pub mod counting;
pub mod error;
pub mod harness;
pub mod pathsum;
pub mod random;
pub mod report;
pub mod ring;
pub mod sim;
pub mod witness;

pub use bits::Bits;
pub use circuit::{expand_mcx, parse_circuit, serialize_circuit, Ancilla, Circuit, Control, Gate, GateKind};
pub use error::{PostselError, Result};
pub use pathsum::path_sum;
pub use ring::{amp_square, dy_cmp, sd_add, sd_mul, DyadicRational, PathAmplitude, SqrtDyadic};
pub use sim::{measure_prob, postselect_stats, run, PostselStats, QuantumState};

pub use classical::{build_upcoup, check_wapp_witness, run_ptm, wapp_witness, ProbTM, WappWitness};
pub use constructions::{
    compile_app, compile_fqp_to_exp, compile_gap_squared, compile_pair_postsel, compile_pp_instance, compile_wpp,
    gadget_biased_flag, mix_with_constant, rescale_postsel, verify_error_algebra, CircuitBuilder, ConstructionParams,
    ScaleMode,
};
pub use counting::{gap, make_gap_machine, parse_machine, serialize_machine, FpFunction, GapValue, PredicateCircuit};
pub use harness::{run_scenario, run_suite, HarnessConfig};
pub use report::{Condition, Relation, WitnessReport};
pub use witness::{check_awpp_witness, classify_postsel_profile, Profile, ProfileParams, Thresholds};
