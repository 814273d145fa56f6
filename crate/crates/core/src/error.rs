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

use thiserror::Error;

pub type Result<T, E = PostselError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PostselError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("line {line}: qubit index {index} out of range for width {width}")]
    IndexOutOfRange {
        line: usize,
        index: usize,
        width: usize,
    },

    #[error("line {line}: duplicate {what} declaration")]
    DuplicateDeclaration { line: usize, what: &'static str },

    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("gate {gate} needs {needed} borrowed qubits but only {available} are idle")]
    InsufficientAncillas {
        gate: usize,
        needed: usize,
        available: usize,
    },

    #[error("gate {0} is an unexpanded MCX macro")]
    UnexpandedMcx(usize),

    #[error("width mismatch: expected {expected} bits, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("circuit width {width} exceeds the simulator cap of {cap} qubits")]
    WidthCap { width: usize, cap: usize },

    #[error("path width {q} exceeds the enumeration cap of {cap}")]
    EnumerationCap { q: usize, cap: usize },

    #[error("postselection probability is zero")]
    ZeroPostselection,

    #[error("circuit has no {0} qubit")]
    MissingRole(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("promise violated: {0}")]
    PromiseViolation(String),

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("missing reference data: {0}")]
    MissingReference(String),

    #[error("unknown scenario {0:?}")]
    UnknownScenario(String),
}

impl PostselError {
    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        PostselError::Syntax {
            line,
            message: message.into(),
        }
    }

    /// True for errors caused by malformed input rather than a failed check.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            PostselError::Syntax { .. }
                | PostselError::IndexOutOfRange { .. }
                | PostselError::DuplicateDeclaration { .. }
                | PostselError::InvalidCircuit(_)
                | PostselError::WidthMismatch { .. }
                | PostselError::InvalidParameter(_)
                | PostselError::MissingRole(_)
                | PostselError::MissingReference(_)
                | PostselError::UnknownScenario(_)
                | PostselError::InsufficientAncillas { .. }
                | PostselError::UnexpandedMcx(_)
                | PostselError::WidthCap { .. }
                | PostselError::EnumerationCap { .. }
        )
    }
}
