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

use std::fmt;
use std::str::FromStr;

use crate::error::PostselError;

/// A classical bitstring. Character `i` of the text form is bit `i`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bits(Vec<bool>);

impl Bits {
    pub fn new(bits: Vec<bool>) -> Self {
        Bits(bits)
    }

    pub fn zeros(n: usize) -> Self {
        Bits(vec![false; n])
    }

    pub fn ones(n: usize) -> Self {
        Bits(vec![true; n])
    }

    /// `n` bits of `value`, most significant bit first.
    pub fn from_value(value: u64, n: usize) -> Self {
        Bits((0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect())
    }

    /// Integer value, most significant bit first.
    pub fn value(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    /// Packs bit `i` into bit `i` of the result.
    pub fn to_mask(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> bool {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.0
    }

    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b).count()
    }

    /// All bitstrings of length `n` in increasing numeric order.
    pub fn all(n: usize) -> impl Iterator<Item = Bits> {
        (0..1u64 << n).map(move |v| Bits::from_value(v, n))
    }

    pub fn concat(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().chain(other.0.iter()).copied().collect())
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for Bits {
    type Err = PostselError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(PostselError::InvalidParameter(format!(
                    "bitstring {s:?} contains {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Bits)
    }
}

impl From<Vec<bool>> for Bits {
    fn from(v: Vec<bool>) -> Self {
        Bits(v)
    }
}
