//! Elimination sequences and their occurrence statistics.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// The order in which voters eliminate candidates, one turn per eliminated
/// candidate. Voters are 0-based; text forms are 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EliminationSequence {
    turns: Vec<usize>,
}

impl EliminationSequence {
    pub fn new(turns: Vec<usize>) -> Self {
        EliminationSequence { turns }
    }

    /// Builds a sequence from 1-based voter numbers, as written in tables.
    pub fn from_one_based(turns: &[usize]) -> Result<Self> {
        turns
            .iter()
            .map(|&t| {
                t.checked_sub(1).ok_or_else(|| Error::Parse { line: 1, message: "voter numbers are 1-based".into() })
            })
            .collect::<Result<Vec<_>>>()
            .map(EliminationSequence::new)
    }

    pub fn turns(&self) -> &[usize] {
        &self.turns
    }

    pub fn len(&self) -> usize {
        self.turns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.turns.is_empty()
    }

    /// Checks the sequence against a game with `n` voters and `m` candidates.
    pub fn validate(&self, n: usize, m: usize) -> Result<()> {
        let expected = m.saturating_sub(1);
        if self.turns.len() != expected {
            return Err(Error::SequenceLengthMismatch { expected, found: self.turns.len() });
        }
        match self.turns.iter().find(|&&v| v >= n) {
            Some(&voter) => Err(Error::InvalidVoter { voter, voters: n }),
            None => Ok(()),
        }
    }

    pub fn reverse(&self) -> Self {
        EliminationSequence { turns: self.turns.iter().rev().copied().collect() }
    }

    pub fn is_palindromic(&self) -> bool {
        self.turns.iter().eq(self.turns.iter().rev())
    }

    /// Per-voter turn counts for `n` voters. Voters beyond the largest index in
    /// the sequence get a count of zero.
    pub fn occurrences(&self, n: usize) -> OccurrenceTable {
        let size = n.max(self.turns.iter().map(|&v| v + 1).max().unwrap_or(0));
        let mut counts = vec![0; size];
        for &v in &self.turns {
            counts[v] += 1;
        }
        let o_max = counts.iter().copied().max().unwrap_or(0);
        OccurrenceTable { counts, o_max }
    }

    /// Smallest voter count that makes the sequence valid.
    pub fn min_voters(&self) -> usize {
        self.turns.iter().map(|&v| v + 1).max().unwrap_or(1)
    }

    /// Digits-only form such as `1112221` when every voter number is a single
    /// digit, otherwise 1-based numbers joined by `-`.
    pub fn compact(&self) -> String {
        if self.turns.iter().all(|&v| v < 9) {
            self.turns.iter().map(|v| char::from(b'1' + *v as u8)).collect()
        } else {
            self.turns.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join("-")
        }
    }
}

/// Turn counts per voter and their maximum.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OccurrenceTable {
    pub counts: Vec<usize>,
    pub o_max: usize,
}

impl OccurrenceTable {
    /// Lowest-indexed voter with the maximum count.
    pub fn most_frequent(&self) -> Option<usize> {
        self.counts.iter().position(|&c| c == self.o_max && c > 0)
    }
}

impl fmt::Display for EliminationSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.turns.iter().map(|v| (v + 1).to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

/// Accepts comma-separated 1-based voter numbers (`1,2,3,1`). A bare run of
/// digits such as `1112221` is read one voter per digit.
impl FromStr for EliminationSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_err = |message: String| Error::Parse { line: 1, message };
        if s.is_empty() {
            return Ok(EliminationSequence::new(Vec::new()));
        }
        let numbers: Vec<usize> = if s.contains(',') || s.contains('-') {
            s.split([',', '-'])
                .map(|t| t.trim().parse::<usize>().map_err(|_| parse_err(format!("`{t}` is not a voter number"))))
                .collect::<Result<_>>()?
        } else {
            s.chars()
                .map(|ch| {
                    ch.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| parse_err(format!("`{ch}` is not a voter number")))
                })
                .collect::<Result<_>>()?
        };
        if numbers.contains(&0) {
            return Err(parse_err("voter numbers are 1-based".into()));
        }
        Ok(EliminationSequence::new(numbers.into_iter().map(|v| v - 1).collect()))
    }
}

impl Serialize for EliminationSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
