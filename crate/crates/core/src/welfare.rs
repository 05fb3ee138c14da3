//! Welfare ratios of a single instance and their worst-case bounds.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::enumerate::ProfileCursor;
use crate::error::{Error, Result};
use crate::play::{full_mask, sincere_mask};
use crate::profile::{Candidate, PreferenceProfile};
use crate::ratio::Ratio;
use crate::sequence::EliminationSequence;
use crate::sweep::{exhaustive_sweep, SweepOptions};

/// Which welfare ratio to measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RatioKind {
    /// Borda-optimal candidate over the equilibrium winner.
    #[serde(rename = "AB")]
    Ab,
    /// Sincere winner over the equilibrium winner.
    #[serde(rename = "CB")]
    Cb,
}

impl fmt::Display for RatioKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RatioKind::Ab => "AB",
            RatioKind::Cb => "CB",
        })
    }
}

impl FromStr for RatioKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "AB" | "POA" => Ok(RatioKind::Ab),
            "CB" | "SR" => Ok(RatioKind::Cb),
            _ => Err(Error::Parse { line: 1, message: format!("unknown ratio mode `{s}`") }),
        }
    }
}

/// The three candidates that the welfare ratios compare, with their scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct WelfareOutcome {
    /// Lowest-id Borda maximiser.
    pub optimal: Candidate,
    pub sincere_winner: Candidate,
    pub spne_winner: Candidate,
    pub optimal_score: u64,
    pub sincere_score: u64,
    pub spne_score: u64,
}

impl WelfareOutcome {
    pub fn ratio(&self, kind: RatioKind) -> Result<Ratio> {
        let numerator = match kind {
            RatioKind::Ab => self.optimal_score,
            RatioKind::Cb => self.sincere_score,
        };
        if self.spne_score == 0 {
            return Err(Error::ZeroWelfare);
        }
        Ratio::new(numerator, self.spne_score)
    }
}

/// Precomputed turn orders for repeated evaluation of one sequence.
#[derive(Debug, Clone)]
pub(crate) struct Evaluator {
    forward: Vec<usize>,
    backward: Vec<usize>,
    scores: Vec<u64>,
}

impl Evaluator {
    pub(crate) fn new(seq: &EliminationSequence, m: usize) -> Self {
        Evaluator { forward: seq.turns().to_vec(), backward: seq.reverse().turns().to_vec(), scores: vec![0; m] }
    }

    #[inline]
    pub(crate) fn evaluate(&mut self, profile: &PreferenceProfile) -> WelfareOutcome {
        let all = full_mask(profile.candidates());
        let sincere = sincere_mask(profile, self.forward.iter().copied(), all).trailing_zeros() as usize;
        let spne = sincere_mask(profile, self.backward.iter().copied(), all).trailing_zeros() as usize;
        profile.borda_into(&mut self.scores);
        let mut optimal = 0;
        for (c, &s) in self.scores.iter().enumerate() {
            if s > self.scores[optimal] {
                optimal = c;
            }
        }
        WelfareOutcome {
            optimal: Candidate(optimal),
            sincere_winner: Candidate(sincere),
            spne_winner: Candidate(spne),
            optimal_score: self.scores[optimal],
            sincere_score: self.scores[sincere],
            spne_score: self.scores[spne],
        }
    }
}

pub fn welfare_outcome(profile: &PreferenceProfile, seq: &EliminationSequence) -> Result<WelfareOutcome> {
    seq.validate(profile.voters(), profile.candidates())?;
    Ok(Evaluator::new(seq, profile.candidates()).evaluate(profile))
}

/// Maximum Borda score over the Borda score of the equilibrium winner.
pub fn ratio_ab(profile: &PreferenceProfile, seq: &EliminationSequence) -> Result<Ratio> {
    welfare_outcome(profile, seq)?.ratio(RatioKind::Ab)
}

/// Borda score of the sincere winner over that of the equilibrium winner.
pub fn ratio_cb(profile: &PreferenceProfile, seq: &EliminationSequence) -> Result<Ratio> {
    welfare_outcome(profile, seq)?.ratio(RatioKind::Cb)
}

fn check_bound_domain(n: usize, m: usize, o_max: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfDomain(format!("the closed forms need n >= 2, got n = {n}")));
    }
    if m < 2 {
        return Err(Error::OutOfDomain(format!("the closed forms need m >= 2, got m = {m}")));
    }
    if o_max < 1 || o_max > m - 1 {
        return Err(Error::OutOfDomain(format!("o_max = {o_max} must lie in 1..={}", m - 1)));
    }
    Ok(())
}

/// Price of anarchy `(o_max - 1 + (n-1)(m-1)) / (m-1)`.
pub fn poa_formula(n: usize, m: usize, o_max: usize) -> Result<Ratio> {
    check_bound_domain(n, m, o_max)?;
    let (n, m, o) = (n as u64, m as u64, o_max as u64);
    Ratio::new(o - 1 + (n - 1) * (m - 1), m - 1)
}

/// Upper bound on the sincerity ratio `(o_max + (n-1)(m-1)) / m`.
pub fn sr_upper_bound(n: usize, m: usize, o_max: usize) -> Result<Ratio> {
    check_bound_domain(n, m, o_max)?;
    let (n, m, o) = (n as u64, m as u64, o_max as u64);
    Ratio::new(o + (n - 1) * (m - 1), m)
}

/// The closed-form bound matching `kind` for a sequence.
pub fn bound_for(kind: RatioKind, seq: &EliminationSequence, n: usize, m: usize) -> Result<Ratio> {
    let o_max = seq.occurrences(n).o_max;
    match kind {
        RatioKind::Ab => poa_formula(n, m, o_max),
        RatioKind::Cb => sr_upper_bound(n, m, o_max),
    }
}

/// Exact maximum of a ratio over every profile, with a witness.
#[derive(Debug, Clone, Serialize)]
pub struct WorstCaseResult {
    pub value: Ratio,
    pub witness: PreferenceProfile,
    pub population_size: u128,
}

/// Maximises `kind` over all profiles by exhaustive enumeration. With
/// `fix_first`, voter 0 is pinned to the identity ranking; both ratios are
/// invariant under relabelling candidates so the maximum is unchanged.
/// Among maximisers the lexicographically smallest profile is returned.
pub fn exact_worst_ratio(
    seq: &EliminationSequence,
    n: usize,
    m: usize,
    kind: RatioKind,
    options: &SweepOptions,
) -> Result<WorstCaseResult> {
    let sweep = exhaustive_sweep(seq, n, m, options)?;
    let tally = sweep.tally(kind);
    let (value, index) = tally.max().ok_or(Error::OutOfDomain("empty population".into()))?;
    let mut cursor = ProfileCursor::new(n, m, options.fix_first, index, 1)?;
    let witness = cursor.advance().cloned().expect("witness index in range");
    Ok(WorstCaseResult { value, witness, population_size: sweep.population })
}
