//! Playing the elimination game: sincere, strategic and mixed behaviour.
//!
//! Strategic play is resolved through the reversal characterization: the
//! subgame-perfect outcome equals the winner of sincere play on the reversed
//! sequence. [`crate::oracle`] provides an independent game-tree solver.

use std::collections::BTreeSet;

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::profile::{Candidate, PreferenceProfile};
use crate::sequence::EliminationSequence;

/// Which semantics a trace carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlayMode {
    /// Every voter eliminates her worst remaining candidate.
    Sincere,
    /// Sincere play on the reversed sequence; only the winner is the
    /// equilibrium outcome, the steps are not an equilibrium path.
    ReversedSincere,
    /// An equilibrium path found by backward induction on the game tree.
    BackwardInduction,
    /// Sincere subsequence first, then the reversed strategic subsequence.
    Mixed,
}

impl PlayMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PlayMode::Sincere => "sincere",
            PlayMode::ReversedSincere => "reversed-sincere",
            PlayMode::BackwardInduction => "backward-induction",
            PlayMode::Mixed => "mixed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Step {
    pub voter: usize,
    pub eliminated: Candidate,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameTrace {
    pub mode: PlayMode,
    pub steps: Vec<Step>,
    pub winner: Candidate,
}

impl GameTrace {
    /// JSON form with 1-based voters and candidate labels.
    pub fn to_json(&self, profile: &PreferenceProfile) -> Value {
        let steps: Vec<Value> = self
            .steps
            .iter()
            .map(|s| json!({"voter": s.voter + 1, "eliminated": profile.label(s.eliminated)}))
            .collect();
        json!({
            "mode": self.mode.as_str(),
            "steps": steps,
            "winner": profile.label(self.winner),
        })
    }
}

/// Voters that play sincerely; every other voter is strategic.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BehaviorAssignment {
    pub sincere: BTreeSet<usize>,
}

impl BehaviorAssignment {
    pub fn new(sincere: impl IntoIterator<Item = usize>) -> Self {
        BehaviorAssignment { sincere: sincere.into_iter().collect() }
    }

    pub fn all_sincere(n: usize) -> Self {
        Self::new(0..n)
    }

    pub fn all_strategic() -> Self {
        Self::default()
    }

    pub fn is_sincere(&self, voter: usize) -> bool {
        self.sincere.contains(&voter)
    }
}

#[inline]
pub(crate) fn full_mask(m: usize) -> u64 {
    if m == 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// Worst remaining candidate of `voter` among the set bits of `remaining`.
#[inline]
pub(crate) fn worst_remaining(profile: &PreferenceProfile, voter: usize, remaining: u64) -> usize {
    profile
        .ranking_raw(voter)
        .iter()
        .rev()
        .map(|&c| c as usize)
        .find(|&c| remaining & (1 << c) != 0)
        .expect("at least one remaining candidate")
}

/// Runs sincere eliminations for `turns` starting from `remaining`, returning
/// the final remaining set.
#[inline]
pub(crate) fn sincere_mask<I>(profile: &PreferenceProfile, turns: I, mut remaining: u64) -> u64
where
    I: IntoIterator<Item = usize>,
{
    for voter in turns {
        remaining &= !(1 << worst_remaining(profile, voter, remaining));
    }
    remaining
}

fn run_sincere<I>(profile: &PreferenceProfile, turns: I, remaining: &mut u64, steps: &mut Vec<Step>)
where
    I: IntoIterator<Item = usize>,
{
    for voter in turns {
        let c = worst_remaining(profile, voter, *remaining);
        *remaining &= !(1 << c);
        steps.push(Step { voter, eliminated: Candidate(c) });
    }
}

fn finish(mode: PlayMode, steps: Vec<Step>, remaining: u64) -> GameTrace {
    debug_assert_eq!(remaining.count_ones(), 1);
    GameTrace { mode, steps, winner: Candidate(remaining.trailing_zeros() as usize) }
}

/// Every acting voter eliminates her lowest-ranked remaining candidate.
pub fn sincere_play(profile: &PreferenceProfile, seq: &EliminationSequence) -> Result<GameTrace> {
    seq.validate(profile.voters(), profile.candidates())?;
    let mut remaining = full_mask(profile.candidates());
    let mut steps = Vec::with_capacity(seq.len());
    run_sincere(profile, seq.turns().iter().copied(), &mut remaining, &mut steps);
    Ok(finish(PlayMode::Sincere, steps, remaining))
}

/// Subgame-perfect outcome: sincere play on the reversed sequence.
pub fn spne_outcome(profile: &PreferenceProfile, seq: &EliminationSequence) -> Result<GameTrace> {
    let mut trace = sincere_play(profile, &seq.reverse())?;
    trace.mode = PlayMode::ReversedSincere;
    Ok(trace)
}

/// Outcome when the voters in `behavior` play sincerely and the rest play
/// strategically: the sincere subsequence runs first in its original order,
/// then the strategic subsequence runs sincerely in reverse.
pub fn mixed_play(
    profile: &PreferenceProfile,
    seq: &EliminationSequence,
    behavior: &BehaviorAssignment,
) -> Result<GameTrace> {
    seq.validate(profile.voters(), profile.candidates())?;
    if let Some(&voter) = behavior.sincere.iter().find(|&&v| v >= profile.voters()) {
        return Err(Error::InvalidVoter { voter, voters: profile.voters() });
    }
    let (sincere, strategic): (Vec<usize>, Vec<usize>) = seq.turns().iter().partition(|&&v| behavior.is_sincere(v));
    let mut remaining = full_mask(profile.candidates());
    let mut steps = Vec::with_capacity(seq.len());
    run_sincere(profile, sincere, &mut remaining, &mut steps);
    run_sincere(profile, strategic.into_iter().rev(), &mut remaining, &mut steps);
    Ok(finish(PlayMode::Mixed, steps, remaining))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn profile(votes: &[&str]) -> PreferenceProfile {
        PreferenceProfile::from_letters(votes).unwrap()
    }

    fn seq(s: &str) -> EliminationSequence {
        s.parse().unwrap()
    }

    fn label(p: &PreferenceProfile, t: &GameTrace) -> String {
        p.label(t.winner)
    }

    #[test]
    fn sincere_example_with_five_candidates() {
        let p = profile(&["abcde", "edcba", "debca"]);
        let t = sincere_play(&p, &seq("1,2,3,1")).unwrap();
        let eliminated: String = t.steps.iter().map(|s| p.label(s.eliminated)).collect();
        assert_eq!(eliminated, "eacd");
        assert_eq!(t.steps.iter().map(|s| s.voter).collect::<Vec<_>>(), vec![0, 1, 2, 0]);
        assert_eq!(label(&p, &t), "b");
    }

    #[test]
    fn sincere_and_strategic_differ() {
        let p = profile(&["abcd", "cbad", "cadb"]);
        assert_eq!(label(&p, &sincere_play(&p, &seq("123")).unwrap()), "c");
        let s = spne_outcome(&p, &seq("123")).unwrap();
        assert_eq!(s.mode, PlayMode::ReversedSincere);
        assert_eq!(label(&p, &s), "a");
    }

    #[test]
    fn lone_voter_keeps_her_favourite() {
        let p = profile(&["abc"]);
        assert_eq!(label(&p, &sincere_play(&p, &seq("1,1")).unwrap()), "a");
    }

    #[test]
    fn length_mismatch_is_reported() {
        let p = profile(&["abcd", "cbad", "cadb"]);
        assert_eq!(sincere_play(&p, &seq("12")), Err(Error::SequenceLengthMismatch { expected: 3, found: 2 }));
        assert!(spne_outcome(&p, &seq("1231")).is_err());
    }

    #[test]
    fn palindromic_sequences_give_the_sincere_winner() {
        let p = profile(&["abcdefg", "gfedcba", "dcebafg"]);
        let s = seq("123321");
        assert_eq!(sincere_play(&p, &s).unwrap().winner, spne_outcome(&p, &s).unwrap().winner);
    }

    #[test]
    fn spne_on_reversed_sequence_is_sincere_on_original() {
        let p = profile(&["abcde", "edcba", "debca"]);
        let sincere = sincere_play(&p, &seq("1231")).unwrap().winner;
        assert_eq!(spne_outcome(&p, &seq("1321")).unwrap().winner, sincere);
    }

    #[test]
    fn mixed_play_examples() {
        let p = profile(&["abcd", "cbad", "bcad"]);
        let t = mixed_play(&p, &seq("123"), &BehaviorAssignment::new([0, 2])).unwrap();
        let eliminated: String = t.steps.iter().map(|s| p.label(s.eliminated)).collect();
        assert_eq!(eliminated, "dab");
        assert_eq!(label(&p, &t), "c");
        // Everyone sincere except voter 2: voter 2 playing sincerely would elect b.
        let all = mixed_play(&p, &seq("123"), &BehaviorAssignment::all_sincere(3)).unwrap();
        assert_eq!(label(&p, &all), "b");

        let p = profile(&["abcdef", "edcbaf", "fdebca", "afecdb"]);
        let b = BehaviorAssignment::new([1, 3]);
        let t = mixed_play(&p, &seq("12344"), &b).unwrap();
        let eliminated: String = t.steps.iter().map(|s| p.label(s.eliminated)).collect();
        assert_eq!(eliminated, "fbdae");
        assert_eq!(label(&p, &t), "c");
        for other in ["24413", "24143", "24134"] {
            assert_eq!(label(&p, &mixed_play(&p, &seq(other), &b).unwrap()), "c");
        }
    }

    #[test]
    fn mixed_play_degenerate_partitions() {
        let p = profile(&["abcde", "edcba", "debca"]);
        let s = seq("1231");
        let all_sincere = mixed_play(&p, &s, &BehaviorAssignment::all_sincere(3)).unwrap();
        assert_eq!(all_sincere.winner, sincere_play(&p, &s).unwrap().winner);
        let all_strategic = mixed_play(&p, &s, &BehaviorAssignment::all_strategic()).unwrap();
        assert_eq!(all_strategic.winner, spne_outcome(&p, &s).unwrap().winner);
        assert_eq!(mixed_play(&p, &s, &BehaviorAssignment::new([5])), Err(Error::InvalidVoter { voter: 5, voters: 3 }));
    }

    #[test]
    fn trace_json_shape() {
        let p = profile(&["abc", "cba"]);
        let t = sincere_play(&p, &seq("12")).unwrap();
        assert_eq!(
            t.to_json(&p),
            json!({"mode": "sincere",
                   "steps": [{"voter": 1, "eliminated": "c"}, {"voter": 2, "eliminated": "a"}],
                   "winner": "b"})
        );
    }
}
