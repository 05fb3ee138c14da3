//! Full game-tree backward induction, used to cross-check the reversal
//! characterization of the equilibrium outcome.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::play::{full_mask, GameTrace, PlayMode, Step};
use crate::profile::{Candidate, PreferenceProfile};
use crate::sequence::EliminationSequence;

pub const DEFAULT_MAX_CANDIDATES: usize = 10;

/// Priority among payoff-equivalent eliminations: the candidate appearing
/// first is eliminated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TieBreak {
    order: Vec<usize>,
}

impl TieBreak {
    /// Lowest candidate id first.
    pub fn ascending(m: usize) -> Self {
        TieBreak { order: (0..m).collect() }
    }

    pub fn descending(m: usize) -> Self {
        TieBreak { order: (0..m).rev().collect() }
    }

    pub fn from_order(order: Vec<Candidate>) -> Result<Self> {
        let raw: Vec<usize> = order.into_iter().map(Candidate::index).collect();
        crate::profile::Vote::new(raw.clone())?;
        Ok(TieBreak { order: raw })
    }
}

/// Memoised solver over remaining-candidate sets. The depth of a node is
/// implied by how many candidates remain, so the mask alone is the key.
pub struct GameTree<'a> {
    profile: &'a PreferenceProfile,
    turns: &'a [usize],
    tie_break: TieBreak,
    // mask -> (subgame winner, elimination chosen at this node)
    memo: HashMap<u64, (u8, u8)>,
}

impl<'a> GameTree<'a> {
    pub fn new(
        profile: &'a PreferenceProfile,
        seq: &'a EliminationSequence,
        tie_break: TieBreak,
        max_candidates: usize,
    ) -> Result<Self> {
        let m = profile.candidates();
        if m > max_candidates {
            return Err(Error::TreeTooLarge { candidates: m, limit: max_candidates });
        }
        seq.validate(profile.voters(), m)?;
        if tie_break.order.len() != m {
            return Err(Error::LengthMismatch { left: m, right: tie_break.order.len() });
        }
        Ok(GameTree { profile, turns: seq.turns(), tie_break, memo: HashMap::new() })
    }

    /// Voter to move when `remaining` candidates are left.
    fn mover(&self, remaining: u64) -> usize {
        let m = self.profile.candidates();
        self.turns[m - remaining.count_ones() as usize]
    }

    /// Winner of the subgame starting with `remaining` candidates, under
    /// equilibrium play.
    pub fn subgame_winner(&mut self, remaining: u64) -> Candidate {
        Candidate(self.solve(remaining).0 as usize)
    }

    fn solve(&mut self, remaining: u64) -> (u8, u8) {
        if remaining.count_ones() == 1 {
            let c = remaining.trailing_zeros() as u8;
            return (c, c);
        }
        if let Some(&hit) = self.memo.get(&remaining) {
            return hit;
        }
        let voter = self.mover(remaining);
        let mut best: Option<(usize, u8, u8)> = None;
        for i in 0..self.tie_break.order.len() {
            let c = self.tie_break.order[i];
            if remaining & (1 << c) == 0 {
                continue;
            }
            let (winner, _) = self.solve(remaining & !(1 << c));
            let pos = self.profile.position(voter, winner as usize);
            // Strict improvement only: earlier entries in the tie-break order win ties.
            if best.is_none_or(|(p, _, _)| pos < p) {
                best = Some((pos, winner, c as u8));
            }
        }
        let (_, winner, action) = best.expect("non-empty node");
        self.memo.insert(remaining, (winner, action));
        (winner, action)
    }

    /// The equilibrium path from the root.
    pub fn solve_path(&mut self) -> GameTrace {
        let mut remaining = full_mask(self.profile.candidates());
        let mut steps = Vec::with_capacity(self.turns.len());
        while remaining.count_ones() > 1 {
            let voter = self.mover(remaining);
            let (_, action) = self.solve(remaining);
            steps.push(Step { voter, eliminated: Candidate(action as usize) });
            remaining &= !(1 << action);
        }
        GameTrace { mode: PlayMode::BackwardInduction, steps, winner: Candidate(remaining.trailing_zeros() as usize) }
    }
}

/// Solves the game by exploring the whole tree. At every node the acting
/// voter picks the elimination whose subgame winner she ranks best; among
/// equivalent eliminations the tie-break-first candidate is eliminated.
pub fn backward_induction(
    profile: &PreferenceProfile,
    seq: &EliminationSequence,
    tie_break: &TieBreak,
) -> Result<GameTrace> {
    backward_induction_with_limit(profile, seq, tie_break, DEFAULT_MAX_CANDIDATES)
}

pub fn backward_induction_with_limit(
    profile: &PreferenceProfile,
    seq: &EliminationSequence,
    tie_break: &TieBreak,
    max_candidates: usize,
) -> Result<GameTrace> {
    Ok(GameTree::new(profile, seq, tie_break.clone(), max_candidates)?.solve_path())
}
