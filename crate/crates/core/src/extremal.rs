//! Profiles that attain the worst-case welfare bounds.
//!
//! Both constructions place candidate `b` (the equilibrium winner) just high
//! enough in every ranking that each voter's turns are spent on candidates
//! ranked below `b`. The price-of-anarchy profile gives every other candidate
//! exactly one such "below-b" slot; the sincerity-ratio profile shares one
//! candidate `e` between the most frequent voter `x` and a second voter `y`,
//! timed so that `x` takes `e` first in sincere play and `y` takes it first in
//! strategic play.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::oracle::{backward_induction, TieBreak, DEFAULT_MAX_CANDIDATES};
use crate::profile::{Candidate, PreferenceProfile, Vote};
use crate::ratio::Ratio;
use crate::sequence::EliminationSequence;
use crate::welfare::{poa_formula, sr_upper_bound, welfare_outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ExtremalMode {
    #[serde(rename = "POA_TIGHT")]
    PoaTight,
    #[serde(rename = "SR_TIGHT")]
    SrTight,
}

/// How an extremal profile was assembled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExtremalSpec {
    pub mode: ExtremalMode,
    pub n: usize,
    pub m: usize,
    pub sequence: EliminationSequence,
    /// Most frequent voter.
    pub x: usize,
    /// Equilibrium winner.
    pub b: Candidate,
    /// Borda-optimal candidate (price of anarchy) or sincere winner (sincerity ratio).
    pub other: Candidate,
    /// Second voter and shared candidate, sincerity-ratio mode only.
    pub y: Option<usize>,
    pub e: Option<Candidate>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalInstance {
    pub spec: ExtremalSpec,
    pub profile: PreferenceProfile,
}

fn check_shape(n: usize, m: usize, seq: &EliminationSequence) -> Result<()> {
    if n < 2 {
        return Err(Error::OutOfDomain(format!("extremal profiles need n >= 2, got {n}")));
    }
    if m < 2 {
        return Err(Error::OutOfDomain(format!("extremal profiles need m >= 2, got {m}")));
    }
    seq.validate(n, m)
}

/// Voters other than `skip` by descending turn count, ties by index.
fn by_occurrence(counts: &[usize], skip: &[usize]) -> Vec<usize> {
    let mut voters: Vec<usize> = (0..counts.len()).filter(|v| !skip.contains(v)).collect();
    voters.sort_by_key(|&v| std::cmp::Reverse(counts[v]));
    voters
}

/// Assembles one ranking: `top` first, then every candidate not otherwise
/// placed in id order, then `middle`, then `bottom` (listed best to worst).
fn ranking(m: usize, top: &[usize], middle: &[usize], bottom: &[usize]) -> Result<Vote> {
    let placed = |c: &usize| top.contains(c) || middle.contains(c) || bottom.contains(c);
    let mut r: Vec<usize> = top.to_vec();
    r.extend((0..m).filter(|c| !placed(c)));
    r.extend_from_slice(middle);
    r.extend_from_slice(bottom);
    Vote::new(r)
}

/// Profile meeting the four price-of-anarchy criteria: `b` at rank `m - O_i`
/// for every voter, `a` right below `b` for the most frequent voter `x`, `a`
/// first for everyone else, and no candidate below `b` for two voters.
pub fn build_poa_tight(n: usize, m: usize, seq: &EliminationSequence) -> Result<ExtremalInstance> {
    check_shape(n, m, seq)?;
    let occ = seq.occurrences(n);
    let x = occ.most_frequent().expect("m >= 2 gives a non-empty sequence");
    let (a, b) = (0usize, 1usize);
    let mut pool = 2..m;
    let mut bottoms: Vec<Vec<usize>> = vec![Vec::new(); n];
    bottoms[x].push(a);
    bottoms[x].extend(pool.by_ref().take(occ.counts[x] - 1));
    for v in by_occurrence(&occ.counts, &[x]) {
        bottoms[v].extend(pool.by_ref().take(occ.counts[v]));
        if bottoms[v].len() != occ.counts[v] {
            return Err(Error::Unsatisfiable(format!("voter {} has too few slots", v + 1)));
        }
    }
    let votes = (0..n)
        .map(|v| if v == x { ranking(m, &[], &[b], &bottoms[v]) } else { ranking(m, &[a], &[b], &bottoms[v]) })
        .collect::<Result<Vec<_>>>()?;
    let profile = PreferenceProfile::new(votes)?;
    let spec = ExtremalSpec {
        mode: ExtremalMode::PoaTight,
        n,
        m,
        sequence: seq.clone(),
        x,
        b: Candidate(b),
        other: Candidate(a),
        y: None,
        e: None,
    };
    let instance = ExtremalInstance { spec, profile };
    let report = verify_tight(&instance.profile, seq, ExtremalMode::PoaTight)?;
    if !report.attained {
        return Err(Error::Unsatisfiable(format!(
            "constructed profile reaches {} instead of {}",
            report.achieved, report.bound
        )));
    }
    Ok(instance)
}

pub fn gen_poa_tight(n: usize, m: usize, seq: &EliminationSequence) -> Result<PreferenceProfile> {
    build_poa_tight(n, m, seq).map(|i| i.profile)
}

/// 0-based position in `turns` of the `k`-th (1-based) turn of `voter`.
fn kth_turn(turns: &[usize], voter: usize, k: usize) -> usize {
    turns
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v == voter)
        .nth(k - 1)
        .map(|(i, _)| i)
        .expect("voter has at least k turns")
}

/// Placement of the shared candidate: `e` is the `kx`-th worst candidate of
/// `x` and the `ky`-th worst of `y`.
#[derive(Debug, Clone, Copy)]
struct SharedSlot {
    x: usize,
    y: usize,
    kx: usize,
    ky: usize,
}

/// Sincere play must reach `e` through `x` first; reversed play through `y` first.
fn find_shared_slot(seq: &EliminationSequence, counts: &[usize], o_max: usize) -> Option<SharedSlot> {
    let fwd = seq.turns();
    let rev = seq.reverse();
    let rev = rev.turns();
    for x in (0..counts.len()).filter(|&v| counts[v] == o_max) {
        for y in (0..counts.len()).filter(|&v| v != x && counts[v] > 0) {
            for kx in 1..=counts[x] {
                for ky in 1..=counts[y] {
                    let sincere_ok = kth_turn(fwd, x, kx) < kth_turn(fwd, y, ky);
                    let strategic_ok = kth_turn(rev, y, ky) < kth_turn(rev, x, kx);
                    if sincere_ok && strategic_ok {
                        return Some(SharedSlot { x, y, kx, ky });
                    }
                }
            }
        }
    }
    None
}

/// Places `shared` as the `k`-th worst of a bottom block filled with `own`.
fn bottom_with(own: &[usize], shared: usize, k: usize) -> Vec<usize> {
    let mut worst_first: Vec<usize> = own.iter().rev().copied().collect();
    worst_first.insert(k - 1, shared);
    worst_first.reverse();
    worst_first
}

/// Profile attaining the sincerity-ratio bound: `c` wins sincerely with
/// `x` ranking `b` directly above `c` at rank `m - O_max - 1`, `b` wins
/// strategically with rank `m - O_i` for every other voter, who all rank `c`
/// first.
pub fn build_sr_tight(n: usize, m: usize, seq: &EliminationSequence) -> Result<ExtremalInstance> {
    check_shape(n, m, seq)?;
    if m < 3 {
        return Err(Error::StructureUnsatisfiable("needs at least three candidates".into()));
    }
    let occ = seq.occurrences(n);
    let slot = find_shared_slot(seq, &occ.counts, occ.o_max).ok_or_else(|| {
        Error::StructureUnsatisfiable(format!(
            "no voter pair in {seq} lets the most frequent voter take the shared candidate \
             first sincerely but second strategically"
        ))
    })?;
    let SharedSlot { x, y, kx, ky } = slot;
    let (b, c) = (1usize, 2usize);
    let mut pool = (0..m).filter(|&k| k != b && k != c);
    let e = pool.next().expect("m >= 3");
    let mut own: Vec<Vec<usize>> = vec![Vec::new(); n];
    own[x].extend(pool.by_ref().take(occ.counts[x] - 1));
    for v in by_occurrence(&occ.counts, &[x]) {
        let want = occ.counts[v] - usize::from(v == y);
        own[v].extend(pool.by_ref().take(want));
        if own[v].len() != want {
            return Err(Error::StructureUnsatisfiable(format!("voter {} has too few slots", v + 1)));
        }
    }
    let votes = (0..n)
        .map(|v| {
            if v == x {
                ranking(m, &[], &[b, c], &bottom_with(&own[v], e, kx))
            } else if v == y {
                ranking(m, &[c], &[b], &bottom_with(&own[v], e, ky))
            } else {
                ranking(m, &[c], &[b], &own[v])
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let profile = PreferenceProfile::new(votes)?;
    let spec = ExtremalSpec {
        mode: ExtremalMode::SrTight,
        n,
        m,
        sequence: seq.clone(),
        x,
        b: Candidate(b),
        other: Candidate(c),
        y: Some(y),
        e: Some(Candidate(e)),
    };
    let report = verify_tight(&profile, seq, ExtremalMode::SrTight)?;
    if !report.attained {
        return Err(Error::StructureUnsatisfiable(format!(
            "constructed profile reaches {} instead of {}",
            report.achieved, report.bound
        )));
    }
    Ok(ExtremalInstance { spec, profile })
}

pub fn gen_sr_tight(n: usize, m: usize, seq: &EliminationSequence) -> Result<PreferenceProfile> {
    build_sr_tight(n, m, seq).map(|i| i.profile)
}

/// Outcome of checking a profile against a closed-form bound.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TightnessReport {
    pub mode: ExtremalMode,
    pub attained: bool,
    pub achieved: Ratio,
    pub bound: Ratio,
    pub numerator_score: u64,
    pub spne_score: u64,
    /// Whether backward induction on the full game tree elected the same
    /// winner; `None` when the tree is too large to explore.
    pub oracle_agrees: Option<bool>,
}

/// Recomputes the ratio of `profile` under `seq` and compares it with the
/// matching closed-form bound.
pub fn verify_tight(
    profile: &PreferenceProfile,
    seq: &EliminationSequence,
    mode: ExtremalMode,
) -> Result<TightnessReport> {
    let (n, m) = (profile.voters(), profile.candidates());
    let w = welfare_outcome(profile, seq)?;
    let o_max = seq.occurrences(n).o_max;
    let (achieved, bound, numerator_score) = match mode {
        ExtremalMode::PoaTight => (w.ratio(crate::welfare::RatioKind::Ab)?, poa_formula(n, m, o_max)?, w.optimal_score),
        ExtremalMode::SrTight => {
            (w.ratio(crate::welfare::RatioKind::Cb)?, sr_upper_bound(n, m, o_max)?, w.sincere_score)
        }
    };
    let oracle_agrees = (m <= DEFAULT_MAX_CANDIDATES)
        .then(|| backward_induction(profile, seq, &TieBreak::ascending(m)))
        .transpose()?
        .map(|t| t.winner == w.spne_winner);
    Ok(TightnessReport {
        mode,
        attained: achieved == bound,
        achieved,
        bound,
        numerator_score,
        spne_score: w.spne_score,
        oracle_agrees,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::play::{sincere_play, spne_outcome};

    fn seq(s: &str) -> EliminationSequence {
        s.parse().unwrap()
    }

    #[test]
    fn poa_profiles_meet_the_criteria() {
        for (s, n, m) in [("1112221", 2, 8), ("111223", 3, 7), ("1", 2, 2), ("1111", 3, 5), ("3", 3, 2)] {
            let s = seq(s);
            let inst = build_poa_tight(n, m, &s).unwrap();
            let p = &inst.profile;
            let occ = s.occurrences(n);
            let (a, b, x) = (inst.spec.other, inst.spec.b, inst.spec.x);
            for i in 0..n {
                assert_eq!(p.rank(i, b).unwrap(), m - occ.counts[i]);
                if i == x {
                    assert_eq!(p.rank(i, a).unwrap(), p.rank(i, b).unwrap() + 1);
                } else {
                    assert_eq!(p.rank(i, a).unwrap(), 1);
                }
            }
            for c in (0..m).map(Candidate).filter(|&c| c != b) {
                let below = (0..n).filter(|&i| p.rank(i, c).unwrap() > p.rank(i, b).unwrap()).count();
                assert!(below <= 1);
            }
            assert_ne!(sincere_play(p, &s).unwrap().winner, a);
            assert_ne!(spne_outcome(p, &s).unwrap().winner, a);
        }
    }

    #[test]
    fn sr_profile_for_three_voters_seven_candidates() {
        let s = seq("1,1,2,1,3,1");
        let inst = build_sr_tight(3, 7, &s).unwrap();
        assert_eq!((inst.spec.x, inst.spec.y), (0, Some(2)));
        let r = verify_tight(&inst.profile, &s, ExtremalMode::SrTight).unwrap();
        assert!(r.attained);
        assert_eq!((r.numerator_score, r.spne_score), (16, 7));
        assert_eq!(r.achieved, Ratio::new(16, 7).unwrap());
        assert_eq!(r.oracle_agrees, Some(true));
    }

    #[test]
    fn sr_slot_structure() {
        for (s, n, m) in [("112131", 3, 7), ("1112221", 2, 8), ("123123", 3, 7), ("111223", 3, 7)] {
            let s = seq(s);
            let inst = build_sr_tight(n, m, &s).unwrap();
            let p = &inst.profile;
            let b = inst.spec.b;
            let mut below = vec![0usize; m];
            for i in 0..n {
                for (c, k) in below.iter_mut().enumerate() {
                    if p.rank(i, Candidate(c)).unwrap() > p.rank(i, b).unwrap() {
                        *k += 1;
                    }
                }
            }
            assert_eq!(below.iter().sum::<usize>(), m);
            assert_eq!(below.iter().filter(|&&k| k == 2).count(), 1);
            assert_eq!(below[inst.spec.e.unwrap().0], 2);
            assert_eq!(below.iter().filter(|&&k| k > 0).count(), m - 1);
        }
    }

    #[test]
    fn block_sequences_reach_the_bound() {
        for (s, n, m) in [("1112", 2, 5), ("11122", 2, 6), ("1112233", 3, 8), ("11223", 3, 6)] {
            let s = seq(s);
            assert!(build_sr_tight(n, m, &s).is_ok(), "{s}");
        }
    }

    #[test]
    fn reversed_sequence_gives_the_reciprocal() {
        let s = seq("112131");
        let p = gen_sr_tight(3, 7, &s).unwrap();
        let r = verify_tight(&p, &s.reverse(), ExtremalMode::SrTight).unwrap();
        assert_eq!(r.achieved, Ratio::new(7, 16).unwrap());
        assert!(!r.attained);
    }

    #[test]
    fn unsatisfiable_structures() {
        assert!(matches!(build_sr_tight(3, 7, &seq("123321")), Err(Error::StructureUnsatisfiable(_))));
        assert!(matches!(build_sr_tight(2, 4, &seq("111")), Err(Error::StructureUnsatisfiable(_))));
        assert!(matches!(build_poa_tight(1, 4, &seq("111")), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn consensus_profile_is_not_tight() {
        let p = PreferenceProfile::uniform(3, 7).unwrap();
        let r = verify_tight(&p, &seq("111223"), ExtremalMode::PoaTight).unwrap();
        assert!(!r.attained);
        assert_eq!(r.achieved, Ratio::one());
    }
}
