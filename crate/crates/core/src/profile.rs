//! Candidates, strict rankings and preference profiles.
//!
//! Candidates and voters are 0-based internally. A vote keeps both its
//! ranking (best first) and the inverse position table so that rank lookups
//! are constant time.

use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Candidate ids are stored as `u8` and remaining-candidate sets as `u64` masks.
pub const MAX_CANDIDATES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Candidate(pub usize);

impl Candidate {
    pub fn index(self) -> usize {
        self.0
    }
}

/// A strict linear order over `0..m`, best first.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vote {
    ranking: Vec<u8>,
    positions: Vec<u8>,
}

impl Vote {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let m = ranking.len();
        if m == 0 || m > MAX_CANDIDATES {
            return Err(Error::InvalidProfile(format!(
                "a vote must rank between 1 and {MAX_CANDIDATES} candidates, got {m}"
            )));
        }
        let mut positions = vec![u8::MAX; m];
        for (pos, &c) in ranking.iter().enumerate() {
            if c >= m || positions[c] != u8::MAX {
                return Err(Error::InvalidProfile(format!("ranking {ranking:?} is not a permutation of 0..{m}")));
            }
            positions[c] = pos as u8;
        }
        Ok(Vote { ranking: ranking.into_iter().map(|c| c as u8).collect(), positions })
    }

    pub fn identity(m: usize) -> Self {
        Vote::new((0..m).collect()).expect("identity is a permutation")
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> Vec<Candidate> {
        self.ranking.iter().map(|&c| Candidate(c as usize)).collect()
    }

    pub(crate) fn raw(&self) -> &[u8] {
        &self.ranking
    }

    /// 1-based rank of `c` (1 = best).
    pub fn rank(&self, c: Candidate) -> Result<usize> {
        self.positions.get(c.0).map(|&p| p as usize + 1).ok_or_else(|| Error::CandidateUnknown(c.0.to_string()))
    }

    pub fn reversed(&self) -> Vote {
        Vote::new(self.ranking.iter().rev().map(|&c| c as usize).collect()).expect("reversal of a permutation")
    }
}

/// `n` strict rankings over the same `m` candidates.
#[derive(Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    n: usize,
    m: usize,
    rankings: Vec<u8>,
    positions: Vec<u8>,
    labels: Option<Arc<[String]>>,
}

impl PreferenceProfile {
    pub fn new(votes: Vec<Vote>) -> Result<Self> {
        let Some(first) = votes.first() else {
            return Err(Error::InvalidProfile("a profile needs at least one voter".into()));
        };
        let m = first.len();
        let mut rankings = Vec::with_capacity(votes.len() * m);
        let mut positions = Vec::with_capacity(votes.len() * m);
        for v in &votes {
            if v.len() != m {
                return Err(Error::LengthMismatch { left: m, right: v.len() });
            }
            rankings.extend_from_slice(&v.ranking);
            positions.extend_from_slice(&v.positions);
        }
        Ok(PreferenceProfile { n: votes.len(), m, rankings, positions, labels: None })
    }

    /// Every voter ranks the candidates `0, 1, ..., m-1`.
    pub fn uniform(n: usize, m: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidProfile("a profile needs at least one voter".into()));
        }
        Vote::new((0..m).collect()).and_then(|v| PreferenceProfile::new(vec![v; n]))
    }

    /// Builds a profile from rankings written as letter strings, e.g. `["abcd", "cbad"]`.
    pub fn from_letters(votes: &[&str]) -> Result<Self> {
        let text = votes
            .iter()
            .map(|v| v.chars().map(String::from).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n");
        PreferenceProfile::parse(&text)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.m {
            return Err(Error::LengthMismatch { left: self.m, right: labels.len() });
        }
        self.labels = Some(labels.into());
        Ok(self)
    }

    pub fn voters(&self) -> usize {
        self.n
    }

    pub fn candidates(&self) -> usize {
        self.m
    }

    pub fn vote(&self, voter: usize) -> Vote {
        Vote {
            ranking: self.ranking_raw(voter).to_vec(),
            positions: self.positions[voter * self.m..(voter + 1) * self.m].to_vec(),
        }
    }

    pub fn votes(&self) -> impl Iterator<Item = Vote> + '_ {
        (0..self.n).map(|i| self.vote(i))
    }

    #[inline]
    pub(crate) fn ranking_raw(&self, voter: usize) -> &[u8] {
        &self.rankings[voter * self.m..(voter + 1) * self.m]
    }

    /// 0-based position of `c` in the ranking of `voter`.
    #[inline]
    pub(crate) fn position(&self, voter: usize, c: usize) -> usize {
        self.positions[voter * self.m + c] as usize
    }

    /// 1-based rank of `c` for `voter`.
    pub fn rank(&self, voter: usize, c: Candidate) -> Result<usize> {
        if voter >= self.n {
            return Err(Error::InvalidVoter { voter, voters: self.n });
        }
        if c.0 >= self.m {
            return Err(Error::CandidateUnknown(c.0.to_string()));
        }
        Ok(self.position(voter, c.0) + 1)
    }

    /// `S_B(c) = sum over voters of (m - rank)`.
    pub fn borda_score(&self, c: Candidate) -> Result<u64> {
        if c.0 >= self.m {
            return Err(Error::CandidateUnknown(c.0.to_string()));
        }
        Ok(self.borda_unchecked(c.0))
    }

    #[inline]
    pub(crate) fn borda_unchecked(&self, c: usize) -> u64 {
        (0..self.n).map(|i| (self.m - 1 - self.position(i, c)) as u64).sum()
    }

    pub fn borda_scores(&self) -> Vec<u64> {
        let mut scores = vec![0; self.m];
        self.borda_into(&mut scores);
        scores
    }

    #[inline]
    pub(crate) fn borda_into(&self, scores: &mut [u64]) {
        scores.iter_mut().for_each(|s| *s = 0);
        for ranking in self.rankings.chunks_exact(self.m) {
            for (pos, &c) in ranking.iter().enumerate() {
                scores[c as usize] += (self.m - 1 - pos) as u64;
            }
        }
    }

    /// Overwrites the ranking of `voter`. `ranking` must be a permutation of `0..m`.
    #[inline]
    pub(crate) fn set_ranking(&mut self, voter: usize, ranking: &[u8]) {
        let base = voter * self.m;
        self.rankings[base..base + self.m].copy_from_slice(ranking);
        for (pos, &c) in ranking.iter().enumerate() {
            self.positions[base + c as usize] = pos as u8;
        }
    }

    /// Renames every candidate `c` to `mapping[c]` in all votes.
    pub fn relabel(&self, mapping: &[usize]) -> Result<Self> {
        Vote::new(mapping.to_vec())?;
        if mapping.len() != self.m {
            return Err(Error::LengthMismatch { left: self.m, right: mapping.len() });
        }
        let votes = (0..self.n)
            .map(|i| Vote::new(self.ranking_raw(i).iter().map(|&c| mapping[c as usize]).collect()))
            .collect::<Result<Vec<_>>>()?;
        let mut out = PreferenceProfile::new(votes)?;
        out.labels = self.labels.clone();
        Ok(out)
    }

    pub fn label(&self, c: Candidate) -> String {
        match &self.labels {
            Some(labels) => labels[c.0].clone(),
            None => default_label(c.0, self.m),
        }
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.m).map(|c| self.label(Candidate(c))).collect()
    }

    /// Looks up a candidate by display label.
    pub fn candidate(&self, label: &str) -> Result<Candidate> {
        (0..self.m)
            .map(Candidate)
            .find(|&c| self.label(c) == label)
            .ok_or_else(|| Error::CandidateUnknown(label.to_string()))
    }

    /// Parses the text format: one voter per line, labels separated by single
    /// spaces, best first. Blank lines and lines starting with `#` are skipped.
    /// Candidate ids follow the order of the first vote.
    pub fn parse(text: &str) -> Result<Self> {
        let mut labels: Vec<String> = Vec::new();
        let mut votes = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split(' ').collect();
            if tokens.iter().any(|t| t.is_empty()) {
                return Err(Error::Parse {
                    line: line_no,
                    message: "labels must be separated by single spaces".into(),
                });
            }
            if labels.is_empty() {
                labels = tokens.iter().map(|t| t.to_string()).collect();
                if labels.len() > MAX_CANDIDATES {
                    return Err(Error::Parse {
                        line: line_no,
                        message: format!("at most {MAX_CANDIDATES} candidates are supported"),
                    });
                }
            }
            if tokens.len() != labels.len() {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("expected {} candidates, found {}", labels.len(), tokens.len()),
                });
            }
            let ranking = tokens
                .iter()
                .map(|t| {
                    labels
                        .iter()
                        .position(|l| l == t)
                        .ok_or_else(|| Error::Parse { line: line_no, message: format!("unknown candidate `{t}`") })
                })
                .collect::<Result<Vec<_>>>()?;
            let vote = Vote::new(ranking)
                .map_err(|_| Error::Parse { line: line_no, message: "a candidate is listed twice".into() })?;
            votes.push(vote);
        }
        if votes.is_empty() {
            return Err(Error::Parse { line: 0, message: "no votes found".into() });
        }
        PreferenceProfile::new(votes)?.with_labels(labels)
    }

    /// Inverse of [`PreferenceProfile::parse`].
    pub fn to_text(&self) -> String {
        let labels = self.labels();
        let mut out = String::new();
        for i in 0..self.n {
            let line: Vec<&str> = self.ranking_raw(i).iter().map(|&c| labels[c as usize].as_str()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Flat ranking table, voter-major. Lexicographic order on this slice is
    /// the order used to pick deterministic witnesses.
    #[cfg(test)]
    pub(crate) fn raw_rankings(&self) -> &[u8] {
        &self.rankings
    }
}

fn default_label(c: usize, m: usize) -> String {
    if m <= 26 {
        ((b'a' + c as u8) as char).to_string()
    } else {
        format!("c{}", c + 1)
    }
}

impl fmt::Debug for PreferenceProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let votes: Vec<String> = (0..self.n)
            .map(|i| {
                self.ranking_raw(i).iter().map(|&c| self.label(Candidate(c as usize))).collect::<Vec<_>>().join(" ")
            })
            .collect();
        f.debug_tuple("PreferenceProfile").field(&votes).finish()
    }
}

impl Serialize for PreferenceProfile {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(p: &PreferenceProfile, l: &str) -> Candidate {
        p.candidate(l).unwrap()
    }

    #[test]
    fn rank_read_off() {
        let v = PreferenceProfile::from_letters(&["abcd"]).unwrap().vote(0);
        assert_eq!(v.rank(Candidate(0)).unwrap(), 1);
        assert_eq!(v.rank(Candidate(2)).unwrap(), 3);
        let p = PreferenceProfile::from_letters(&["abcde", "edcba"]).unwrap();
        assert_eq!(p.rank(1, c(&p, "b")).unwrap(), 4);
        assert!(matches!(v.rank(Candidate(9)), Err(Error::CandidateUnknown(_))));
    }

    #[test]
    fn borda_scores_of_example_profile() {
        let p = PreferenceProfile::from_letters(&["abcd", "cbad", "cadb"]).unwrap();
        assert_eq!(p.borda_score(c(&p, "c")).unwrap(), 7);
        assert_eq!(p.borda_score(c(&p, "a")).unwrap(), 6);
        let single = PreferenceProfile::from_letters(&["abcd"]).unwrap();
        assert_eq!(single.borda_score(c(&single, "d")).unwrap(), 0);
        assert!(p.borda_score(Candidate(4)).is_err());
    }

    #[test]
    fn borda_mass_is_conserved() {
        let p = PreferenceProfile::from_letters(&["abcde", "edcba", "debca"]).unwrap();
        let total: u64 = p.borda_scores().iter().sum();
        assert_eq!(total, 3 * 5 * 4 / 2);
    }

    #[test]
    fn parse_and_print_round_trip() {
        let text = "# example\nx y z\n\nz y x\n";
        let p = PreferenceProfile::parse(text).unwrap();
        assert_eq!(p.voters(), 2);
        assert_eq!(p.to_text(), "x y z\nz y x\n");
        assert_eq!(PreferenceProfile::parse(&p.to_text()).unwrap(), p);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = PreferenceProfile::parse("a b c\n# c\na b\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 3, message: "expected 3 candidates, found 2".into() });
        let err = PreferenceProfile::parse("a b c\na b q").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = PreferenceProfile::parse("a  b").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let err = PreferenceProfile::parse("a b\nb b").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(PreferenceProfile::parse("# nothing\n").is_err());
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Vote::new(vec![0, 0, 1]).is_err());
        assert!(Vote::new(vec![0, 3, 1]).is_err());
        assert!(Vote::new(vec![]).is_err());
        let a = Vote::new(vec![0, 1]).unwrap();
        let b = Vote::new(vec![0, 1, 2]).unwrap();
        assert!(matches!(PreferenceProfile::new(vec![a, b]), Err(Error::LengthMismatch { .. })));
        assert!(PreferenceProfile::new(vec![]).is_err());
    }

    #[test]
    fn relabel_moves_candidates() {
        let p = PreferenceProfile::from_letters(&["abc"]).unwrap();
        let q = p.relabel(&[2, 0, 1]).unwrap();
        assert_eq!(q.vote(0).ranking(), vec![Candidate(2), Candidate(0), Candidate(1)]);
    }
}
