//! Random preference cultures: Impartial Culture and the Mallows model.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::profile::{PreferenceProfile, Vote};

/// A reproducible random stream: the same `(master_seed, stream_index)` always
/// yields the same draws. Monte-Carlo sample `i` uses stream `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RngStream {
    pub master_seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(master_seed: u64, stream_index: u64) -> Self {
        RngStream { master_seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.master_seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Reference ranking of a Mallows culture.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Reference {
    /// `0, 1, ..., m-1`.
    #[default]
    Identity,
    /// A uniformly random ranking drawn once per profile, shared by its voters.
    Random,
    Fixed(Vote),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CultureKind {
    Impartial,
    Mallows,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CultureSpec {
    pub kind: CultureKind,
    pub phi: f64,
    pub reference: Reference,
}

impl CultureSpec {
    pub fn impartial() -> Self {
        CultureSpec { kind: CultureKind::Impartial, phi: 1.0, reference: Reference::Identity }
    }

    pub fn mallows(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi <= 1.0) {
            return Err(Error::PhiOutOfRange(phi));
        }
        Ok(CultureSpec { kind: CultureKind::Mallows, phi, reference: Reference::Identity })
    }

    pub fn with_reference(mut self, reference: Reference) -> Self {
        self.reference = reference;
        self
    }

    /// Draws one profile from this culture.
    pub fn sample(&self, n: usize, m: usize, stream: RngStream) -> Result<PreferenceProfile> {
        match self.kind {
            CultureKind::Impartial => sample_impartial(n, m, stream),
            CultureKind::Mallows => sample_mallows(n, m, self, stream),
        }
    }

    /// Dispersion as reported in tables; Impartial Culture is `phi = 1`.
    pub fn phi_value(&self) -> f64 {
        match self.kind {
            CultureKind::Impartial => 1.0,
            CultureKind::Mallows => self.phi,
        }
    }
}

impl fmt::Display for CultureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CultureKind::Impartial => f.write_str("ic"),
            CultureKind::Mallows => write!(f, "mallows:phi={}", self.phi),
        }
    }
}

/// Parses `ic` or `mallows:phi=0.6`.
impl FromStr for CultureSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse { line: 1, message: format!("unknown culture `{s}`") };
        let s = s.trim();
        if s.eq_ignore_ascii_case("ic") || s.eq_ignore_ascii_case("impartial") {
            return Ok(CultureSpec::impartial());
        }
        let rest = s.strip_prefix("mallows").ok_or_else(bad)?;
        if rest.is_empty() {
            return Err(Error::Parse { line: 1, message: "mallows needs phi, e.g. mallows:phi=0.6".into() });
        }
        let value = rest.strip_prefix(":phi=").or_else(|| rest.strip_prefix(":")).ok_or_else(bad)?;
        let phi: f64 = value.parse().map_err(|_| bad())?;
        CultureSpec::mallows(phi)
    }
}

/// Each vote an independent uniformly random ranking (Fisher-Yates).
pub fn sample_impartial(n: usize, m: usize, stream: RngStream) -> Result<PreferenceProfile> {
    let mut rng = stream.rng();
    let votes = (0..n)
        .map(|_| {
            let mut ranking: Vec<usize> = (0..m).collect();
            ranking.shuffle(&mut rng);
            Vote::new(ranking)
        })
        .collect::<Result<Vec<_>>>()?;
    PreferenceProfile::new(votes)
}

/// Each vote drawn independently with probability proportional to
/// `phi^kendall_tau(vote, reference)`, using repeated insertion: the `j`-th
/// reference candidate is inserted at 1-based position `p` of the partial
/// ranking with probability `phi^(j-p) / (1 + phi + ... + phi^(j-1))`.
pub fn sample_mallows(n: usize, m: usize, spec: &CultureSpec, stream: RngStream) -> Result<PreferenceProfile> {
    if !(spec.phi > 0.0 && spec.phi <= 1.0) {
        return Err(Error::PhiOutOfRange(spec.phi));
    }
    let mut rng = stream.rng();
    let reference: Vec<usize> = match &spec.reference {
        Reference::Identity => (0..m).collect(),
        Reference::Random => {
            let mut r: Vec<usize> = (0..m).collect();
            r.shuffle(&mut rng);
            r
        }
        Reference::Fixed(v) => {
            if v.len() != m {
                return Err(Error::LengthMismatch { left: m, right: v.len() });
            }
            v.ranking().into_iter().map(|c| c.index()).collect()
        }
    };
    // weights[k] = phi^k
    let weights: Vec<f64> = (0..m)
        .scan(1.0, |w, _| {
            let cur = *w;
            *w *= spec.phi;
            Some(cur)
        })
        .collect();
    let votes = (0..n).map(|_| Vote::new(mallows_vote(&reference, &weights, &mut rng))).collect::<Result<Vec<_>>>()?;
    PreferenceProfile::new(votes)
}

fn mallows_vote<R: Rng>(reference: &[usize], weights: &[f64], rng: &mut R) -> Vec<usize> {
    let mut ranking = Vec::with_capacity(reference.len());
    for (j0, &c) in reference.iter().enumerate() {
        // Inserting at 0-based slot s puts c ahead of (j0 - s) earlier candidates.
        let total: f64 = weights[..=j0].iter().sum();
        let mut u = rng.random::<f64>() * total;
        let mut slot = j0;
        for s in (0..=j0).rev() {
            let w = weights[j0 - s];
            if u < w {
                slot = s;
                break;
            }
            u -= w;
            slot = s;
        }
        ranking.insert(slot, c);
    }
    ranking
}

/// Number of candidate pairs ordered oppositely by the two votes.
pub fn kendall_tau(v1: &Vote, v2: &Vote) -> Result<usize> {
    if v1.len() != v2.len() {
        return Err(Error::LengthMismatch { left: v1.len(), right: v2.len() });
    }
    // Positions in v2 of v1's ranking; count inversions.
    let seq: Vec<usize> =
        v1.raw().iter().map(|&c| v2.rank(crate::profile::Candidate(c as usize)).expect("same candidate set")).collect();
    let mut inversions = 0;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inversions += 1;
            }
        }
    }
    Ok(inversions)
}
