//! Parallel sweeps over profile populations.
//!
//! Work is cut into fixed-size chunks of population indices that do not
//! depend on the worker count, and partial tallies merge exactly, so results
//! are identical for any number of workers.

use rayon::prelude::*;

use crate::culture::{CultureSpec, RngStream};
use crate::enumerate::{check_budget, ProfileCursor};
use crate::error::{Error, Result};
use crate::sequence::EliminationSequence;
use crate::stats::RatioTally;
use crate::welfare::{Evaluator, RatioKind};

pub const DEFAULT_BUDGET: u128 = 100_000_000;
const EXHAUSTIVE_CHUNK: u128 = 1 << 16;
const SAMPLE_CHUNK: u64 = 1 << 13;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepOptions {
    pub fix_first: bool,
    pub budget: u128,
    pub workers: usize,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            fix_first: true,
            budget: DEFAULT_BUDGET,
            workers: std::thread::available_parallelism().map_or(1, usize::from),
        }
    }
}

/// Tallies of both ratios over one population.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    pub ab: RatioTally,
    pub cb: RatioTally,
    pub population: u128,
}

impl SweepResult {
    fn empty(max_score: u64) -> Self {
        SweepResult { ab: RatioTally::new(max_score), cb: RatioTally::new(max_score), population: 0 }
    }

    fn merge(mut self, other: SweepResult) -> Self {
        self.ab.merge(&other.ab);
        self.cb.merge(&other.cb);
        self.population += other.population;
        self
    }

    pub fn tally(&self, kind: RatioKind) -> &RatioTally {
        match kind {
            RatioKind::Ab => &self.ab,
            RatioKind::Cb => &self.cb,
        }
    }
}

fn check_game(seq: &EliminationSequence, n: usize, m: usize) -> Result<()> {
    if m < 2 {
        return Err(Error::OutOfDomain("ratio sweeps need at least two candidates".into()));
    }
    if n == 0 {
        return Err(Error::OutOfDomain("ratio sweeps need at least one voter".into()));
    }
    seq.validate(n, m)
}

fn pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::OutOfDomain(format!("cannot start worker pool: {e}")))
}

/// Evaluates both ratios on every profile (voter 0 fixed when `fix_first`).
pub fn exhaustive_sweep(seq: &EliminationSequence, n: usize, m: usize, options: &SweepOptions) -> Result<SweepResult> {
    check_game(seq, n, m)?;
    let total = check_budget(n, m, options.fix_first, options.budget)?;
    let max_score = (n * (m - 1)) as u64;
    let chunks: Vec<u128> = (0..total.div_ceil(EXHAUSTIVE_CHUNK)).collect();
    let partials: Vec<Result<SweepResult>> = pool(options.workers)?.install(|| {
        chunks
            .par_iter()
            .map(|&k| {
                let start = k * EXHAUSTIVE_CHUNK;
                let mut cursor = ProfileCursor::new(n, m, options.fix_first, start, EXHAUSTIVE_CHUNK)?;
                let mut eval = Evaluator::new(seq, m);
                let mut out = SweepResult::empty(max_score);
                while let Some(profile) = cursor.advance() {
                    let w = eval.evaluate(profile);
                    let index = start + out.population;
                    out.ab.add(w.optimal_score, w.spne_score, index);
                    out.cb.add(w.sincere_score, w.spne_score, index);
                    out.population += 1;
                }
                Ok(out)
            })
            .collect()
    });
    partials.into_iter().try_fold(SweepResult::empty(max_score), |acc, p| Ok(acc.merge(p?)))
}

/// Evaluates both ratios on `samples` profiles drawn from `culture`; sample
/// `i` is drawn from stream `(seed, i)`.
pub fn montecarlo_sweep(
    seq: &EliminationSequence,
    n: usize,
    m: usize,
    culture: &CultureSpec,
    samples: u64,
    seed: u64,
    workers: usize,
) -> Result<SweepResult> {
    check_game(seq, n, m)?;
    let max_score = (n * (m - 1)) as u64;
    let chunks: Vec<u64> = (0..samples.div_ceil(SAMPLE_CHUNK)).collect();
    let partials: Vec<Result<SweepResult>> = pool(workers)?.install(|| {
        chunks
            .par_iter()
            .map(|&k| {
                let mut eval = Evaluator::new(seq, m);
                let mut out = SweepResult::empty(max_score);
                for i in k * SAMPLE_CHUNK..((k + 1) * SAMPLE_CHUNK).min(samples) {
                    let profile = culture.sample(n, m, RngStream::new(seed, i))?;
                    let w = eval.evaluate(&profile);
                    out.ab.add(w.optimal_score, w.spne_score, i as u128);
                    out.cb.add(w.sincere_score, w.spne_score, i as u128);
                    out.population += 1;
                }
                Ok(out)
            })
            .collect()
    });
    partials.into_iter().try_fold(SweepResult::empty(max_score), |acc, p| Ok(acc.merge(p?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::enumerate_profiles;
    use crate::welfare::{ratio_ab, ratio_cb};

    #[test]
    fn exhaustive_matches_a_naive_scan() {
        let seq: EliminationSequence = "1221".parse().unwrap();
        let opts = SweepOptions { workers: 3, ..SweepOptions::default() };
        let res = exhaustive_sweep(&seq, 2, 5, &opts).unwrap();
        let mut naive_ab = RatioTally::new(8);
        let mut naive_cb = RatioTally::new(8);
        for (i, p) in enumerate_profiles(2, 5, true, u128::MAX).unwrap().enumerate() {
            let ab = ratio_ab(&p, &seq).unwrap();
            let cb = ratio_cb(&p, &seq).unwrap();
            naive_ab.add(ab.numerator(), ab.denominator(), i as u128);
            naive_cb.add(cb.numerator(), cb.denominator(), i as u128);
        }
        assert_eq!(res.population, 120);
        assert_eq!(res.ab.distribution(), naive_ab.distribution());
        assert_eq!(res.cb.distribution(), naive_cb.distribution());
        assert_eq!(res.ab.max(), naive_ab.max());
        assert_eq!(res.cb.min(), naive_cb.min());
    }

    #[test]
    fn worker_count_does_not_matter() {
        let seq: EliminationSequence = "11231".parse().unwrap();
        assert_eq!(seq.len(), 5);
        let base = SweepOptions { workers: 1, ..SweepOptions::default() };
        let one = exhaustive_sweep(&seq, 3, 6, &base).unwrap();
        let many = exhaustive_sweep(&seq, 3, 6, &SweepOptions { workers: 7, ..base }).unwrap();
        assert_eq!(one, many);
        let ic = CultureSpec::impartial();
        let x = montecarlo_sweep(&seq, 3, 6, &ic, 20_000, 9, 1).unwrap();
        let y = montecarlo_sweep(&seq, 3, 6, &ic, 20_000, 9, 5).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.population, 20_000);
    }

    #[test]
    fn shape_errors() {
        let seq: EliminationSequence = "12".parse().unwrap();
        let opts = SweepOptions::default();
        assert!(matches!(exhaustive_sweep(&seq, 2, 4, &opts), Err(Error::SequenceLengthMismatch { .. })));
        assert!(matches!(exhaustive_sweep(&"111111".parse().unwrap(), 4, 7, &opts), Err(Error::BudgetExceeded { .. })));
    }
}
