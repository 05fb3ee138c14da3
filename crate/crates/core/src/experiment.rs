//! Experiment drivers behind the command-line tool: one exhaustive or
//! Monte-Carlo run produces a statistics row, a histogram and a JSON report.

use serde_json::{json, Value};

use crate::culture::{CultureSpec, RngStream};
use crate::enumerate::ProfileCursor;
use crate::error::{Error, Result};
use crate::ratio::Ratio;
use crate::sequence::EliminationSequence;
use crate::stats::{Histogram, RatioStats};
use crate::sweep::{exhaustive_sweep, montecarlo_sweep, SweepOptions, DEFAULT_BUDGET};
use crate::welfare::{bound_for, RatioKind};

pub const CSV_HEADER: &str = "sequence,n,m,mode,culture,phi,count,mean,std,max_num,max_den";

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub n: usize,
    pub m: usize,
    pub sequence: EliminationSequence,
    pub mode: RatioKind,
    pub culture: CultureSpec,
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
    pub histogram_bins: usize,
    pub fix_first: bool,
    pub budget: u128,
}

impl ExperimentConfig {
    pub fn new(n: usize, m: usize, sequence: EliminationSequence, mode: RatioKind) -> Self {
        ExperimentConfig {
            n,
            m,
            sequence,
            mode,
            culture: CultureSpec::impartial(),
            samples: 3_628_800,
            seed: 0,
            workers: SweepOptions::default().workers,
            histogram_bins: 50,
            fix_first: true,
            budget: DEFAULT_BUDGET,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.samples == 0 {
            return Err(Error::OutOfDomain("samples must be at least 1".into()));
        }
        if self.workers == 0 {
            return Err(Error::OutOfDomain("workers must be at least 1".into()));
        }
        if self.histogram_bins == 0 {
            return Err(Error::OutOfDomain("histogram bins must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Population {
    Exhaustive,
    Sampled(String, String),
}

/// Result of one experiment run.
#[derive(Debug, Clone)]
pub struct ExperimentReport {
    pub sequence: EliminationSequence,
    pub n: usize,
    pub m: usize,
    pub mode: RatioKind,
    pub population: Population,
    pub stats: RatioStats,
    /// Closed-form bound for the mode, when defined (n >= 2).
    pub bound: Option<Ratio>,
    pub histogram: Histogram,
}

impl ExperimentReport {
    pub fn csv_row(&self) -> String {
        let (culture, phi) = match &self.population {
            Population::Exhaustive => ("exhaustive".to_string(), String::new()),
            Population::Sampled(c, p) => (c.clone(), p.clone()),
        };
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.sequence.compact(),
            self.n,
            self.m,
            self.mode,
            culture,
            phi,
            self.stats.count,
            self.stats.mean,
            self.stats.std,
            self.stats.max.numerator(),
            self.stats.max.denominator()
        )
    }

    pub fn csv(&self) -> String {
        format!("{CSV_HEADER}\n{}\n", self.csv_row())
    }

    pub fn to_json(&self) -> Value {
        let (culture, phi) = match &self.population {
            Population::Exhaustive => ("exhaustive".to_string(), Value::Null),
            Population::Sampled(c, p) => (c.clone(), p.parse::<f64>().map(Value::from).unwrap_or(Value::Null)),
        };
        json!({
            "sequence": self.sequence.compact(),
            "n": self.n,
            "m": self.m,
            "mode": self.mode,
            "culture": culture,
            "phi": phi,
            "count": self.stats.count,
            "mean": self.stats.mean,
            "std": self.stats.std,
            "max_num": self.stats.max.numerator(),
            "max_den": self.stats.max.denominator(),
            "max": self.stats.max,
            "min": self.stats.min,
            "bound": self.bound,
            "witness": self.stats.max_witness.as_ref().map(|p| p.to_text()),
        })
    }
}

fn bound(config: &ExperimentConfig) -> Option<Ratio> {
    bound_for(config.mode, &config.sequence, config.n, config.m).ok()
}

/// Enumerates every profile and summarises the chosen ratio.
pub fn run_exhaustive(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let options = SweepOptions { fix_first: config.fix_first, budget: config.budget, workers: config.workers };
    let sweep = exhaustive_sweep(&config.sequence, config.n, config.m, &options)?;
    let tally = sweep.tally(config.mode);
    let (_, index) = tally.max().expect("non-empty population");
    let witness = ProfileCursor::new(config.n, config.m, config.fix_first, index, 1)?.advance().cloned();
    let stats = RatioStats::from_tally(tally, witness).expect("non-empty population");
    let bound = bound(config);
    Ok(ExperimentReport {
        sequence: config.sequence.clone(),
        n: config.n,
        m: config.m,
        mode: config.mode,
        population: Population::Exhaustive,
        histogram: Histogram::from_tally(tally, bound, config.histogram_bins),
        stats,
        bound,
    })
}

/// Samples `config.samples` profiles from the configured culture.
pub fn run_montecarlo(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let sweep = montecarlo_sweep(
        &config.sequence,
        config.n,
        config.m,
        &config.culture,
        config.samples,
        config.seed,
        config.workers,
    )?;
    let tally = sweep.tally(config.mode);
    let (_, index) = tally.max().expect("non-empty population");
    let witness = config.culture.sample(config.n, config.m, RngStream::new(config.seed, index as u64))?;
    let stats = RatioStats::from_tally(tally, Some(witness)).expect("non-empty population");
    let bound = bound(config);
    let culture = match config.culture.kind {
        crate::culture::CultureKind::Impartial => "ic",
        crate::culture::CultureKind::Mallows => "mallows",
    };
    Ok(ExperimentReport {
        sequence: config.sequence.clone(),
        n: config.n,
        m: config.m,
        mode: config.mode,
        population: Population::Sampled(culture.into(), config.culture.phi_value().to_string()),
        histogram: Histogram::from_tally(tally, bound, config.histogram_bins),
        stats,
        bound,
    })
}
