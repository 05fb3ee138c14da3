//! Voting by sequential elimination as a turn-based game.
//!
//! Voters act in a fixed sequence, each turn eliminating one remaining
//! candidate, until a single winner is left. This crate computes sincere,
//! strategic (subgame-perfect) and mixed outcomes, measures the welfare loss
//! of strategic play with Borda scores, builds profiles that attain the
//! worst-case bounds, and runs exhaustive and Monte-Carlo experiments.
//!
//! ```
//! use elimgame::{spne_outcome, sincere_play, EliminationSequence, PreferenceProfile};
//!
//! let profile = PreferenceProfile::from_letters(&["abcd", "cbad", "cadb"]).unwrap();
//! let seq: EliminationSequence = "1,2,3".parse().unwrap();
//! let sincere = sincere_play(&profile, &seq).unwrap();
//! let strategic = spne_outcome(&profile, &seq).unwrap();
//! assert_eq!(profile.label(sincere.winner), "c");
//! assert_eq!(profile.label(strategic.winner), "a");
//! ```

pub mod culture;
pub mod enumerate;
pub mod error;
pub mod experiment;
pub mod extremal;
pub mod oracle;
pub mod play;
pub mod profile;
pub mod ratio;
pub mod sequence;
pub mod stats;
pub mod sweep;
pub mod welfare;

pub use culture::{kendall_tau, sample_impartial, sample_mallows, CultureKind, CultureSpec, Reference, RngStream};
pub use enumerate::{enumerate_profiles, profile_count};
pub use error::{Error, Result};
pub use extremal::{
    build_poa_tight, build_sr_tight, gen_poa_tight, gen_sr_tight, verify_tight, ExtremalInstance, ExtremalMode,
    ExtremalSpec, TightnessReport,
};
pub use oracle::{backward_induction, backward_induction_with_limit, GameTree, TieBreak};
pub use play::{mixed_play, sincere_play, spne_outcome, BehaviorAssignment, GameTrace, PlayMode, Step};
pub use profile::{Candidate, PreferenceProfile, Vote};
pub use ratio::Ratio;
pub use sequence::{EliminationSequence, OccurrenceTable};
pub use stats::{Histogram, RatioStats, RatioTally};
pub use sweep::{exhaustive_sweep, montecarlo_sweep, SweepOptions, SweepResult, DEFAULT_BUDGET};
pub use welfare::{
    bound_for, exact_worst_ratio, poa_formula, ratio_ab, ratio_cb, sr_upper_bound, welfare_outcome, RatioKind,
    WelfareOutcome, WorstCaseResult,
};
