use thiserror::Error;

/// Errors produced by the game model, solvers and experiment drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("candidate {0} is not part of the game")]
    CandidateUnknown(String),
    #[error("elimination sequence has {found} turns but {expected} are required (m - 1)")]
    SequenceLengthMismatch { expected: usize, found: usize },
    #[error("voter {voter} is out of range for {voters} voters")]
    InvalidVoter { voter: usize, voters: usize },
    #[error("rankings have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("game tree with {candidates} candidates exceeds the limit of {limit}")]
    TreeTooLarge { candidates: usize, limit: usize },
    #[error("the equilibrium winner has Borda score 0; the ratio is undefined")]
    ZeroWelfare,
    #[error("parameters out of domain: {0}")]
    OutOfDomain(String),
    #[error("search needs {required} evaluations but the budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },
    #[error("dispersion phi = {0} must lie in (0, 1]")]
    PhiOutOfRange(f64),
    #[error("no preference profile satisfies the price-of-anarchy criteria: {0}")]
    Unsatisfiable(String),
    #[error("the sequence admits no sincerity-ratio extremal structure: {0}")]
    StructureUnsatisfiable(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
