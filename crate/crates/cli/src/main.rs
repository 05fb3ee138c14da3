use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand, ValueEnum};
use elimgame::experiment::{run_exhaustive, run_montecarlo, ExperimentConfig, ExperimentReport};
use elimgame::{
    backward_induction, build_poa_tight, build_sr_tight, mixed_play, poa_formula, sincere_play, spne_outcome,
    sr_upper_bound, verify_tight, BehaviorAssignment, CultureKind, CultureSpec, EliminationSequence, Error,
    ExtremalMode, PreferenceProfile, RatioKind, Reference, TieBreak, DEFAULT_BUDGET,
};
use serde_json::json;

const BUDGET_ENV: &str = "ELIMGAME_BUDGET";

#[derive(Parser)]
#[command(name = "elimgame", version, about = "Sequential elimination voting games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Play one profile under a sequence and print the trace as JSON.
    Solve(SolveArgs),
    /// Enumerate every profile and print the ratio statistics.
    Exhaustive(ExhaustiveArgs),
    /// Sample profiles from a culture and print the ratio statistics.
    Montecarlo(MontecarloArgs),
    /// Build a bound-tight profile and verify it.
    Extremal(ExtremalArgs),
    /// Print the closed-form price-of-anarchy and sincerity-ratio bounds.
    Bounds(ShapeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Behavior {
    Sincere,
    Strategic,
    Oracle,
    Mixed,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReferenceArg {
    Identity,
    Random,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExtremalArg {
    #[value(name = "poa", alias = "POA_TIGHT")]
    Poa,
    #[value(name = "sr", alias = "SR_TIGHT")]
    Sr,
}

#[derive(Args)]
struct SolveArgs {
    /// Profile file, one ranking per line, best first.
    #[arg(long)]
    profile: PathBuf,
    /// Voter turns, e.g. `1,2,3,1` or `1231`.
    #[arg(long)]
    sequence: EliminationSequence,
    #[arg(long, value_enum, default_value = "sincere")]
    behavior: Behavior,
    /// Voters (1-based) who play sincerely in mixed mode, e.g. `1,3`.
    #[arg(long, value_delimiter = ',')]
    sincere: Vec<usize>,
}

#[derive(Args)]
struct ShapeArgs {
    #[arg(long)]
    sequence: EliminationSequence,
    /// Number of voters; defaults to the largest voter in the sequence.
    #[arg(short = 'n', long)]
    voters: Option<usize>,
    /// Number of candidates; defaults to the sequence length plus one.
    #[arg(short = 'm', long)]
    candidates: Option<usize>,
}

impl ShapeArgs {
    fn shape(&self) -> (usize, usize) {
        let n = self.voters.unwrap_or_else(|| self.sequence.min_voters());
        let m = self.candidates.unwrap_or(self.sequence.len() + 1);
        (n, m)
    }
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    /// Ratio to report: `AB` (price of anarchy) or `CB` (sincerity ratio).
    #[arg(long, default_value = "AB")]
    mode: RatioKind,
    #[arg(long)]
    workers: Option<usize>,
    /// Histogram bin count.
    #[arg(long, default_value_t = 50)]
    bins: usize,
    /// Write the histogram CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExhaustiveArgs {
    #[command(flatten)]
    run: RunArgs,
    /// Fix voter 1 to the identity ranking (valid by relabeling invariance).
    #[arg(long, action = ArgAction::Set, default_value_t = true)]
    fix_first: bool,
    /// Maximum number of profiles to enumerate; overrides ELIMGAME_BUDGET.
    #[arg(long)]
    budget: Option<u128>,
    /// Ignore the enumeration budget.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct MontecarloArgs {
    #[command(flatten)]
    run: RunArgs,
    /// `ic`, `mallows` (with --phi) or `mallows:phi=0.6`.
    #[arg(long, default_value = "ic")]
    culture: String,
    #[arg(long)]
    phi: Option<f64>,
    /// Mallows reference ranking.
    #[arg(long, value_enum, default_value = "identity")]
    reference: ReferenceArg,
    #[arg(long, default_value_t = 3_628_800)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct ExtremalArgs {
    #[command(flatten)]
    shape: ShapeArgs,
    #[arg(long, value_enum)]
    mode: ExtremalArg,
}

enum Failure {
    Model(Error),
    Io(String),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Model(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Model(e) => match e {
                Error::Parse { .. } => 2,
                Error::Unsatisfiable(_) | Error::StructureUnsatisfiable(_) => 4,
                Error::BudgetExceeded { .. } => 5,
                _ => 3,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Model(e @ Error::BudgetExceeded { .. }) => {
                format!("{e}; rerun with --force or raise {BUDGET_ENV}")
            }
            Failure::Model(e) => e.to_string(),
            Failure::Io(m) | Failure::Usage(m) => m.clone(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(a) => solve(a),
        Command::Exhaustive(a) => exhaustive(a),
        Command::Montecarlo(a) => montecarlo(a),
        Command::Extremal(a) => extremal(a),
        Command::Bounds(a) => bounds(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}

/// Writes to stdout; a closed pipe (e.g. `| head`) is not an error.
fn emit_text(text: &str) -> Result<(), Failure> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure::Io(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn read_profile(path: &Path) -> Result<PreferenceProfile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(PreferenceProfile::parse(&text)?)
}

fn solve(a: SolveArgs) -> Result<(), Failure> {
    let profile = read_profile(&a.profile)?;
    let trace = match a.behavior {
        Behavior::Sincere => sincere_play(&profile, &a.sequence)?,
        Behavior::Strategic => spne_outcome(&profile, &a.sequence)?,
        Behavior::Oracle => backward_induction(&profile, &a.sequence, &TieBreak::ascending(profile.candidates()))?,
        Behavior::Mixed => {
            if a.sincere.contains(&0) {
                return Err(Failure::Usage("voters are numbered from 1".into()));
            }
            let set: BTreeSet<usize> = a.sincere.iter().map(|v| v - 1).collect();
            mixed_play(&profile, &a.sequence, &BehaviorAssignment::new(set))?
        }
    };
    emit_text(&format!("{}\n", trace.to_json(&profile)))
}

fn env_budget() -> Result<Option<u128>, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Failure::Usage(format!("{BUDGET_ENV} must be a non-negative integer, got `{v}`"))),
        Err(_) => Ok(None),
    }
}

fn config(run: &RunArgs) -> ExperimentConfig {
    let (n, m) = run.shape.shape();
    let mut cfg = ExperimentConfig::new(n, m, run.shape.sequence.clone(), run.mode);
    if let Some(w) = run.workers {
        cfg.workers = w;
    }
    cfg.histogram_bins = run.bins;
    cfg
}

fn emit(report: &ExperimentReport, out: Option<&Path>) -> Result<(), Failure> {
    emit_text(&format!("{}{}\n", report.csv(), report.to_json()))?;
    if let Some(path) = out {
        fs::write(path, report.histogram.to_csv())
            .map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn exhaustive(a: ExhaustiveArgs) -> Result<(), Failure> {
    let mut cfg = config(&a.run);
    cfg.fix_first = a.fix_first;
    cfg.budget = if a.force {
        u128::MAX
    } else {
        match a.budget {
            Some(b) => b,
            None => env_budget()?.unwrap_or(DEFAULT_BUDGET),
        }
    };
    emit(&run_exhaustive(&cfg)?, a.run.out.as_deref())
}

fn culture(a: &MontecarloArgs) -> Result<CultureSpec, Failure> {
    let spec = match (a.culture.as_str(), a.phi) {
        ("mallows", Some(phi)) => CultureSpec::mallows(phi)?,
        ("mallows", None) => return Err(Failure::Usage("--culture mallows needs --phi".into())),
        (s, phi) => {
            let spec: CultureSpec = s.parse()?;
            if phi.is_some() && spec.kind == CultureKind::Impartial {
                return Err(Failure::Usage("--phi only applies to the mallows culture".into()));
            }
            spec
        }
    };
    Ok(match a.reference {
        ReferenceArg::Identity => spec,
        ReferenceArg::Random => spec.with_reference(Reference::Random),
    })
}

fn montecarlo(a: MontecarloArgs) -> Result<(), Failure> {
    let mut cfg = config(&a.run);
    cfg.culture = culture(&a)?;
    cfg.samples = a.samples;
    cfg.seed = a.seed;
    emit(&run_montecarlo(&cfg)?, a.run.out.as_deref())
}

fn extremal(a: ExtremalArgs) -> Result<(), Failure> {
    let (n, m) = a.shape.shape();
    let seq = &a.shape.sequence;
    let (instance, mode) = match a.mode {
        ExtremalArg::Poa => (build_poa_tight(n, m, seq)?, ExtremalMode::PoaTight),
        ExtremalArg::Sr => (build_sr_tight(n, m, seq)?, ExtremalMode::SrTight),
    };
    let report = verify_tight(&instance.profile, seq, mode)?;
    let label = |c: elimgame::Candidate| instance.profile.label(c);
    let json = json!({
            "mode": mode,
            "n": n,
            "m": m,
            "sequence": seq,
            "x": instance.spec.x + 1,
            "y": instance.spec.y.map(|y| y + 1),
            "b": label(instance.spec.b),
            "other": label(instance.spec.other),
            "e": instance.spec.e.map(label),
        "report": report,
    });
    emit_text(&format!("{}{json}\n", instance.profile.to_text()))
}

fn bounds(a: ShapeArgs) -> Result<(), Failure> {
    let (n, m) = a.shape();
    a.sequence.validate(n, m)?;
    let o_max = a.sequence.occurrences(n).o_max;
    let poa = poa_formula(n, m, o_max)?;
    let sr = sr_upper_bound(n, m, o_max)?;
    let json = json!({
            "sequence": a.sequence,
            "n": n,
            "m": m,
            "o_max": o_max,
            "palindromic": a.sequence.is_palindromic(),
            "poa": poa,
            "sr_upper": sr,
    });
    emit_text(&format!("{json}\n"))
}
