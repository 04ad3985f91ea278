//! homgrow command line.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use homgrow_core::group_ring::{LaurentChainComplex, QuotientSpec};

mod commands;
pub mod input;
pub mod verify;

pub use commands::{cmd_export, cmd_homology, cmd_tower};
pub use verify::{cmd_verify, run_suite, Suite, SuiteResult, Thresholds};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("parse error {0}")]
    Parse(String),
    #[error("input error: {0}")]
    Input(String),
    #[error("{0}")]
    Core(homgrow_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Core(homgrow_core::Error::IdentityViolation { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "homgrow", version, about = "Homological growth invariants along towers of finite quotients")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Homology, torsions and α data of one quotient level.
    Homology(ExperimentArgs),
    /// Normalized invariants along a tower of quotients.
    Tower(ExperimentArgs),
    /// Seeded property suites for the verified identities and bounds.
    Verify(VerifyArgs),
    /// Writes a builtin example in the JSON complex schema.
    Export(SourceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Complex in the JSON schema.
    #[arg(long, conflicts_with = "example")]
    pub input: Option<PathBuf>,
    /// Builtin: circle, torus2, torus3, s1_cross or mapping_torus:[[a,b],[c,d]].
    #[arg(long)]
    pub example: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// Tower parameters `i`; each level's moduli come from `--moduli-pattern`.
    #[arg(long, value_delimiter = ',')]
    pub levels: Vec<u64>,
    /// Comma-separated moduli, each `i` or a fixed integer, e.g. `i,i`.
    #[arg(long)]
    pub moduli_pattern: Option<String>,
    #[arg(long, value_delimiter = ',', default_value = "2,3")]
    pub primes: Vec<u64>,
    #[arg(long)]
    pub max_degree: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Largest chain rank for exact determinants; beyond it the character
    /// spectrum is used.
    #[arg(long, default_value_t = 96)]
    pub exact_det_max_dim: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Run one suite only.
    #[arg(long, value_enum)]
    pub suite: Option<Suite>,
    /// Instances per randomized suite.
    #[arg(long)]
    pub count: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5e-3)]
    pub alpha_tail: f64,
    #[arg(long, default_value_t = 1e-4)]
    pub torsion_tolerance: f64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub complex: LaurentChainComplex,
    pub levels: Vec<QuotientSpec>,
    pub primes: Vec<u64>,
    pub max_degree: usize,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub jobs: usize,
    pub exact_det_max_dim: usize,
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

pub fn load_source(src: &SourceArgs) -> Result<LaurentChainComplex, CliError> {
    match (&src.input, &src.example) {
        (Some(path), None) => input::parse_complex(&std::fs::read_to_string(path)?),
        (None, Some(name)) => input::builtin(name),
        _ => Err(CliError::Input("exactly one of --input and --example is required".into())),
    }
}

fn default_levels(m: usize) -> Vec<u64> {
    match m {
        0 => vec![1],
        1 => (0..=6).map(|k| 1 << k).collect(),
        2 => vec![1, 2, 4, 8],
        _ => vec![1, 2, 4],
    }
}

/// Moduli of level `i` under a pattern such as `i,i` or `i,2`.
pub fn moduli_for(pattern: &[Option<u64>], i: u64) -> Vec<u64> {
    pattern.iter().map(|p| p.unwrap_or(i)).collect()
}

fn parse_pattern(text: Option<&str>, m: usize) -> Result<Vec<Option<u64>>, CliError> {
    let Some(text) = text else {
        return Ok(vec![None; m]);
    };
    let tokens: Vec<Option<u64>> = text
        .split(',')
        .filter(|t| !t.trim().is_empty())
        .map(|t| match t.trim() {
            "i" => Ok(None),
            n => n
                .parse::<u64>()
                .ok()
                .filter(|&v| v > 0)
                .map(Some)
                .ok_or_else(|| CliError::Input(format!("moduli pattern token {n:?} is neither `i` nor a positive integer"))),
        })
        .collect::<Result<_, _>>()?;
    if tokens.len() != m {
        return Err(CliError::Input(format!(
            "moduli pattern {text:?} has {} entries for a complex over ℤ^{m}",
            tokens.len()
        )));
    }
    Ok(tokens)
}

impl ExperimentConfig {
    pub fn from_args(args: &ExperimentArgs) -> Result<Self, CliError> {
        let complex = load_source(&args.source)?;
        let m = complex.num_vars();
        let pattern = parse_pattern(args.moduli_pattern.as_deref(), m)?;
        let indices = if args.levels.is_empty() {
            default_levels(m)
        } else {
            args.levels.clone()
        };
        if indices.contains(&0) {
            return Err(CliError::Input("levels must be positive".into()));
        }
        let levels = indices
            .iter()
            .map(|&i| QuotientSpec::new(moduli_for(&pattern, i)).map_err(CliError::Core))
            .collect::<Result<Vec<_>, _>>()?;
        if let Some(p) = args.primes.iter().find(|&&p| !is_prime(p)) {
            return Err(CliError::Input(format!("{p} is not prime")));
        }
        if args.jobs == 0 {
            return Err(CliError::Input("--jobs must be at least 1".into()));
        }
        Ok(ExperimentConfig {
            max_degree: args.max_degree.unwrap_or(complex.top_degree()),
            complex,
            levels,
            primes: args.primes.clone(),
            format: args.format,
            out: args.source.out.clone(),
            jobs: args.jobs,
            exact_det_max_dim: args.exact_det_max_dim,
        })
    }
}

pub(crate) fn emit(out: &Option<PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

/// Parses `args` (including the program name) and runs the command,
/// writing results to `stdout` unless `--out` is given. Returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(stderr, "{e}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    let result = match &cli.command {
        Command::Homology(a) => {
            // Without `--levels`, the trivial quotient `ℤ ⊗_{ℤ[ℤ^m]} C`.
            let mut a = a.clone();
            if a.levels.is_empty() {
                a.levels = vec![1];
            }
            ExperimentConfig::from_args(&a).and_then(|c| cmd_homology(&c, stdout))
        }
        Command::Tower(a) => ExperimentConfig::from_args(a).and_then(|c| cmd_tower(&c, stdout)),
        Command::Verify(a) => cmd_verify(a, stdout),
        Command::Export(a) => cmd_export(a, stdout),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "homgrow: {e}");
            e.exit_code()
        }
    }
}
