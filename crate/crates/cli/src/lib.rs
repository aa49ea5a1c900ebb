//! `sppt` command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | numeric or internal failure |
//! | 2 | invalid input (parse, dimension, precondition) |
//! | 3 | decomposition failed verification |
//! | 4 | basis search exhausted without success |

pub mod wire;

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::Serialize;
use sppt_core::{
    basis, classification, decomposition, factorization, linalg, states, BipartiteState, BlockFactor, ComplexMatrix,
    SearchTarget, DEFAULT_TOL,
};
use thiserror::Error;

use wire::{ClassificationJson, DecompositionJson, FactorJson, MatrixJson, SearchJson, StateJson, VerificationJson};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("invalid JSON in {what}: {source}")]
    Json { what: String, source: serde_json::Error },
    #[error(transparent)]
    Core(#[from] sppt_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use sppt_core::Error as E;
        match self {
            CliError::Input(_) | CliError::Json { .. } | CliError::Io { .. } => 2,
            CliError::Core(e) => match e {
                E::ConvergenceFailure
                | E::DiagonalizationFailure { .. }
                | E::RangeViolation { .. }
                | E::Internal(_) => 1,
                _ => 2,
            },
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "sppt", version, about = "SPPT classification and separable decompositions of bipartite states")]
struct Cli {
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Relative tolerance.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a state.
    #[command(subcommand)]
    Gen(Gen),
    /// Block Cholesky factor of a state.
    Factor(InputArg),
    /// PPT / SPPT / super SPPT verdicts.
    Classify {
        #[command(flatten)]
        input: InputArg,
        /// A-basis unitary (matrix JSON); defaults to the computational basis.
        #[arg(long)]
        basis: Option<PathBuf>,
    },
    /// Separable decomposition of a super SPPT state.
    Decompose {
        /// State JSON (stdin if neither this nor --factor is given).
        #[arg(long, conflicts_with = "factor")]
        input: Option<PathBuf>,
        /// Use this factor JSON instead of re-factoring a state.
        #[arg(long)]
        factor: Option<PathBuf>,
    },
    /// Check a decomposition against a state; exit 3 if it fails.
    Verify {
        /// State JSON; defaults to the state embedded in the decomposition.
        #[arg(long)]
        state: Option<PathBuf>,
        /// Decomposition JSON (stdin if absent).
        #[arg(long)]
        decomp: Option<PathBuf>,
    },
    /// Apply a local unitary on one side.
    Transform {
        #[command(flatten)]
        input: InputArg,
        #[arg(long)]
        unitary: PathBuf,
        #[arg(long, value_enum)]
        side: Side,
    },
    /// Random search for an A-basis achieving a verdict; exit 4 if none found.
    SearchBasis {
        #[command(flatten)]
        input: InputArg,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Target::Sppt)]
        target: Target,
    },
}

#[derive(Debug, Args)]
struct InputArg {
    /// Input JSON (stdin if absent).
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Dims {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// Two-qubit Werner state W_p.
    Werner {
        #[arg(long)]
        p: f64,
    },
    /// Classical-quantum state; explicit with --probs/--sigmas, random otherwise.
    Cq {
        /// Comma-separated probabilities.
        #[arg(long, value_delimiter = ',', requires = "sigmas")]
        probs: Option<Vec<f64>>,
        /// JSON list of N×N density matrices.
        #[arg(long, requires = "probs")]
        sigmas: Option<PathBuf>,
        /// A-basis unitary; identity if absent.
        #[arg(long, requires = "probs")]
        basis: Option<PathBuf>,
        #[arg(long, required_unless_present = "probs")]
        m: Option<usize>,
        #[arg(long, required_unless_present = "probs")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Classical-classical state; explicit with --joint, random otherwise.
    Cc {
        /// JSON M×N array of joint probabilities.
        #[arg(long)]
        joint: Option<PathBuf>,
        #[arg(long, requires = "joint")]
        basis_a: Option<PathBuf>,
        #[arg(long, requires = "joint")]
        basis_b: Option<PathBuf>,
        #[arg(long, required_unless_present = "joint")]
        m: Option<usize>,
        #[arg(long, required_unless_present = "joint")]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Random full-rank density matrix.
    Random(Dims),
    /// Random super SPPT state.
    RandomSsppt(Dims),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    A,
    B,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Target {
    Sppt,
    Ssppt,
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> CliResult<i32> {
    let tol = cli.tol;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(CliError::Input(format!("--tol must be positive and finite, got {tol}")));
    }
    let out = cli.output.as_deref();
    match &cli.command {
        Command::Gen(g) => emit(out, &StateJson::from(&generate(g)?)).map(|_| 0),
        Command::Factor(i) => {
            let f = factorization::block_cholesky(&read_state(i.input.as_deref())?, tol)?;
            emit(out, &FactorJson::from(&f)).map(|_| 0)
        }
        Command::Classify { input, basis } => {
            let rho = read_state(input.input.as_deref())?;
            let u = match basis {
                Some(p) => read_matrix(p)?,
                None => ComplexMatrix::identity(rho.dim_a()),
            };
            let c = classification::classify(&rho, &u, tol)?;
            emit(out, &ClassificationJson::from(&c)).map(|_| 0)
        }
        Command::Decompose { input, factor } => {
            let factor: BlockFactor = match factor {
                Some(p) => (&read_json::<FactorJson>(Some(p))?).try_into()?,
                None => factorization::block_cholesky(&read_state(input.as_deref())?, tol)?,
            };
            let rho = states::from_factor(&factor)?;
            let d = decomposition::separable_decomposition(&factor, tol)?;
            emit(out, &DecompositionJson::new(&d, Some(&rho))).map(|_| 0)
        }
        Command::Verify { state, decomp } => {
            let d: DecompositionJson = read_json(decomp.as_deref())?;
            let rho = match (state, &d.state) {
                (Some(p), _) => read_state(Some(p))?,
                (None, Some(s)) => s.try_into()?,
                (None, None) => {
                    return Err(CliError::Input("no --state given and the decomposition embeds none".into()))
                }
            };
            let report = decomposition::verify_decomposition(&d.decomposition(), &rho, tol)?;
            emit(out, &VerificationJson::from(&report))?;
            Ok(if report.passed { 0 } else { 3 })
        }
        Command::Transform { input, unitary, side } => {
            let rho = read_state(input.input.as_deref())?;
            let u = read_matrix(unitary)?;
            let moved = match side {
                Side::A => basis::local_unitary_a(&rho, &u)?,
                Side::B => basis::local_unitary_b(&rho, &u)?,
            };
            emit(out, &StateJson::from(&moved)).map(|_| 0)
        }
        Command::SearchBasis { input, trials, seed, target } => {
            let rho = read_state(input.input.as_deref())?;
            let target = match target {
                Target::Sppt => SearchTarget::Sppt,
                Target::Ssppt => SearchTarget::SuperSppt,
            };
            let outcome = basis::random_basis_search(&rho, *trials, tol, *seed, target)?;
            let (found, candidate) = match &outcome.found {
                Some(c) => (true, c),
                None => (false, &outcome.best),
            };
            emit(
                out,
                &SearchJson {
                    found,
                    trials: outcome.trials,
                    trial: candidate.trial,
                    basis: (&candidate.basis).into(),
                    classification: (&candidate.classification).into(),
                },
            )?;
            if !found {
                eprintln!("not found after {} trials", outcome.trials);
            }
            Ok(if found { 0 } else { 4 })
        }
    }
}

fn generate(g: &Gen) -> CliResult<BipartiteState> {
    Ok(match g {
        Gen::Werner { p } => states::werner(*p)?,
        Gen::Cq { probs: Some(probs), sigmas: Some(sigmas), basis, .. } => {
            let sigmas: Vec<MatrixJson> = read_json(Some(sigmas))?;
            let sigmas = sigmas.iter().map(ComplexMatrix::try_from).collect::<sppt_core::Result<Vec<_>>>()?;
            let u = match basis {
                Some(p) => read_matrix(p)?,
                None => ComplexMatrix::identity(probs.len()),
            };
            states::cq_state(probs, &sigmas, &u)?
        }
        Gen::Cq { m, n, seed, .. } => {
            let (m, n) = (m.expect("required by clap"), n.expect("required by clap"));
            check_dims(m, n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let probs = states::random_distribution(m, &mut rng);
            let sigmas: Vec<ComplexMatrix> = (0..m).map(|_| states::random_local_density(n, &mut rng)).collect();
            let u = linalg::random_unitary(m, &mut rng);
            states::cq_state(&probs, &sigmas, &u)?
        }
        Gen::Cc { joint: Some(joint), basis_a, basis_b, .. } => {
            let joint: Vec<Vec<f64>> = read_json(Some(joint))?;
            let m = joint.len();
            let n = joint.first().map_or(0, Vec::len);
            let ua = basis_a.as_deref().map(read_matrix).transpose()?.unwrap_or_else(|| ComplexMatrix::identity(m));
            let ub = basis_b.as_deref().map(read_matrix).transpose()?.unwrap_or_else(|| ComplexMatrix::identity(n));
            states::cc_state(&joint, &ua, &ub)?
        }
        Gen::Cc { m, n, seed, .. } => {
            let (m, n) = (m.expect("required by clap"), n.expect("required by clap"));
            check_dims(m, n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let flat = states::random_distribution(m * n, &mut rng);
            let joint: Vec<Vec<f64>> = flat.chunks(n).map(<[f64]>::to_vec).collect();
            let ua = linalg::random_unitary(m, &mut rng);
            let ub = linalg::random_unitary(n, &mut rng);
            states::cc_state(&joint, &ua, &ub)?
        }
        Gen::Random(d) => {
            check_dims(d.m, d.n)?;
            states::random_density(d.m, d.n, d.seed)?
        }
        Gen::RandomSsppt(d) => states::random_super_sppt(d.m, d.n, d.seed)?.0.normalized()?,
    })
}

fn check_dims(m: usize, n: usize) -> CliResult<()> {
    if m == 0 || n == 0 {
        return Err(CliError::Input(format!("dimensions must be positive, got {m}x{n}")));
    }
    Ok(())
}

fn read_text(path: Option<&Path>) -> CliResult<(String, String)> {
    match path {
        Some(p) => {
            let name = p.display().to_string();
            let text = fs::read_to_string(p).map_err(|source| CliError::Io { path: name.clone(), source })?;
            Ok((name, text))
        }
        None => {
            let mut text = String::new();
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|source| CliError::Io { path: "<stdin>".into(), source })?;
            Ok(("<stdin>".into(), text))
        }
    }
}

fn read_json<T: DeserializeOwned>(path: Option<&Path>) -> CliResult<T> {
    let (what, text) = read_text(path)?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { what, source })
}

fn read_state(path: Option<&Path>) -> CliResult<BipartiteState> {
    Ok((&read_json::<StateJson>(path)?).try_into()?)
}

fn read_matrix(path: &Path) -> CliResult<ComplexMatrix> {
    Ok((&read_json::<MatrixJson>(Some(path))?).try_into()?)
}

fn emit<T: Serialize>(path: Option<&Path>, value: &T) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(value).expect("wire types serialize");
    text.push('\n');
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.display().to_string(), source }),
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "<stdout>".into(), source }),
    }
}
