use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gptlab_cli::document::SpaceDocument;
use gptlab_cli::report::{self, render_table};
use gptlab_cli::verify::{self, CorpusKind, CorpusSpec};
use gptlab_cli::{CliError, Result};
use gptlab_core::metrics::Fault;
use gptlab_core::StateSpace;
use serde::Serialize;

/// Exact analysis of finite-dimensional general probabilistic theories.
#[derive(Parser)]
#[command(name = "gptlab", version)]
struct Cli {
    /// Print machine-readable JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for sampled checks; the GPTLAB_SEED environment variable wins.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Summary of a state space: c, symmetry, decomposability, classification.
    Analyze {
        /// Space document; stdin when omitted or "-".
        input: Option<PathBuf>,
    },
    /// Kolmogorov distance and optimal discrimination probability of two states.
    Distance {
        input: Option<PathBuf>,
        #[arg(long)]
        s1: String,
        #[arg(long)]
        s2: String,
    },
    /// Whether states are perfectly distinguishable, with a witness measurement.
    Distinguish {
        input: Option<PathBuf>,
        /// A state as comma-separated rationals; repeat for each state.
        #[arg(long = "state", required = true)]
        states: Vec<String>,
    },
    /// Decomposition of a state into distinguishable pure states.
    Decompose {
        input: Option<PathBuf>,
        #[arg(long)]
        state: String,
    },
    /// Measurement entropy of a state, in bits.
    Entropy {
        input: Option<PathBuf>,
        #[arg(long)]
        state: String,
    },
    /// Automorphism group, invariant state and isogonality.
    Symmetry { input: Option<PathBuf> },
    /// Runs the structural checks over a corpus; exits 1 on any failure.
    Verify {
        #[arg(long, value_enum, default_value_t = Corpus::Default)]
        corpus: Corpus,
        /// Number of random polytopes (or random simplices).
        #[arg(long, default_value_t = 10)]
        random_count: usize,
        #[arg(long, default_value_t = 2)]
        min_dim: usize,
        #[arg(long, default_value_t = 3)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        min_vertices: usize,
        #[arg(long, default_value_t = 8)]
        max_vertices: usize,
        /// Test hook: flips the sign of the distance LP objective.
        #[arg(long)]
        inject_fault: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Corpus {
    Default,
    Builtins,
    Simplices,
    Random,
}

fn read_space(input: Option<&PathBuf>) -> Result<StateSpace> {
    let text = match input {
        Some(path) if path.as_os_str() != "-" => std::fs::read_to_string(path)?,
        _ => {
            let mut buf = String::new();
            std::io::stdin().read_to_string(&mut buf)?;
            buf
        }
    };
    SpaceDocument::parse(&text)?.build()
}

fn seed(flag: u64) -> Result<u64> {
    match std::env::var("GPTLAB_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Parse(format!("GPTLAB_SEED must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(flag),
    }
}

fn emit<T: Serialize>(value: &T, json: bool) {
    let value = serde_json::to_value(value).expect("reports serialize");
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("json"));
    } else {
        print!("{}", render_table(&value));
    }
}

fn run(cli: Cli) -> Result<()> {
    let seed = seed(cli.seed)?;
    match cli.command {
        Command::Analyze { input } => {
            let space = read_space(input.as_ref())?;
            emit(&report::cmd_analyze(&space, seed), cli.json);
        }
        Command::Distance { input, s1, s2 } => {
            let space = read_space(input.as_ref())?;
            let (a, b) = (report::state(&space, &s1)?, report::state(&space, &s2)?);
            emit(&report::cmd_distance(&space, &a, &b)?, cli.json);
        }
        Command::Distinguish { input, states } => {
            let space = read_space(input.as_ref())?;
            let states = states.iter().map(|s| report::state(&space, s)).collect::<Result<Vec<_>>>()?;
            emit(&report::cmd_distinguish(&space, &states)?, cli.json);
        }
        Command::Decompose { input, state } => {
            let space = read_space(input.as_ref())?;
            let s = report::state(&space, &state)?;
            emit(&report::cmd_decompose(&space, &s)?, cli.json);
        }
        Command::Entropy { input, state } => {
            let space = read_space(input.as_ref())?;
            let s = report::state(&space, &state)?;
            emit(&report::cmd_entropy(&space, &s)?, cli.json);
        }
        Command::Symmetry { input } => {
            let space = read_space(input.as_ref())?;
            emit(&report::cmd_symmetry(&space), cli.json);
        }
        Command::Verify {
            corpus,
            random_count,
            min_dim,
            max_dim,
            min_vertices,
            max_vertices,
            inject_fault,
        } => {
            if min_dim < 2 || min_dim > max_dim || min_vertices > max_vertices {
                return Err(CliError::Parse("invalid dimension or vertex range".into()));
            }
            let spec = CorpusSpec {
                kind: match corpus {
                    Corpus::Default => CorpusKind::Default,
                    Corpus::Builtins => CorpusKind::Builtins,
                    Corpus::Simplices => CorpusKind::Simplices,
                    Corpus::Random => CorpusKind::Random,
                },
                random_count,
                min_dim,
                max_dim,
                min_vertices,
                max_vertices,
            };
            let fault = if inject_fault { Fault::FlipDistanceObjective } else { Fault::None };
            let result = verify::cmd_verify(&spec, seed, fault);
            if cli.json {
                emit(&result, true);
            } else {
                print_checks(&result);
            }
            if !result.passed {
                let failed = result.failures().count();
                return Err(CliError::VerificationFailed(format!("{failed} of {} checks failed", result.checks.len())));
            }
        }
    }
    Ok(())
}

fn print_checks(result: &verify::VerifyReport) {
    let pw = result.checks.iter().map(|c| c.property.len()).max().unwrap_or(0);
    let iw = result.checks.iter().map(|c| c.instance.len()).max().unwrap_or(0);
    for c in &result.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        println!("{status}  {:<pw$}  {:<iw$}  {}", c.property, c.instance, c.detail);
    }
    let passed = result.checks.iter().filter(|c| c.passed).count();
    println!("{passed}/{} checks passed (seed {})", result.checks.len(), result.seed);
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gptlab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
