//! Command-line front end. [`run`] returns the process exit status:
//! 0 on success, 1 when a module rejects the data, 2 for usage and I/O
//! problems. Output is assembled in memory and written only on success.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::classicality::{
    bayes_consistency, bell_check, bell_grid_scan, bell_scan_row, write_bell_csv, PairwiseSystem, DEFAULT_GRID_STEP,
};
use crate::error::Error;
use crate::format::to_json_string;
use crate::frequency::{
    count_outcomes, estimate_frequencies, stabilization_report, TrialSequence, DEFAULT_STABILIZATION_TOL,
    DEFAULT_WINDOW_FRACTION,
};
use crate::game::{ql_averages, total_averages, GameContexts, GameSpec};
use crate::montecarlo::simulate_game;
use crate::prob::{check_reversibility, ContextData};
use crate::qlra::{build_representation, reconstruct_data};

#[derive(Debug, Parser)]
#[command(
    name = "qlgame",
    version,
    about = "Quantum-like representation and simulation of contextual games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Io {
    /// Input file
    #[arg(long, short)]
    input: PathBuf,
    /// Output file (standard output when omitted)
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct GameFiles {
    /// Game specification (JSON)
    #[arg(long)]
    game: PathBuf,
    /// Context data (JSON): one context, or `{"pairs": [...]}`
    #[arg(long)]
    context: PathBuf,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate context data and report its classical consistency
    Validate(Io),
    /// Build the quantum-like representation of a two-outcome context
    Qlra(Io),
    /// Expected payoffs of a game
    Average {
        #[command(flatten)]
        files: GameFiles,
        /// Also evaluate the Hilbert-space form (two players, one context)
        #[arg(long)]
        ql: bool,
    },
    /// Bell inequality for the spin-1/2 model
    Bell {
        /// Angle triple `t1,t2,t3` in radians
        #[arg(long, conflicts_with = "grid", value_parser = parse_triple, allow_hyphen_values = true)]
        thetas: Option<[f64; 3]>,
        /// Scan all triples on a grid over [0, 2π) (default step π/12)
        #[arg(long, num_args = 0..=1, default_missing_value = "default")]
        grid: Option<String>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Joint-distribution feasibility of three pairwise joints
    Feasibility {
        /// Pairwise system (JSON)
        #[arg(long, short, required_unless_present_any = ["thetas", "covariances"])]
        input: Option<PathBuf>,
        /// Spin-1/2 system at angles `t1,t2,t3`
        #[arg(long, conflicts_with_all = ["input", "covariances"], value_parser = parse_triple, allow_hyphen_values = true)]
        thetas: Option<[f64; 3]>,
        /// Uniform marginals with correlations `ab,bc,ca`
        #[arg(long, conflicts_with = "input", value_parser = parse_triple, allow_hyphen_values = true)]
        covariances: Option<[f64; 3]>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Monte Carlo simulation of a game
    Simulate {
        #[command(flatten)]
        files: GameFiles,
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        partitions: usize,
    },
    /// Relative frequencies of a trial sequence (one label per line)
    Estimate {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = DEFAULT_WINDOW_FRACTION)]
        window: f64,
        #[arg(long, default_value_t = DEFAULT_STABILIZATION_TOL)]
        tol: f64,
        #[arg(long, default_value = "C")]
        tag: String,
    },
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0_f64; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("not a number: {p:?}"))?;
        if !o.is_finite() {
            return Err(format!("not finite: {p:?}"));
        }
    }
    Ok(out)
}

enum Failure {
    Domain(Error),
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

/// Syntax errors are usage errors; rejected values are domain errors.
fn parse_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| {
        let msg = format!("{}: {e}", path.display());
        match e.classify() {
            serde_json::error::Category::Data => Failure::Domain(Error::InvalidInput(msg)),
            _ => Failure::Usage(msg),
        }
    })
}

fn json<T: Serialize>(value: &T) -> Result<String, Failure> {
    to_json_string(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Usage(format!("serialization failed: {e}")))
}

fn load_contexts(path: &Path) -> Result<GameContexts, Failure> {
    let value: Value = parse_json(path)?;
    let parsed = if value.get("pairs").is_some() {
        serde_json::from_value::<GameContexts>(value)
    } else {
        serde_json::from_value::<ContextData>(value).map(|d| GameContexts::pair("", "", d))
    };
    parsed.map_err(|e| Failure::Domain(Error::InvalidInput(format!("{}: {e}", path.display()))))
}

/// Binds a single unnamed context to the first two players of the game.
fn bind_contexts(spec: &GameSpec, contexts: GameContexts) -> GameContexts {
    match contexts.pairs.as_slice() {
        [single] if single.first.is_empty() => GameContexts::for_spec(spec, single.data.clone()),
        _ => contexts,
    }
}

fn execute(cmd: Command) -> Result<(String, Option<PathBuf>, Vec<String>), Failure> {
    let mut warnings = Vec::new();
    let (text, output) = match cmd {
        Command::Validate(io) => {
            let data: ContextData = parse_json(&io.input)?;
            let report = json!({
                "valid": true,
                "symmetric_conditioning": data.is_symmetrically_conditioned(),
                "strictly_positive": data.is_strictly_positive(),
                "reversibility": check_reversibility(&data),
                "bayes": bayes_consistency(&data),
                "data": data,
            });
            (json(&report)?, io.output)
        }
        Command::Qlra(io) => {
            let data: ContextData = parse_json(&io.input)?;
            let rep = build_representation(&data)?;
            let reconstructed = reconstruct_data(&rep)?;
            let mut value = serde_json::to_value(&rep).map_err(|e| Failure::Usage(e.to_string()))?;
            value["invariant_residual"] = json!(rep.invariant_residual());
            value["reconstructed"] = serde_json::to_value(&reconstructed).map_err(|e| Failure::Usage(e.to_string()))?;
            (json(&value)?, io.output)
        }
        Command::Average { files, ql } => {
            let spec: GameSpec = parse_json(&files.game)?;
            warnings.extend(spec.sign_warnings());
            let contexts = bind_contexts(&spec, load_contexts(&files.context)?);
            let averages = total_averages(&spec, &contexts)?;
            let mut value = json!({ "averages": averages });
            if ql {
                let [pair] = contexts.pairs.as_slice() else {
                    return Err(Failure::Usage("--ql needs exactly one context".into()));
                };
                let rep = build_representation(&pair.data)?;
                value["ql_averages"] =
                    serde_json::to_value(ql_averages(&rep, &spec)?).map_err(|e| Failure::Usage(e.to_string()))?;
            }
            (json(&value)?, files.output)
        }
        Command::Bell { thetas, grid, output } => {
            let rows = match (thetas, grid) {
                (Some(t), None) => vec![bell_scan_row(t)?],
                (None, Some(step)) => {
                    let step = if step == "default" {
                        DEFAULT_GRID_STEP
                    } else {
                        step.parse()
                            .map_err(|_| Failure::Usage(format!("invalid grid step {step:?}")))?
                    };
                    bell_grid_scan(step)?
                }
                _ => return Err(Failure::Usage("bell needs --thetas or --grid".into())),
            };
            let mut buf = Vec::new();
            write_bell_csv(&rows, &mut buf).map_err(|e| Failure::Usage(e.to_string()))?;
            (String::from_utf8(buf).expect("csv output is UTF-8"), output)
        }
        Command::Feasibility {
            input,
            thetas,
            covariances,
            output,
        } => {
            let system = match (input, thetas, covariances) {
                (Some(path), _, _) => parse_json(&path)?,
                (None, Some(t), _) => PairwiseSystem::spin(t),
                (None, None, Some(c)) => PairwiseSystem::from_covariances(c)?,
                _ => {
                    return Err(Failure::Usage(
                        "feasibility needs --input, --thetas or --covariances".into(),
                    ))
                }
            };
            (json(&bell_check(&system)?)?, output)
        }
        Command::Simulate {
            files,
            trials,
            seed,
            partitions,
        } => {
            let spec: GameSpec = parse_json(&files.game)?;
            warnings.extend(spec.sign_warnings());
            let contexts = bind_contexts(&spec, load_contexts(&files.context)?);
            let report = simulate_game(&spec, &contexts, trials, seed, partitions)?;
            (json(&report)?, files.output)
        }
        Command::Estimate { io, window, tol, tag } => {
            let seq = TrialSequence::parse(&read(&io.input)?, tag)?;
            let frequencies = estimate_frequencies(&seq)?;
            let (stabilization, note) = match stabilization_report(&seq, window, tol) {
                Ok(r) => (Some(r), None),
                Err(e @ Error::SequenceTooShort { .. }) => (None, Some(e.to_string())),
                Err(e) => return Err(e.into()),
            };
            let value = json!({
                "context_tag": seq.context_tag,
                "n": seq.len(),
                "counts": count_outcomes(&seq.outcomes, seq.alphabet_size()),
                "frequencies": frequencies,
                "stabilization": stabilization,
                "stabilization_note": note,
            });
            (json(&value)?, io.output)
        }
    };
    Ok((text, output, warnings))
}

/// Parses `argv` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok((text, output, warnings)) => {
            for w in warnings {
                eprintln!("warning: {w}");
            }
            let written = match output {
                Some(path) => fs::write(&path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| e.to_string()),
            };
            match written {
                Ok(()) => 0,
                Err(msg) => {
                    eprintln!("error: {msg}");
                    2
                }
            }
        }
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}
