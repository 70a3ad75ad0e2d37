//! `dfrechet`: discrete Fréchet distance under translation from the command
//! line.
//!
//! Every command prints one JSON object on standard output. Exit codes: 0 on
//! success (or a feasible decision), 1 for an infeasible decision, 2 for
//! unreadable input or arguments, 3 when an input or result violates an
//! invariant.

mod bench;
mod input;
mod output;

use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dfrechet_core::arrangement::{build_arrangement, build_disks};
use dfrechet_core::decide::{decide, optimize_bisect, optimize_exact, Backend};
use dfrechet_core::free_space::{stationary_decide, stationary_frechet};
use dfrechet_core::oracles::{naive_decide, naive_optimize};
use dfrechet_core::{FreeSpaceMatrix, Point2, PointSequence, Tolerance};

use crate::input::InputDocument;
use crate::output::{xy, ArrangementDump, ResultDocument, Stats};

#[derive(Debug)]
pub enum CliError {
    Parse(String),
    Invariant(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse(m) => write!(f, "parse error: {m}"),
            CliError::Invariant(m) => write!(f, "invariant violation: {m}"),
        }
    }
}

impl From<dfrechet_core::Error> for CliError {
    fn from(e: dfrechet_core::Error) -> Self {
        CliError::Invariant(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "dfrechet", version, about = "Discrete Fréchet distance under translation")]
struct Cli {
    /// Absolute tolerance for geometric comparisons.
    #[arg(long, global = true, env = "FT_TOL", default_value_t = Tolerance::DEFAULT_EPS)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Format {
    /// One file: {"P": [[x, y], ...], "Q": [[x, y], ...]}
    #[default]
    Json,
    /// Two files (P then Q), one `x,y` point per line.
    Csv,
}

#[derive(Args)]
struct InputArgs {
    /// Input file(s).
    #[arg(required = true, num_args = 1..=2)]
    files: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum BackendArg {
    #[default]
    Fast,
    Naive,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Fast => Backend::Fast,
            BackendArg::Naive => Backend::Naive,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Mode {
    /// Binary search over critical values.
    #[default]
    Exact,
    /// Bisection on the distance down to --eps.
    Bisect,
}

#[derive(Subcommand)]
enum Command {
    /// Discrete Fréchet distance without translation.
    Stationary(InputArgs),
    /// Whether some translation achieves distance at most --delta.
    Decide {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_enum, default_value_t)]
        backend: BackendArg,
        /// Write the disk arrangement as JSON to this file.
        #[arg(long)]
        dump_arrangement: Option<PathBuf>,
    },
    /// Minimum distance over all translations.
    Optimize {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value_t)]
        mode: Mode,
        /// Bracket width for bisection.
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
        #[arg(long, value_enum, default_value_t)]
        backend: BackendArg,
    },
    /// Reference computation: decision with --delta, optimization otherwise.
    Oracle {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Random instances: tree update touch counts and backend costs.
    Bench {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(2..))]
        m: u64,
        #[arg(long, default_value_t = 64, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        trials: usize,
    },
}

fn load(args: &InputArgs) -> Result<(PointSequence, PointSequence), CliError> {
    let doc: InputDocument = match (args.format, args.files.as_slice()) {
        (Format::Json, [path]) => input::load_json(path)?,
        (Format::Csv, [p, q]) => input::load_csv(p, q)?,
        (Format::Json, _) => return Err(CliError::Parse("json input takes one file".into())),
        (Format::Csv, _) => return Err(CliError::Parse("csv input takes two files (P, Q)".into())),
    };
    doc.sequences()
}

fn check_witness(p: &PointSequence, q: &PointSequence, delta: f64, w: Point2, tol: Tolerance) -> Result<(), CliError> {
    let m = FreeSpaceMatrix::build(p, q, w, delta, tol)?;
    if stationary_decide(&m) {
        Ok(())
    } else {
        Err(CliError::Invariant(format!(
            "witness ({}, {}) does not achieve distance {delta}",
            w.x, w.y
        )))
    }
}

fn run(cli: Cli) -> Result<(ResultDocument, u8), CliError> {
    let tol = Tolerance::new(cli.tol).map_err(|e| CliError::Parse(e.to_string()))?;
    let eps = tol.eps();
    let mut exit = 0;
    let doc = match cli.command {
        Command::Stationary(input) => {
            let (p, q) = load(&input)?;
            let mut doc = ResultDocument::new("stationary", eps);
            doc.value = Some(stationary_frechet(&p, &q));
            doc
        }
        Command::Decide {
            input,
            delta,
            backend,
            dump_arrangement,
        } => {
            let (p, q) = load(&input)?;
            if let Some(path) = dump_arrangement {
                let ag = build_arrangement(&build_disks(&p, &q, delta)?, tol)?;
                let text = serde_json::to_string_pretty(&ArrangementDump::from(&ag))
                    .map_err(|e| CliError::Invariant(e.to_string()))?;
                fs::write(&path, text)
                    .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
            }
            let r = decide(&p, &q, delta, backend.into(), tol)?;
            if let Some(w) = r.witness {
                check_witness(&p, &q, delta, w, tol)?;
            }
            let mut doc = ResultDocument::new("decide", eps);
            doc.backend = Some(format!("{backend:?}").to_lowercase());
            doc.delta = Some(delta);
            doc.feasible = Some(r.feasible);
            doc.witness = r.witness.map(xy);
            doc.stats = Some(r.stats.into());
            exit = u8::from(!r.feasible);
            doc
        }
        Command::Optimize {
            input,
            mode,
            eps: target,
            backend,
        } => {
            let (p, q) = load(&input)?;
            let mut doc = ResultDocument::new("optimize", eps);
            doc.backend = Some(format!("{backend:?}").to_lowercase());
            doc.mode = Some(format!("{mode:?}").to_lowercase());
            match mode {
                Mode::Exact => {
                    let o = optimize_exact(&p, &q, backend.into(), tol)?;
                    check_witness(&p, &q, o.delta, o.witness, tol)?;
                    doc.value = Some(o.delta);
                    doc.witness = Some(xy(o.witness));
                    let mut stats = Stats::from(o.stats);
                    stats.decisions = Some(o.decisions);
                    doc.stats = Some(stats);
                }
                Mode::Bisect => {
                    if !(target > 0.0) {
                        return Err(CliError::Invariant(format!("--eps must be positive, got {target}")));
                    }
                    let b = optimize_bisect(&p, &q, target, backend.into(), tol)?;
                    check_witness(&p, &q, b.hi, b.witness, tol)?;
                    doc.value = Some(b.hi);
                    doc.interval = Some([b.lo, b.hi]);
                    doc.witness = Some(xy(b.witness));
                    doc.stats = Some(Stats {
                        decisions: Some(b.decisions),
                        ..Stats::default()
                    });
                }
            }
            doc
        }
        Command::Oracle { input, delta } => {
            let (p, q) = load(&input)?;
            let mut doc = ResultDocument::new("oracle", eps);
            match delta {
                Some(delta) => {
                    let r = naive_decide(&p, &q, delta, tol)?;
                    doc.delta = Some(delta);
                    doc.feasible = Some(r.feasible);
                    doc.witness = r.witness.map(xy);
                    doc.stats = Some(r.stats.into());
                    exit = u8::from(!r.feasible);
                }
                None => {
                    let (value, w) = naive_optimize(&p, &q, tol)?;
                    doc.value = Some(value);
                    doc.witness = Some(xy(w));
                }
            }
            doc
        }
        Command::Bench { m, n, seed, trials } => {
            let mut doc = ResultDocument::new("bench", eps);
            doc.bench = Some(bench::run(m as usize, n as usize, seed, trials, tol)?);
            doc
        }
    };
    Ok((doc, exit))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match run(cli) {
        Ok((mut doc, code)) => {
            doc.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
            match serde_json::to_string(&doc) {
                Ok(text) => println!("{text}"),
                Err(e) => {
                    eprintln!("{e}");
                    return ExitCode::from(3);
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("dfrechet: {e}");
            ExitCode::from(match e {
                CliError::Parse(_) => 2,
                CliError::Invariant(_) => 3,
            })
        }
    }
}
