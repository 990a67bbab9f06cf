//! `bgf`: classify, dualize, reconstruct and lift bi-g-frame instances
//! stored as JSON.
//!
//! Exit codes: 0 success or true verdict, 1 false verdict, 2 input error,
//! 3 numerical failure.

mod commands;
mod error;
mod report;
mod schema;

use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use bgf_core::DEFAULT_TOL;
use clap::{Parser, Subcommand, ValueEnum};

use commands::{Context, GenArgs, GenChoice, IdentityArgs, Output, Pair, SideChoice};
use error::CliError;

#[derive(Debug, Parser)]
#[command(
    name = "bgf",
    version,
    about = "Bi-g-frame analysis on JSON instance files"
)]
struct Cli {
    /// Tolerance for every verdict and residual check.
    #[arg(long, global = true, env = "BGF_TOL", default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Add wall-clock seconds to the report. Reports are then no longer reproducible.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a pair: verdicts, optimal bounds and deviations.
    Check {
        file: PathBuf,
        #[arg(long)]
        pair: Pair,
    },
    /// Classify a single system.
    Gcheck {
        file: PathBuf,
        #[arg(long)]
        system: String,
    },
    /// Like `check`, reporting only the frame verdict and bounds.
    Bounds {
        file: PathBuf,
        #[arg(long)]
        pair: Pair,
    },
    /// Compute the canonical dual pair and store it as systems `L~`, `G~`.
    Dual {
        file: PathBuf,
        #[arg(long)]
        pair: Pair,
        /// Write here instead of updating the input file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Reconstruct every vector of a list and report relative residuals.
    Reconstruct {
        file: PathBuf,
        #[arg(long)]
        pair: Pair,
        #[arg(long)]
        vector: String,
        /// 1: synthesize with the dual of the first system; 2: with the dual of the second.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        variant: u8,
    },
    /// Write the induced vector families of a pair.
    Lift {
        file: PathBuf,
        #[arg(long)]
        pair: Pair,
        /// Output file; defaults to the input path with extension `lift.json`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a seeded instance with systems `L`, `G` and vectors `e1`, `f`.
    Gen {
        #[arg(long)]
        dim: usize,
        /// Block output dimensions, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long)]
        seed: u64,
        /// Target operator as a block object; random when absent.
        #[arg(long)]
        target_op: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = GenChoice::Prescribed)]
        kind: GenChoice,
        /// Write the instance here and print a report; otherwise print the instance.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the coefficient identity on the particular solution and random kernel perturbations.
    Identity {
        file: PathBuf,
        #[arg(long)]
        pair: Pair,
        #[arg(long)]
        vector: String,
        /// Number of perturbations per vector and side.
        #[arg(long, default_value_t = 20)]
        perturb: usize,
        #[arg(long, value_enum, default_value_t = SideChoice::Both)]
        side: SideChoice,
        /// Seed for the perturbation coefficients.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn dispatch(ctx: &Context, command: &Command) -> Result<commands::Outcome, CliError> {
    match command {
        Command::Check { file, pair } => commands::check(ctx, file, pair, false),
        Command::Bounds { file, pair } => commands::check(ctx, file, pair, true),
        Command::Gcheck { file, system } => commands::gcheck(ctx, file, system),
        Command::Dual { file, pair, out } => commands::dual(ctx, file, pair, out.as_deref()),
        Command::Reconstruct {
            file,
            pair,
            vector,
            variant,
        } => commands::reconstruct_cmd(ctx, file, pair, vector, *variant),
        Command::Lift { file, pair, out } => commands::lift(ctx, file, pair, out.as_deref()),
        Command::Gen {
            dim,
            dims,
            seed,
            target_op,
            kind,
            out,
        } => commands::gen(
            ctx,
            GenArgs {
                dim: *dim,
                dims: dims.clone(),
                seed: *seed,
                target: target_op.as_deref(),
                kind: *kind,
                out: out.as_deref(),
            },
        ),
        Command::Identity {
            file,
            pair,
            vector,
            perturb,
            side,
            seed,
        } => commands::identity(
            ctx,
            file,
            IdentityArgs {
                pair,
                vector,
                perturb: *perturb,
                side: *side,
                seed: *seed,
            },
        ),
    }
}

/// Runs one command line and returns the process exit code.
fn run(argv: Vec<String>) -> i32 {
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    if !(cli.tol.is_finite() && cli.tol > 0.0) {
        eprintln!(
            "{}",
            CliError::input(format!(
                "tolerance must be positive and finite, got {}",
                cli.tol
            ))
        );
        return 2;
    }
    let ctx = Context {
        command: argv.iter().skip(1).cloned().collect(),
        tol: cli.tol,
    };
    let start = Instant::now();
    let outcome = match dispatch(&ctx, &cli.command) {
        Ok(outcome) => outcome,
        Err(e) => {
            eprintln!("bgf: {e}");
            return e.exit_code();
        }
    };
    let mut stdout = std::io::stdout().lock();
    let written = match outcome.stdout {
        Output::Raw(bytes) => stdout.write_all(&bytes),
        Output::Report(mut report) => {
            if cli.timing {
                report.set_f64("wall_time_s", start.elapsed().as_secs_f64());
            }
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Text => report.to_text(),
            };
            writeln!(stdout, "{text}")
        }
    };
    if let Err(e) = written.and_then(|_| stdout.flush()) {
        eprintln!("bgf: cannot write report: {e}");
        return 2;
    }
    outcome.code
}

fn main() {
    std::process::exit(run(std::env::args().collect()));
}
