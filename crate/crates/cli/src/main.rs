//! `crosslab`: run verification suites on crossing maps and Q-system twists.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on bad
//! input.

mod commands;
mod demo;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use crosslab::Tolerances;

use crate::output::Mode;

#[derive(Parser, Debug)]
#[command(name = "crosslab", version, about = "Crossing maps, Q-system twists and invariant solution spaces")]
struct Cli {
    /// Base residual tolerance
    #[arg(long, global = true, env = "CROSSLAB_TOL", value_parser = parse_tol)]
    tol: Option<f64>,

    /// Seed for every random choice
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,

    /// Only print the JSON report
    #[arg(long, global = true, conflicts_with = "quiet")]
    json: bool,

    /// Print nothing; rely on the exit code
    #[arg(long, global = true)]
    quiet: bool,

    /// Include wall-clock time in reports (breaks bit-identical output)
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a verification suite on an operator T and an involution S
    Verify {
        /// N²×N² matrix JSON
        t: PathBuf,
        /// involution JSON
        s: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Build a Q-system and certify its twist T = m*m
    Qsystem {
        spec: PathBuf,
        /// write T as matrix JSON
        #[arg(long)]
        emit_twist: Option<PathBuf>,
        /// write the derived S as involution JSON
        #[arg(long)]
        emit_involution: Option<PathBuf>,
    },
    /// Compute a group-invariant crossing symmetric space and compare with
    /// the expected dimension
    Invariants {
        #[arg(long, value_enum)]
        group: Group,
        /// `trivial` or a modular spectrum such as `2,0.5,1` or `[2,0.5,1]`
        #[arg(long, default_value = "trivial")]
        delta: String,
        /// dimension for `--delta trivial` with the unitary group
        #[arg(long)]
        dim: Option<usize>,
    },
    /// Run the gallery of worked examples
    Demo,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    CrossingBasic,
    CrossingPowers,
    Kms,
    Endomorphism,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Group {
    O2,
    O3,
    O4,
    UnitaryRandom,
}

fn parse_tol(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err(format!("tolerance must be positive, got {x}"))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let tol = cli.tol.map_or_else(Tolerances::default, Tolerances::with_identity);
    let mode = Mode::new(cli.json, cli.quiet, cli.timing);
    let result = match cli.command {
        Command::Verify { t, s, suite } => commands::verify(&t, &s, suite, tol, cli.seed, &mode),
        Command::Qsystem {
            spec,
            emit_twist,
            emit_involution,
        } => commands::qsystem(&spec, emit_twist.as_deref(), emit_involution.as_deref(), tol, &mode),
        Command::Invariants { group, delta, dim } => commands::invariants(group, &delta, dim, tol, cli.seed, &mode),
        Command::Demo => demo::run(tol, cli.seed, &mode),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
