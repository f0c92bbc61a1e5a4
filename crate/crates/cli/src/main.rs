use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use evupdate_cli::check::run_suite;
use evupdate_cli::grid::{to_csv, GridMode, GridSpec};
use evupdate_cli::model::{Expr, ModelFile};
use evupdate_cli::report::medical_report;
use evupdate_cli::{CliError, Result};

/// Exact validity and updating of distributions under multiple pieces of evidence.
#[derive(Parser)]
#[command(name = "evupdate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print a built-in worked example.
    Report {
        #[arg(value_enum)]
        which: ReportKind,
    },
    /// Write a CSV grid over evidence i|pt> + j|nt> for the medical test.
    Grid {
        #[arg(long)]
        mode: GridMode,
        #[arg(long)]
        imax: u64,
        #[arg(long)]
        jmax: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a seeded property suite.
    Check {
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// Evaluate an expression such as `validity(prior, pt)` against a model file.
    Eval {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        expr: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportKind {
    Medical,
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Report { which: ReportKind::Medical } => {
            print!("{}", medical_report()?);
            Ok(true)
        }
        Command::Grid { mode, imax, jmax, out } => {
            let cells = GridSpec::medical(mode, imax, jmax).compute()?;
            std::fs::write(&out, to_csv(&cells))
                .map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
            Ok(true)
        }
        Command::Check { suite, trials, seed } => {
            let report = run_suite(&suite, trials, seed)?;
            print!("{report}");
            Ok(report.passed())
        }
        Command::Eval { model, expr } => {
            let model = ModelFile::load(&model)?.resolve()?;
            println!("{}", model.eval(&Expr::parse(&expr)?)?);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
