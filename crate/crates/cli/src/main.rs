//! `ielc`: batch front end for the iel-core toolkit.
//!
//! Exit status is 0 when a term is typed, a formula valid or a structure
//! verified, 1 when the report refutes the input, and 2 on usage, input or
//! resource errors.

mod cover;
mod kripke;
mod report;
mod term;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use iel_core::kripke::{Logic, DEFAULT_GUARD};

use report::{CliError, Report};

/// Default reduction fuel, overridden by `IELC_FUEL` and then `--fuel`.
const DEFAULT_FUEL: usize = 100_000;

#[derive(Debug, Parser)]
#[command(
    name = "ielc",
    version,
    about = "Type, reduce, translate and model-check intuitionistic epistemic logic"
)]
struct Cli {
    /// Print every report as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Infer the type of a term.
    Check {
        file: PathBuf,
        /// Context file, one `x : T` per line.
        #[arg(long)]
        context: Option<PathBuf>,
    },
    /// Reduce a term to normal form, leftmost-outermost.
    Norm {
        file: PathBuf,
        #[arg(long)]
        context: Option<PathBuf>,
        /// Print each step.
        #[arg(long)]
        trace: bool,
        /// Maximum number of steps.
        #[arg(long)]
        fuel: Option<usize>,
    },
    /// Translate a term into the monadic metalanguage.
    Translate {
        file: PathBuf,
        #[arg(long)]
        context: Option<PathBuf>,
        /// Also type the translation and compare with the translated type.
        #[arg(long)]
        check: bool,
    },
    /// Kripke semantics of propositional formulas.
    Kripke {
        #[command(subcommand)]
        action: KripkeAction,
    },
    /// Cover systems and finite locales.
    Cover {
        #[command(subcommand)]
        action: CoverAction,
    },
}

#[derive(Debug, clap::Args)]
struct SearchArgs {
    formula: String,
    /// `iel-` or `iel`.
    #[arg(long, default_value = "iel-")]
    logic: Logic,
    #[arg(long, default_value_t = 4)]
    max_worlds: usize,
    /// Bound on evaluations per frame.
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: u64,
}

#[derive(Debug, Subcommand)]
enum KripkeAction {
    /// Search for a countermodel; exit 0 if there is none within the bound.
    Valid(SearchArgs),
    /// Print the first countermodel as a model file; exit 1 if there is none.
    Counter(SearchArgs),
    /// Evaluate a formula in a model file.
    Eval {
        model: PathBuf,
        formula: String,
        /// Also check the frame conditions of this logic.
        #[arg(long)]
        logic: Option<Logic>,
    },
}

#[derive(Debug, Subcommand)]
enum CoverAction {
    /// Check the cover system conditions; locales are built into systems first.
    Verify { file: PathBuf },
    /// Decide every class a system belongs to, with witnesses for failures.
    Classify { file: PathBuf },
    /// Check that a locale is isomorphic to the propositions of its system.
    Represent { file: PathBuf },
    /// Print the cover system built from a locale.
    Build { file: PathBuf },
    /// Truth set of a formula; exit 0 iff it holds everywhere.
    Truth { file: PathBuf, formula: String },
}

fn fuel(flag: Option<usize>) -> Result<usize, CliError> {
    if let Some(f) = flag {
        return Ok(f);
    }
    match std::env::var("IELC_FUEL") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("IELC_FUEL must be a step count, got `{v}`"))),
        Err(_) => Ok(DEFAULT_FUEL),
    }
}

fn run(command: Command) -> (&'static str, Result<Report, CliError>) {
    match command {
        Command::Check { file, context } => ("check", term::check(&file, context.as_deref())),
        Command::Norm {
            file,
            context,
            trace,
            fuel: f,
        } => (
            "norm",
            fuel(f).and_then(|f| term::norm(&file, context.as_deref(), trace, f)),
        ),
        Command::Translate {
            file,
            context,
            check,
        } => (
            "translate",
            term::translate(&file, context.as_deref(), check),
        ),
        Command::Kripke { action } => match action {
            KripkeAction::Valid(a) => (
                "kripke valid",
                kripke::valid(&a.formula, a.logic, a.max_worlds, a.guard),
            ),
            KripkeAction::Counter(a) => (
                "kripke counter",
                kripke::counter(&a.formula, a.logic, a.max_worlds, a.guard),
            ),
            KripkeAction::Eval {
                model,
                formula,
                logic,
            } => ("kripke eval", kripke::eval(&model, &formula, logic)),
        },
        Command::Cover { action } => match action {
            CoverAction::Verify { file } => ("cover verify", cover::verify(&file)),
            CoverAction::Classify { file } => ("cover classify", cover::classify(&file)),
            CoverAction::Represent { file } => ("cover represent", cover::represent(&file)),
            CoverAction::Build { file } => ("cover build", cover::build(&file)),
            CoverAction::Truth { file, formula } => ("cover truth", cover::truth(&file, &formula)),
        },
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // argument errors are reports too when JSON was asked for
        Err(e) if e.use_stderr() && std::env::args().any(|a| a == "--json") => {
            let msg = e.render().to_string();
            let first = msg.lines().next().unwrap_or_default();
            return CliError::Usage(first.trim_start_matches("error: ").to_string())
                .emit("ielc", true);
        }
        Err(e) => e.exit(),
    };
    let (name, outcome) = run(cli.command);
    match outcome {
        Ok(r) => r.emit(name, cli.json),
        Err(e) => e.emit(name, cli.json),
    }
}
