//! Command-line front end: `check`, `lts`, `solve`, `verify` and `bisim` on
//! model files. [`run`] returns the exit code and both output streams so the
//! whole tool can be driven from tests.

mod commands;
pub mod json;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use sspa_core::prodform::SolverConfig;
use sspa_core::semantics::{WellFormedMode, DEFAULT_STATE_BUDGET};
use sspa_core::Error;

pub use commands::{cmd_bisim, cmd_check, cmd_lts, cmd_solve, cmd_verify, load_model};

pub mod exit {
    pub const OK: i32 = 0;
    /// Model-level failure: not well-formed, invalid cooperation, `≇`.
    pub const FAILED: i32 = 1;
    /// Unreadable file, syntax error, unknown name or bad arguments.
    pub const INPUT: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const VIOLATED: i32 = 4;
    pub const NOT_CONVERGED: i32 = 5;
    /// The solver and the joint-chain oracle disagree.
    pub const INCONSISTENT: i32 = 6;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Strict,
    Lenient,
}

impl From<Mode> for WellFormedMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Strict => WellFormedMode::Strict,
            Mode::Lenient => WellFormedMode::Lenient,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "sspa",
    version,
    about = "Stochastic process algebra models: check, explore, solve, verify"
)]
pub struct Cli {
    /// Well-formedness rule for simple processes.
    #[arg(long, value_enum, default_value = "strict", global = true)]
    pub mode: Mode,

    #[arg(long, value_enum, default_value = "text", global = true)]
    pub format: Format,

    /// Maximum number of states explored for one process or product space.
    #[arg(long, env = "SSPA_BUDGET_STATES", default_value_t = DEFAULT_STATE_BUDGET, global = true)]
    pub budget_states: usize,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Label sets, closedness and well-formedness of every process, and
    /// cooperation checks of every system.
    Check { file: PathBuf },
    /// Transition dump of a process or system.
    Lts {
        file: PathBuf,
        name: String,
        /// Also write the transition graph in DOT format to this file.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Product-form solution of a system.
    Solve {
        file: PathBuf,
        system: String,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Solve, then compare against a direct solve of the joint chain.
    Verify {
        file: PathBuf,
        system: String,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Strong bisimilarity of two processes or systems.
    Bisim {
        file: PathBuf,
        first: String,
        second: String,
        /// Print the coarsest partition found.
        #[arg(long)]
        witness: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 0.5)]
    pub damping: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol_conv: f64,
    #[arg(long, default_value_t = 1e-8)]
    pub tol_check: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    #[arg(long, default_value_t = 1.0)]
    pub init_kappa: f64,
}

impl SolverArgs {
    pub fn config(&self, mode: Mode, budget_states: usize) -> SolverConfig {
        SolverConfig {
            init_kappa: self.init_kappa,
            damping: self.damping,
            conv_tol: self.tol_conv,
            check_tol: self.tol_check,
            max_iter: self.max_iter,
            mode: mode.into(),
            state_budget: budget_states,
            ..SolverConfig::default()
        }
    }
}

/// What a command printed and how it ended.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn ok(stdout: String) -> Self {
        Outcome {
            code: exit::OK,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn with_code(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    pub fn error(code: i32, message: impl Into<String>) -> Self {
        let mut stderr = message.into();
        if !stderr.ends_with('\n') {
            stderr.push('\n');
        }
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Exit code for a library error.
pub fn error_code(e: &Error) -> i32 {
    match e {
        Error::Syntax { .. }
        | Error::DuplicateDefinition { .. }
        | Error::UndefinedIdentifier { .. }
        | Error::NonPositiveRate { .. }
        | Error::UnknownName(_) => exit::INPUT,
        Error::BudgetExceeded { .. } | Error::DimensionBudget { .. } => exit::BUDGET,
        _ => exit::FAILED,
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::error(exit::INPUT, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let budget = cli.budget_states;
    match &cli.command {
        Command::Check { file } => cmd_check(file, cli.mode, cli.format, budget),
        Command::Lts { file, name, dot } => cmd_lts(file, name, dot.as_deref(), cli.format, budget),
        Command::Solve { file, system, solver } => {
            cmd_solve(file, system, &solver.config(cli.mode, budget), cli.format)
        }
        Command::Verify { file, system, solver } => {
            cmd_verify(file, system, &solver.config(cli.mode, budget), cli.format)
        }
        Command::Bisim {
            file,
            first,
            second,
            witness,
        } => cmd_bisim(file, first, second, *witness, cli.format, budget),
    }
}
