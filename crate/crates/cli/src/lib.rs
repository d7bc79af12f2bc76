//! Command-line front end for `qpa-core`.
//!
//! Exit codes: 0 success, 1 a check failed, 2 parse error, 3 invalid state,
//! 4 family/state mismatch, 5 I/O error.

pub mod args;
pub mod commands;
pub mod error;
pub mod exec;
pub mod input;
pub mod output;
pub mod selftest;

use args::{Cli, Command, Suite};
use commands::Outcome;
use error::CliError;
use exec::RayonExecutor;

/// Runs one command, writing its output; `Ok(false)` means a check failed.
pub fn run(cli: Cli) -> Result<bool, CliError> {
    let exec = RayonExecutor::from_env()?;
    let (outcome, out): (Outcome, &args::OutputArgs) = match &cli.command {
        Command::Quantities { state, s, out } => (commands::quantities(state, s, out)?, out),
        Command::Verify {
            state,
            family,
            s,
            suite,
            out,
        } => (
            commands::verify(state, family.as_deref(), s, *suite == Some(Suite::Full), out, &exec)?,
            out,
        ),
        Command::Exponents { state, r, out } => (commands::exponents(state, r, out, &exec)?, out),
        Command::Sweep {
            state,
            r_min,
            r_max,
            steps,
            out,
        } => (commands::sweep(state, *r_min, *r_max, *steps, out, &exec)?, out),
        Command::Rates { state, r, out } => (commands::rates(state, r, out)?, out),
        Command::Selftest { out } => (selftest::run(out)?, out),
    };
    output::emit(out.output.as_deref(), &outcome.body)?;
    Ok(outcome.passed)
}
