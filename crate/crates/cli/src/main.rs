use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = qpa::args::Cli::parse();
    match qpa::run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("qpa: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
