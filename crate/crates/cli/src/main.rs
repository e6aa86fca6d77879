use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = vsds_cli::Cli::parse();
    match vsds_cli::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
