use std::process::ExitCode;

use clap::Parser;
use qitx::cli::Cli;
use qitx::commands;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qitx: {e}");
            e.exit_code()
        }
    }
}
