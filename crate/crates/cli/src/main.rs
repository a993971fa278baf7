use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    affold_cli::main_with_args(affold_cli::Cli::parse())
}
