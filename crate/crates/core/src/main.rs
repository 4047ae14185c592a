use std::process::ExitCode;

use clap::Parser;
use mcm_dynamics::cli::{run, Cli};

fn main() -> ExitCode {
    run(&Cli::parse())
}
