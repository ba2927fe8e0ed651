use std::process::ExitCode;

use clap::Parser;
use toricwedge::cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(&cli))
}
