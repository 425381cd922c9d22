use std::process::ExitCode;

use clap::Parser;
use vallab_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let (text, code) = execute(&cli.command, &argv);
    print!("{text}");
    ExitCode::from(code)
}
