use std::process::ExitCode;

use clap::Parser;
use lcycle::cli::{run, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    let stdout = std::io::stdout();
    match run(&config, &mut stdout.lock()) {
        Ok(exit) => ExitCode::from(exit as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit() as u8)
        }
    }
}
