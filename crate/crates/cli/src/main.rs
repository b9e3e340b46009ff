use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use solvkit_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            // a closed pipe downstream is not our failure
            let _ = writeln!(std::io::stdout().lock(), "{}", out.render());
            ExitCode::from(out.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
