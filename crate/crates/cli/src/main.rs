use std::process::ExitCode;

use clap::Parser;
use eventclock_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli.command) {
        Ok(files) => {
            for f in files {
                println!("wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("eventclock {}: {e}", cli.command.name());
            ExitCode::from(e.exit_code())
        }
    }
}
