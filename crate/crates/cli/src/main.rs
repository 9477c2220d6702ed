use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use latsf_cli::commands::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            let _ = std::io::stdout().write_all(out.text.as_bytes());
            ExitCode::from(out.exit)
        }
        Err(e) => {
            eprintln!("latsf: {e}");
            ExitCode::from(e.exit)
        }
    }
}
