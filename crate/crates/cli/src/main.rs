use std::process::ExitCode;

use clap::Parser;
use prodset::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match run(cli, &mut lock) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("prodset: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
