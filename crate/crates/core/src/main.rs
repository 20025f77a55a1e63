use std::process::ExitCode;

use clap::Parser;
use wavelab::cli::{run, Cli};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("wavelab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
