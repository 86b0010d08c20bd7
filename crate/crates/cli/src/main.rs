use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use sleig_cli::{init_workers, run, Cli, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = init_workers().and_then(|()| {
        let cfg = RunConfig::from_cli(&cli)?;
        run(&cfg, &mut std::io::stdout().lock())
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let _ = std::io::stdout().flush();
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
