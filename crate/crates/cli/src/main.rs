use std::process::ExitCode;

use clap::Parser;
use structenc_cli::{configure_threads, run, Cli, EXIT_GENERIC};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_GENERIC as u8)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Err(e) = configure_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(e.code as u8);
    }
    match run(cli) {
        Ok(outcome) => {
            eprintln!(
                "wrote {} files to {} (exit {})",
                outcome.files.len(),
                outcome.out_dir.display(),
                outcome.exit_code
            );
            ExitCode::from(outcome.exit_code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code as u8)
        }
    }
}
