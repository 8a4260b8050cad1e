use std::process::ExitCode;

use clap::Parser;
use contrast_core::cli::{self, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let line = msg.lines().next().unwrap_or("invalid arguments");
            let code = std::error::Error::source(&e)
                .and_then(|s| s.downcast_ref::<contrast_core::Error>())
                .map_or("E_ARGUMENT", |inner| inner.code());
            eprintln!("error[{code}]: {}", line.trim_start_matches("error: "));
            return ExitCode::from(2);
        }
    };
    match cli::init_threads().and_then(|()| cli::run(cli)) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            let msg = e.to_string().replace('\n', " ");
            eprintln!("error[{}]: {msg}", e.code());
            ExitCode::FAILURE
        }
    }
}
