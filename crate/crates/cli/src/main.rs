use std::process::ExitCode;

use hubbard_pair_cli::{parse_config, run, CliError};

fn main() -> ExitCode {
    let result = parse_config(std::env::args_os()).and_then(|config| {
        let stdout = std::io::stdout();
        let mut lock = stdout.lock();
        run(&config, &mut lock)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::Clap(_)) => {
            if let CliError::Clap(inner) = &e {
                let _ = inner.print();
            }
            ExitCode::from(e.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("hubbard-pair: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
