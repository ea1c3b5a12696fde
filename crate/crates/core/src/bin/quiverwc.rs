use std::io::Write;
use std::process::ExitCode;

use quiverwc::cli::{self, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let args = Cli::try_parse();
    let (code, text) = match args {
        Ok(c) => {
            let (code, v) = cli::run(&c);
            let text = cli::render(&v);
            if let (Some(path), cli::EXIT_OK) = (&c.output, code) {
                if let Err(e) = std::fs::write(path, &text) {
                    eprintln!("{}: {e}", path.display());
                    return ExitCode::from(cli::EXIT_INPUT as u8);
                }
                return ExitCode::SUCCESS;
            }
            (code, text)
        }
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.exit();
            }
            let err = quiverwc::Error::input(e.to_string().trim().to_string());
            (cli::EXIT_INPUT, cli::render(&cli::error_json(&err)))
        }
    };
    let _ = std::io::stdout().write_all(text.as_bytes());
    ExitCode::from(code as u8)
}
