//! `xxzge` command-line front end.
//!
//! Exit codes: 0 success, 1 invalid usage or input, 2 output I/O failure,
//! 3 requested transition feature not found.

mod commands;
mod output;

use clap::error::ErrorKind;
use clap::Parser;

use commands::{run, Cli};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(e) = run(cli) {
        eprintln!("error: {}", e.message());
        std::process::exit(e.exit_code());
    }
}
