//! Command-line front end for `refined-core`: argument parsing, rendering,
//! the result cache and the `verify` suites.

pub mod args;
pub mod cache;
pub mod commands;
pub mod error;
pub mod render;
pub mod verify;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use cache::Cache;
use commands::Output;
use error::{CliResult, EXIT_USAGE};

/// Runs a parsed command line.
pub fn execute(cli: &Cli) -> CliResult<Output> {
    let cache = Cache::new(cli.cache_dir.clone());
    match &cli.command {
        Command::Bg(a) => commands::bg(a, cli.format, &cache),
        Command::Ar(a) => commands::ar(a, cli.format, &cache),
        Command::Gm(a) => commands::gm(a, cli.format, &cache),
        Command::SeriesInGenus(a) => commands::series_in_genus(a, cli.format, &cache),
        Command::Verify(a) => commands::verify(a, cli.format, &cache, cli.seed),
    }
}

/// Parses `args`, runs the command and prints the result. Returns the
/// process exit status.
pub fn main_with_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
