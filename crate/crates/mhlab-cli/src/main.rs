//! `mhlab` — batch front end for the metaheuristics laboratory.
//!
//! Subcommands: `list`, `run`, `tune`, `stats`, `bias-audit`, `report`.
//! Exit codes: 0 on success, 2 on configuration/input errors (the diagnostic
//! names the offending item), 1 on internal failures.

mod args;
mod commands;

use clap::Parser;

fn main() {
    // die quietly when piped into head and friends
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = args::Cli::parse();
    let code = match commands::dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                mhlab::Error::Config(_)
                | mhlab::Error::NotImplemented(_)
                | mhlab::Error::Parse { .. }
                | mhlab::Error::InsufficientData(_) => 2,
                _ => 1,
            }
        }
    };
    std::process::exit(code);
}
