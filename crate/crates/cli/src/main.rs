//! `heraldlab` command-line front end.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 invalid input, 3 infeasible
//! parameters, 4 numerical failure (including a failed self-test). Errors are
//! reported on stderr as one JSON object.

mod cli;
mod commands;
mod format;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;

use crate::cli::{Cli, Command};
use crate::commands::Failure;

/// Worker pool honouring `HERALDLAB_THREADS` (unset or 0: one per core).
fn thread_pool() -> Result<rayon::ThreadPool, Failure> {
    let threads = match std::env::var("HERALDLAB_THREADS") {
        Ok(s) if !s.trim().is_empty() => s
            .trim()
            .parse::<usize>()
            .map_err(|_| Failure::Validation(format!("HERALDLAB_THREADS='{s}' is not a thread count")))?,
        _ => 0,
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Failure::Numerical(format!("cannot start worker pool: {e}")))
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let pool = thread_pool()?;
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Sweep(a) => commands::sweep(a, &pool, out, err),
        Command::Optimize(a) => commands::optimize(a, &pool, out),
        Command::Wigner(a) => commands::wigner(a, out, err),
        Command::Distribution(a) => commands::distribution_cmd(a, out),
        Command::Selftest(a) => commands::selftest_cmd(a, &pool, out),
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{}", e.render());
            return 0;
        }
        Err(e) => {
            let f = Failure::Validation(e.render().to_string().trim().to_string());
            let _ = writeln!(err, "{}", f.to_json());
            return f.exit_code();
        }
    };
    match dispatch(&cli, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "{}", f.to_json());
            f.exit_code()
        }
    }
}

fn main() {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock());
    std::process::exit(code);
}
