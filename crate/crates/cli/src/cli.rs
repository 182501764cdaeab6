//! Command-line interface.
//!
//! Exit codes: 0 when every check passes, 1 when any check fails, 2 for
//! usage and configuration errors.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{CommandFactory, Parser, Subcommand};

use crate::profile::{curvature_profile, write_csv};
use crate::report::report_schema;
use crate::suites::{self, Config, Suite};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "hkverify", version, about = "Numerical verification of Kähler and hyperkähler constructions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a verification suite and write a JSON report.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sample points (or random parameters) per check.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// Circle radius; repeat for a parameter sweep.
        #[arg(long = "a", default_values_t = [1.0])]
        a: Vec<f64>,
        /// Report path; the report goes to standard output when omitted.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the Gaussian curvature of the toy quotient along r as CSV.
    CurvatureProfile {
        #[arg(long, default_value_t = 1.0)]
        a: f64,
        #[arg(long, default_value_t = 10.0)]
        rmax: f64,
        #[arg(long, default_value_t = 101)]
        steps: usize,
        #[arg(long)]
        csv: PathBuf,
    },
    /// Print the JSON Schema of the verification report.
    ReportSchema,
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            e.exit_code()
        }
    }
}

fn usage(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

pub fn execute(cli: Cli) -> i32 {
    match cli.command {
        Command::Verify { suite, seed, samples, a, json } => {
            let cfg = Config { seed, samples, a };
            if let Err(e) = cfg.validate() {
                return usage(e);
            }
            let manifest = match suites::run(suite, &cfg) {
                Ok(m) => m,
                Err(e) => return usage(e),
            };
            let text = manifest.to_json();
            match json {
                Some(path) => {
                    if let Err(e) = std::fs::write(&path, text + "\n") {
                        return usage(format!("cannot write {}: {e}", path.display()));
                    }
                }
                None => println!("{text}"),
            }
            for c in &manifest.checks {
                eprintln!(
                    "{} {:<58} err={:.3e} tol={:.1e}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.check_id,
                    c.max_abs_error,
                    c.tolerance
                );
            }
            let failed = manifest.failures().count();
            eprintln!("{} checks, {failed} failed", manifest.checks.len());
            if manifest.passed {
                EXIT_PASS
            } else {
                EXIT_FAIL
            }
        }
        Command::CurvatureProfile { a, rmax, steps, csv } => {
            let rows = match curvature_profile(a, rmax, steps) {
                Ok(rows) => rows,
                Err(e) => return usage(e),
            };
            let file = match File::create(&csv) {
                Ok(f) => f,
                Err(e) => return usage(format!("cannot write {}: {e}", csv.display())),
            };
            match write_csv(&rows, BufWriter::new(file)) {
                Ok(()) => EXIT_PASS,
                Err(e) => usage(format!("cannot write {}: {e}", csv.display())),
            }
        }
        Command::ReportSchema => {
            let text = serde_json::to_string_pretty(&report_schema()).expect("schema serializes");
            let mut out = io::stdout().lock();
            match writeln!(out, "{text}") {
                Ok(()) => EXIT_PASS,
                Err(_) => EXIT_USAGE,
            }
        }
    }
}
