//! Command-line front end. Every command builds a [`Report`]; `run` maps
//! its verdict to the process exit code.

mod args;
mod commands;
pub mod parse;
mod report;
mod scenarios;

use std::ffi::OsString;
use std::path::Path;

use clap::Parser;
use serde_json::json;

pub use args::*;
pub use report::{Certificate, Report, Verdict};
pub use scenarios::*;

use crate::caps::ResourceCaps;
use crate::error::{Error, Result};

/// Runs one parsed command.
pub fn execute(cli: &Cli, caps: &ResourceCaps) -> Result<Report> {
    match &cli.command {
        Command::Rips(a) => commands::rips(a, caps),
        Command::Contract(a) => commands::contract(a, caps),
        Command::ScProbe(a) => commands::sc_probe(a, caps),
        Command::CheckDefining(a) => commands::check_defining(a, caps),
        Command::MsGenerators(a) => commands::ms(a, caps),
        Command::CircleBound(a) => commands::circle_bound(a, caps),
        Command::Covering(a) => commands::covering(a, caps),
        Command::QiTransfer(a) => commands::qi(a, caps),
        Command::Filtration(a) => commands::filtration(a, caps),
        Command::Scenario(a) => scenarios::run_scenario(a, caps),
        Command::Verify(a) => commands::verify(a),
    }
}

fn write(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::invalid(format!("cannot write {}: {e}", path.display())))
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    let text = report.to_json_string();
    match &cli.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if let (Some(path), Some(dot)) = (&cli.dot, &report.dot) {
        write(path, dot)?;
    }
    if let (Some(path), Some(csv)) = (&cli.csv, &report.csv) {
        write(path, csv)?;
    }
    Ok(())
}

/// Parses arguments, runs the command, writes the report and returns the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let caps = match ResourceCaps::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let report = match execute(&cli, &caps) {
        Ok(r) => r,
        Err(Error::ResourceCap { cap, limit }) => {
            let mut r = Report::new(&format!("{:?}", cli.command).split('(').next().unwrap_or("").to_lowercase(), json!({}));
            r.verdict = Verdict::Inconclusive;
            r.summary = json!({ "error": format!("resource cap `{cap}` = {limit} reached"), "cap": cap, "limit": limit });
            if let Err(e) = emit(&cli, &r) {
                eprintln!("error: {e}");
                return 2;
            }
            return 3;
        }
        Err(e) => {
            eprintln!("error: {e}");
            return match e {
                Error::InvalidInput(_) | Error::Parse(_) | Error::IncompleteData(_) => 2,
                _ => 1,
            };
        }
    };
    if let Err(e) = emit(&cli, &report) {
        eprintln!("error: {e}");
        return 2;
    }
    report.verdict.exit_code()
}
