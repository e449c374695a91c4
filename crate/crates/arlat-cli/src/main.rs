mod args;
mod config;
mod dispatch;
mod render;

use std::io::Write;
use std::process::ExitCode;

use arlat::Error;
use clap::Parser;
use serde::Serialize;
use serde_json::{json, Value};

use args::{Cli, Output, Precision};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
struct Envelope<'a> {
    version: &'static str,
    command: &'a str,
    op: &'a str,
    precision: Precision,
    seed: Option<u64>,
    params: &'a Value,
    result: &'a Value,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse(_) => "parse",
        Error::Domain(_) => "domain",
        Error::Precision(_) => "precision",
        Error::NonMaximalOrder { .. } => "non_maximal_order",
        Error::Unsupported(_) => "unsupported",
        Error::Inadmissible(_) => "inadmissible",
        Error::Quadrature(_) => "quadrature",
    }
}

/// Write errors (a closed pipe, say) are ignored.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn fail(command: &str, e: &Error) -> ExitCode {
    let body = json!({
        "version": VERSION,
        "command": command,
        "error": { "kind": error_kind(e), "message": e.to_string() },
    });
    emit(&format!("{}\n", serde_json::to_string_pretty(&body).unwrap()));
    ExitCode::from(if matches!(e, Error::Parse(_)) { 2 } else { 1 })
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let argv = match config::expand(raw) {
        Ok(a) => a,
        Err(e) => return fail("", &e),
    };
    let cli = Cli::parse_from(argv);
    let report = match dispatch::dispatch(&cli) {
        Ok(r) => r,
        Err(e) => return fail(&command_name(&cli), &e),
    };
    let text = match cli.output {
        Output::Json => {
            let env = Envelope {
                version: VERSION,
                command: &report.command,
                op: report.op,
                precision: cli.precision,
                seed: cli.seed,
                params: &report.params,
                result: &report.result,
            };
            format!("{}\n", serde_json::to_string_pretty(&env).unwrap())
        }
        Output::Csv => report
            .csv
            .clone()
            .unwrap_or_else(|| render::csv(&report.result)),
        Output::Pretty => report
            .pretty
            .clone()
            .unwrap_or_else(|| render::pretty(&report.result)),
    };
    emit(&text);
    if report.ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn command_name(cli: &Cli) -> String {
    use args::Command::*;
    let (group, op) = match &cli.command {
        Nf { op } => ("nf", format!("{op:?}")),
        Mahler { op } => ("mahler", format!("{op:?}")),
        Bilu { op } => ("bilu", format!("{op:?}")),
        Tree { op } => ("tree", format!("{op:?}")),
        Repzeta { op } => ("repzeta", format!("{op:?}")),
        Volume { op } => ("volume", format!("{op:?}")),
        Geom { op } => ("geom", format!("{op:?}")),
        Nerve { op } => ("nerve", format!("{op:?}")),
        Conjcount { op } => ("conjcount", format!("{op:?}")),
        Suite(_) => return "suite".into(),
    };
    let name: String = op.chars().take_while(|c| c.is_alphanumeric()).collect();
    format!("{group} {}", name.to_lowercase())
}
