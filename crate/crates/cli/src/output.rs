//! Report assembly: manifest, JSON document, CSV table.

use std::io::Write;

use serde_json::{json, Value};

use hyperop_core::report::Verdict;

use crate::args::{BackendArg, Cli, Command, Format};
use crate::commands::{execute, Outcome, Row};
use crate::CliError;

pub const FIXED_COLUMNS: [&str; 5] = ["n", "norm_upper", "norm_boundary", "envelope", "pass"];

pub fn format_of(cli: &Cli) -> Format {
    cli.format.unwrap_or(match cli.command {
        Command::Orbit(_) => Format::Csv,
        _ => Format::Json,
    })
}

/// The fully resolved configuration of a run.
pub fn manifest(cli: &Cli, grid: Option<Value>) -> Value {
    let mut m = json!({
        "tool": "hyperop",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cli.command,
        "backend": cli.backend,
        "precision": match cli.backend {
            BackendArg::Exact => Value::Null,
            BackendArg::Float => json!(cli.precision),
        },
        "seed": cli.seed,
        "format": format_of(cli),
        "output": cli.output,
    });
    if let Some(g) = grid {
        m["grid"] = g;
    }
    m
}

pub fn document(manifest: Value, outcome: &Outcome) -> Value {
    json!({ "manifest": manifest, "report": outcome.report, "verdict": outcome.verdict })
}

pub fn csv_header(params: &[String], keys: &[&str]) -> Vec<String> {
    params
        .iter()
        .cloned()
        .chain(keys.iter().map(|k| k.to_string()))
        .chain(FIXED_COLUMNS.iter().map(|c| c.to_string()))
        .collect()
}

pub fn csv_record(params: &[String], row: &Row) -> Vec<String> {
    params
        .iter()
        .cloned()
        .chain(row.keys.iter().cloned())
        .chain([
            row.n.to_string(),
            row.norm_upper.clone(),
            row.norm_boundary.clone(),
            row.envelope.clone(),
            row.pass.clone(),
        ])
        .collect()
}

pub fn csv_bytes(header: &[String], records: &[Vec<String>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::input(format!("csv: {e}"));
    w.write_record(header).map_err(io)?;
    for r in records {
        w.write_record(r).map_err(io)?;
    }
    w.into_inner().map_err(|e| CliError::input(format!("csv: {e}")))
}

/// Writes the report; for CSV the manifest goes to `<output>.manifest.json`,
/// or to stderr when the report goes to stdout.
pub fn emit(cli: &Cli, body: &[u8], manifest: Option<&Value>) -> Result<(), CliError> {
    let write_err = |path: &str, e: std::io::Error| CliError::input(format!("{path}: {e}"));
    match &cli.output {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| write_err(path, e))?;
            if let Some(m) = manifest {
                let side = format!("{path}.manifest.json");
                std::fs::write(&side, pretty(m)).map_err(|e| write_err(&side, e))?;
            }
        }
        None => {
            std::io::stdout()
                .write_all(body)
                .map_err(|e| write_err("stdout", e))?;
            if let Some(m) = manifest {
                eprintln!("{}", serde_json::to_string(m).expect("json"));
            }
        }
    }
    Ok(())
}

pub fn pretty(v: &Value) -> Vec<u8> {
    let mut s = serde_json::to_vec_pretty(v).expect("json");
    s.push(b'\n');
    s
}

pub fn unsupported_csv(cli: &Cli) -> CliError {
    CliError::input(format!("--format csv is not available for {}", cli.command.name()))
}

pub fn single(cli: &Cli) -> Result<u8, CliError> {
    let outcome = execute(cli)?;
    let manifest = manifest(cli, None);
    match format_of(cli) {
        Format::Json => emit(cli, &pretty(&document(manifest, &outcome)), None)?,
        Format::Csv => {
            let table = outcome.table.as_ref().ok_or_else(|| unsupported_csv(cli))?;
            let records: Vec<Vec<String>> = table.rows.iter().map(|r| csv_record(&[], r)).collect();
            emit(cli, &csv_bytes(&csv_header(&[], &table.keys), &records)?, Some(&manifest))?;
        }
    }
    Ok(exit_code(outcome.verdict))
}

pub fn exit_code(v: Verdict) -> u8 {
    v.exit_code() as u8
}
