//! `--grid flag=v1,v2,...` sweeps.
//!
//! Each cell re-parses the original command line with the swept flags
//! replaced, so a cell validates exactly like a single run. Cells run in
//! parallel and are merged in grid order.

use clap::Parser;
use serde_json::{json, Value};

use hyperop_core::grid::map_cells;

use crate::args::{Cli, Format};
use crate::commands::{execute, Outcome};
use crate::output::{csv_bytes, csv_header, csv_record, emit, exit_code, format_of, manifest, pretty, unsupported_csv};
use crate::CliError;

const RESERVED: [&str; 4] = ["grid", "output", "format", "help"];

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub flag: String,
    pub values: Vec<String>,
}

pub fn parse_axis(spec: &str) -> Result<Axis, CliError> {
    let (flag, values) = spec
        .split_once('=')
        .ok_or_else(|| CliError::input(format!("--grid {spec:?}: expected FLAG=V1,V2,...")))?;
    let flag = flag.trim().trim_start_matches("--").to_owned();
    if flag.is_empty() || RESERVED.contains(&flag.as_str()) {
        return Err(CliError::input(format!("--grid cannot sweep {flag:?}")));
    }
    let values: Vec<String> = values.split(',').map(|v| v.trim().to_owned()).collect();
    if values.iter().any(String::is_empty) {
        return Err(CliError::input(format!("--grid {spec:?}: empty value")));
    }
    Ok(Axis { flag, values })
}

/// Cartesian product, first axis outermost.
pub fn cells(axes: &[Axis]) -> Vec<Vec<(String, String)>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        acc.iter()
            .flat_map(|prefix| {
                axis.values.iter().map(move |v| {
                    let mut cell = prefix.clone();
                    cell.push((axis.flag.clone(), v.clone()));
                    cell
                })
            })
            .collect()
    })
}

/// Removes every occurrence of `--flag value` and `--flag=value`.
fn strip(argv: &[String], flag: &str) -> Vec<String> {
    let long = format!("--{flag}");
    let joined = format!("{long}=");
    let mut out = Vec::with_capacity(argv.len());
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
        } else if *a == long {
            skip = true;
        } else if !a.starts_with(&joined) {
            out.push(a.clone());
        }
    }
    out
}

pub fn cell_argv(argv: &[String], cell: &[(String, String)]) -> Vec<String> {
    let mut out = strip(argv, "grid");
    for (flag, _) in cell {
        out = strip(&out, flag);
    }
    for (flag, value) in cell {
        out.push(format!("--{flag}={value}"));
    }
    out
}

fn run_cell(argv: &[String], cell: &[(String, String)]) -> Result<(Cli, Outcome), CliError> {
    let cli = Cli::try_parse_from(cell_argv(argv, cell)).map_err(|e| CliError::input(e.to_string().trim().to_owned()))?;
    let outcome = execute(&cli)?;
    Ok((cli, outcome))
}

fn label(cell: &[(String, String)]) -> String {
    cell.iter().map(|(f, v)| format!("{f}={v}")).collect::<Vec<_>>().join(" ")
}

/// Invalid input dominates, then failure, then inconclusive.
fn combine(codes: impl IntoIterator<Item = u8>) -> u8 {
    let rank = |c: u8| match c {
        0 => 0,
        3 => 1,
        1 => 2,
        _ => 3,
    };
    codes.into_iter().max_by_key(|&c| rank(c)).unwrap_or(0)
}

pub fn sweep(cli: &Cli, argv: &[String]) -> Result<u8, CliError> {
    let axes: Vec<Axis> = cli.grid.iter().map(|s| parse_axis(s)).collect::<Result<_, _>>()?;
    let grid_cells = cells(&axes);
    let results = map_cells(&grid_cells, |_, cell| run_cell(argv, cell));
    let grid_spec = json!(axes
        .iter()
        .map(|a| json!({ "flag": a.flag, "values": a.values }))
        .collect::<Vec<_>>());
    let manifest = manifest(cli, Some(grid_spec));
    let params: Vec<String> = axes.iter().map(|a| a.flag.clone()).collect();

    let mut codes = Vec::with_capacity(results.len());
    for (cell, r) in grid_cells.iter().zip(&results) {
        match r {
            Ok((_, o)) => codes.push(exit_code(o.verdict)),
            Err(e) => {
                eprintln!("error in cell {}: {}", label(cell), e.msg);
                codes.push(e.code);
            }
        }
    }

    match format_of(cli) {
        Format::Json => {
            let cells: Vec<Value> = grid_cells
                .iter()
                .zip(&results)
                .map(|(cell, r)| {
                    let params: serde_json::Map<String, Value> =
                        cell.iter().map(|(f, v)| (f.clone(), json!(v))).collect();
                    match r {
                        Ok((c, o)) => json!({
                            "params": params,
                            "command": c.command,
                            "report": o.report,
                            "verdict": o.verdict,
                        }),
                        Err(e) => json!({ "params": params, "error": e.msg, "exit_code": e.code }),
                    }
                })
                .collect();
            let code = combine(codes);
            let doc = json!({ "manifest": manifest, "cells": cells, "exit_code": code });
            emit(cli, &pretty(&doc), None)?;
            Ok(code)
        }
        Format::Csv => {
            let mut keys: Option<Vec<&'static str>> = None;
            let mut records = Vec::new();
            for (cell, r) in grid_cells.iter().zip(&results) {
                let Ok((_, o)) = r else { continue };
                let table = o.table.as_ref().ok_or_else(|| unsupported_csv(cli))?;
                keys.get_or_insert_with(|| table.keys.clone());
                let values: Vec<String> = cell.iter().map(|(_, v)| v.clone()).collect();
                records.extend(table.rows.iter().map(|row| csv_record(&values, row)));
            }
            let header = csv_header(&params, keys.as_deref().unwrap_or(&[]));
            emit(cli, &csv_bytes(&header, &records)?, Some(&manifest))?;
            Ok(combine(codes))
        }
    }
}
