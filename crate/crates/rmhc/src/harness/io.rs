//! CSV serialization for run records and aggregate rows.
//!
//! The schemas are fixed and locale-independent. Booleans are
//! `true`/`false`, a missing block size is `0`, and aggregate statistics
//! carry four decimal places (NaN for configurations with no solved runs).

use std::io::{self, BufRead, BufReader, Read, Write};

use super::aggregate::AggregateRow;
use super::execute::RunRecord;
use super::HarnessError;

pub const RECORD_HEADER: &str = "run_id,seed,algo,problem,dim,block_size,noise_sigma,resample,\
                                 budget,solved,evals_used,generations,wall_ns";

pub const AGGREGATE_HEADER: &str = "algo,problem,dim,block_size,noise_sigma,resample,budget,\
                                    mean_evals,stderr_evals,solve_rate,evals_per_dim";

pub fn write_records_csv<W: Write>(records: &[RunRecord], mut w: W) -> io::Result<()> {
    writeln!(w, "{RECORD_HEADER}")?;
    for r in records {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{}",
            r.run_id,
            r.seed,
            r.policy,
            r.problem,
            r.dim,
            r.block_size.unwrap_or(0),
            r.noise_sigma,
            r.resample,
            r.budget,
            r.solved,
            r.evals_used,
            r.generations,
            r.wall_ns,
        )?;
    }
    Ok(())
}

/// Parses a records CSV. The in-memory-only fields (`error`) come back
/// empty; everything serialized round-trips exactly.
pub fn read_records_csv<R: Read>(r: R) -> Result<Vec<RunRecord>, HarnessError> {
    let mut lines = BufReader::new(r).lines().enumerate();
    check_header(&mut lines, RECORD_HEADER)?;
    let mut records = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let f = split_fields(&line, 13, lineno)?;
        let block_size = match parse::<usize>(f[5], "block_size", lineno)? {
            0 => None,
            b => Some(b),
        };
        records.push(RunRecord {
            run_id: parse(f[0], "run_id", lineno)?,
            seed: parse(f[1], "seed", lineno)?,
            policy: parse_str(f[2], "algo", lineno)?,
            problem: parse_str(f[3], "problem", lineno)?,
            dim: parse(f[4], "dim", lineno)?,
            block_size,
            noise_sigma: parse(f[6], "noise_sigma", lineno)?,
            resample: parse(f[7], "resample", lineno)?,
            budget: parse(f[8], "budget", lineno)?,
            solved: parse(f[9], "solved", lineno)?,
            evals_used: parse(f[10], "evals_used", lineno)?,
            generations: parse(f[11], "generations", lineno)?,
            wall_ns: parse(f[12], "wall_ns", lineno)?,
            error: None,
        });
    }
    Ok(records)
}

pub fn write_aggregates_csv<W: Write>(rows: &[AggregateRow], mut w: W) -> io::Result<()> {
    writeln!(w, "{AGGREGATE_HEADER}")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{:.4},{:.4},{:.4},{:.4}",
            r.policy,
            r.problem,
            r.dim,
            r.block_size.unwrap_or(0),
            r.noise_sigma,
            r.resample,
            r.budget,
            r.mean_evals,
            r.stderr_evals,
            r.solve_rate,
            r.mean_evals_per_dim,
        )?;
    }
    Ok(())
}

pub fn read_aggregates_csv<R: Read>(r: R) -> Result<Vec<AggregateRow>, HarnessError> {
    let mut lines = BufReader::new(r).lines().enumerate();
    check_header(&mut lines, AGGREGATE_HEADER)?;
    let mut rows = Vec::new();
    for (idx, line) in lines {
        let line = line?;
        if line.is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let f = split_fields(&line, 11, lineno)?;
        let block_size = match parse::<usize>(f[3], "block_size", lineno)? {
            0 => None,
            b => Some(b),
        };
        rows.push(AggregateRow {
            policy: parse_str(f[0], "algo", lineno)?,
            problem: parse_str(f[1], "problem", lineno)?,
            dim: parse(f[2], "dim", lineno)?,
            block_size,
            noise_sigma: parse(f[4], "noise_sigma", lineno)?,
            resample: parse(f[5], "resample", lineno)?,
            budget: parse(f[6], "budget", lineno)?,
            mean_evals: parse(f[7], "mean_evals", lineno)?,
            stderr_evals: parse(f[8], "stderr_evals", lineno)?,
            solve_rate: parse(f[9], "solve_rate", lineno)?,
            mean_evals_per_dim: parse(f[10], "evals_per_dim", lineno)?,
        });
    }
    Ok(rows)
}

fn check_header(
    lines: &mut impl Iterator<Item = (usize, io::Result<String>)>,
    expected: &str,
) -> Result<(), HarnessError> {
    match lines.next() {
        Some((_, line)) => {
            let line = line?;
            if line != expected {
                return Err(HarnessError::CsvHeader {
                    expected: expected.to_owned(),
                    found: line,
                });
            }
            Ok(())
        }
        None => Err(HarnessError::CsvHeader {
            expected: expected.to_owned(),
            found: String::new(),
        }),
    }
}

fn split_fields(line: &str, want: usize, lineno: usize) -> Result<Vec<&str>, HarnessError> {
    let fields: Vec<&str> = line.split(',').collect();
    if fields.len() != want {
        return Err(HarnessError::CsvParse {
            line: lineno,
            message: format!("expected {want} fields, found {}", fields.len()),
        });
    }
    Ok(fields)
}

fn parse<T: std::str::FromStr>(
    field: &str,
    column: &str,
    lineno: usize,
) -> Result<T, HarnessError>
where
    T::Err: std::fmt::Display,
{
    field.parse().map_err(|e| HarnessError::CsvParse {
        line: lineno,
        message: format!("column {column}: cannot parse {field:?}: {e}"),
    })
}

fn parse_str<T: std::str::FromStr<Err = String>>(
    field: &str,
    column: &str,
    lineno: usize,
) -> Result<T, HarnessError> {
    field.parse().map_err(|e| HarnessError::CsvParse {
        line: lineno,
        message: format!("column {column}: {e}"),
    })
}
