use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::ExperimentResult;

use super::write_atomic;

pub const RESULTS_HEADER: &str =
    "method,sweep_param,sweep_value,repetitions,hamming_mean,hamming_se,relative_mean,relative_se";

/// Ten significant digits in scientific notation, e.g. `1.234567890e-1`.
pub fn format_float(x: f64) -> String {
    format!("{x:.9e}")
}

/// One parsed line of a summary CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub method: String,
    pub sweep_param: String,
    pub sweep_value: f64,
    pub repetitions: usize,
    pub hamming_mean: f64,
    pub hamming_se: f64,
    pub relative_mean: f64,
    pub relative_se: f64,
}

/// One row per (method, sweep value), sorted by method name then value.
pub fn results_csv_string(result: &ExperimentResult) -> String {
    let mut cells: Vec<_> = result.cells.iter().collect();
    cells.sort_by(|a, b| {
        a.method
            .name()
            .cmp(b.method.name())
            .then(a.sweep_value.total_cmp(&b.sweep_value))
    });
    let mut s = String::new();
    s.push_str(RESULTS_HEADER);
    s.push('\n');
    for c in cells {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{}",
            c.method.name(),
            result.config.sweep.name(),
            format_float(c.sweep_value),
            c.repetitions(),
            format_float(c.hamming_mean()),
            format_float(c.hamming_se()),
            format_float(c.relative_mean()),
            format_float(c.relative_se()),
        );
    }
    s
}

pub fn write_results_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    write_atomic(path, results_csv_string(result).as_bytes())
}

/// Per-repetition values with their seeds.
pub fn write_raw_csv(result: &ExperimentResult, path: &Path) -> Result<()> {
    let mut s = String::from("method,sweep_param,sweep_value,repetition,seed,hamming,relative\n");
    for c in &result.cells {
        for r in 0..c.repetitions() {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{},{}",
                c.method.name(),
                result.config.sweep.name(),
                format_float(c.sweep_value),
                r,
                c.seeds[r],
                format_float(c.hamming[r]),
                format_float(c.relative[r]),
            );
        }
    }
    write_atomic(path, s.as_bytes())
}

pub fn read_results_csv(path: &Path) -> Result<Vec<SummaryRow>> {
    let mut rdr = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let headers = rdr.headers().map_err(|e| csv_error(path, e))?.clone();
    if headers.iter().collect::<Vec<_>>().join(",") != RESULTS_HEADER {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: "unexpected header".into(),
        });
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| csv_error(path, e))?;
        let line = i + 2;
        let num = |j: usize| -> Result<f64> {
            rec[j].parse().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: format!("field {} is not a number", j + 1),
            })
        };
        rows.push(SummaryRow {
            method: rec[0].to_string(),
            sweep_param: rec[1].to_string(),
            sweep_value: num(2)?,
            repetitions: num(3)? as usize,
            hamming_mean: num(4)?,
            hamming_se: num(5)?,
            relative_mean: num(6)?,
            relative_se: num(7)?,
        });
    }
    Ok(rows)
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    let line = e.position().map(|p| p.line() as usize).unwrap_or(0);
    Error::Parse {
        path: path.to_path_buf(),
        line,
        message: e.to_string(),
    }
}
