//! File formats: multiplex edge lists, result tables, membership tables,
//! flat config files and SVG line charts.

mod chart;
mod config;
mod edges;
mod membership;
mod results;

use std::io::Write;
use std::path::Path;

pub use chart::{render_line_chart, ChartOptions, Series};
pub use config::{parse_config, read_config};
pub use edges::{
    parse_multiplex_edges, read_multiplex_edges, write_multiplex_edges, EdgeRecord, NodeMap,
    ReadOptions,
};
pub use membership::{read_membership_csv, write_membership_csv};
pub use results::{
    format_float, read_results_csv, results_csv_string, write_raw_csv, write_results_csv, SummaryRow, RESULTS_HEADER,
};

use crate::error::{Error, Result};

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(path, e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}
