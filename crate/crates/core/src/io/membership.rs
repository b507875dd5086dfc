use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::metrics::classify_nodes;
use crate::model::MembershipMatrix;

use super::{write_atomic, NodeMap};

/// Rows read back from text must sum to one within this tolerance.
const READ_ROW_TOL: f64 = 1e-6;

/// `node,pi_1..pi_K,home,label`. `node` is the original id, `home` is
/// 1-based. Values use the shortest representation that round-trips.
pub fn write_membership_csv(pi: &MembershipMatrix, map: &NodeMap, path: &Path) -> Result<()> {
    if map.len() != pi.n() {
        return Err(Error::Dimension(format!(
            "node map has {} entries for {} rows",
            map.len(),
            pi.n()
        )));
    }
    let cls = classify_nodes(pi);
    let mut s = String::from("node");
    for c in 1..=pi.k() {
        let _ = write!(s, ",pi_{c}");
    }
    s.push_str(",home,label\n");
    for i in 0..pi.n() {
        let _ = write!(s, "{}", map.original(i));
        for c in 0..pi.k() {
            let _ = write!(s, ",{}", pi.get(i, c));
        }
        let _ = writeln!(s, ",{},{}", cls.home_community[i] + 1, cls.labels[i]);
    }
    write_atomic(path, s.as_bytes())
}

/// Reads the `pi_*` columns of a membership CSV. Other columns are ignored.
pub fn read_membership_csv(path: &Path) -> Result<(NodeMap, MembershipMatrix)> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        message,
    };
    let mut rdr = csv::Reader::from_path(path).map_err(|e| parse_err(0, e.to_string()))?;
    let headers = rdr.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let node_col = headers.iter().position(|h| h == "node");
    let pi_cols: Vec<usize> = headers
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("pi_"))
        .map(|(i, _)| i)
        .collect();
    if pi_cols.is_empty() {
        return Err(parse_err(1, "no pi_* columns".into()));
    }
    let mut ids = Vec::new();
    let mut rows = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let line = r + 2;
        let rec = rec.map_err(|e| parse_err(line, e.to_string()))?;
        let id = match node_col {
            Some(c) => rec[c]
                .parse()
                .map_err(|_| parse_err(line, format!("node id '{}' is not an integer", &rec[c])))?,
            None => r as u64 + 1,
        };
        ids.push(id);
        let row = pi_cols
            .iter()
            .map(|&c| {
                rec[c]
                    .parse::<f64>()
                    .map_err(|_| parse_err(line, format!("'{}' is not a number", &rec[c])))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    let pi = MembershipMatrix::from_rows_lenient(&rows, READ_ROW_TOL)?;
    Ok((NodeMap::from_ids(ids), pi))
}
