use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};
use crate::model::{Layer, MultiLayerNetwork};

use super::write_atomic;

/// One line of a multiplex edge list: `layer u v [weight]`, all ids 1-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeRecord {
    pub layer: usize,
    pub u: u64,
    pub v: u64,
    pub weight: Option<f64>,
}

impl EdgeRecord {
    fn parse(line: &str) -> std::result::Result<Self, String> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if !(3..=4).contains(&fields.len()) {
            return Err(format!("expected 'layer u v [weight]', got {} fields", fields.len()));
        }
        let int = |s: &str, what: &str| -> std::result::Result<u64, String> {
            let v: u64 = s.parse().map_err(|_| format!("{what} '{s}' is not a positive integer"))?;
            if v == 0 {
                return Err(format!("{what} must be at least 1"));
            }
            Ok(v)
        };
        let layer = int(fields[0], "layer")? as usize;
        let u = int(fields[1], "node id")?;
        let v = int(fields[2], "node id")?;
        let weight = match fields.get(3) {
            Some(s) => {
                let w: f64 = s.parse().map_err(|_| format!("weight '{s}' is not a number"))?;
                if !(w.is_finite() && w >= 0.0) {
                    return Err(format!("weight {w} must be finite and nonnegative"));
                }
                Some(w)
            }
            None => None,
        };
        Ok(Self { layer, u, v, weight })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadOptions {
    /// Any positive weight becomes 1.
    pub binarize: bool,
    pub drop_self_loops: bool,
}

impl Default for ReadOptions {
    fn default() -> Self {
        Self {
            binarize: true,
            drop_self_loops: true,
        }
    }
}

/// Dense node index to the id used in the source file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeMap {
    ids: Vec<u64>,
}

impl NodeMap {
    /// Ids `1..=n`.
    pub fn identity(n: usize) -> Self {
        Self {
            ids: (1..=n as u64).collect(),
        }
    }

    pub fn from_ids(ids: Vec<u64>) -> Self {
        Self { ids }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn original(&self, index: usize) -> u64 {
        self.ids[index]
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    fn is_contiguous(&self) -> bool {
        self.ids.iter().enumerate().all(|(i, &id)| id == i as u64 + 1)
    }

    /// `index,original_id` CSV.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("index,original_id\n");
        for (i, id) in self.ids.iter().enumerate() {
            let _ = writeln!(s, "{},{id}", i + 1);
        }
        s
    }
}

// `#! layers=3 nodes=71` pins the layer count, and with `nodes` declares ids
// 1..=nodes present, so empty layers and isolated nodes survive a round trip.
fn parse_directive(line: &str) -> (Option<usize>, Option<usize>) {
    let mut layers = None;
    let mut nodes = None;
    if let Some(rest) = line.strip_prefix("#!") {
        for tok in rest.split_whitespace() {
            if let Some(v) = tok.strip_prefix("layers=") {
                layers = v.parse().ok();
            } else if let Some(v) = tok.strip_prefix("nodes=") {
                nodes = v.parse().ok();
            }
        }
    }
    (layers, nodes)
}

/// Parses an edge list from any reader. `source` names it in errors.
///
/// Node ids are remapped to dense indices in increasing id order. Layers are
/// symmetric; repeated pairs collapse to one edge keeping the largest weight.
pub fn parse_multiplex_edges(
    reader: impl BufRead,
    source: &Path,
    opts: ReadOptions,
) -> Result<(MultiLayerNetwork, NodeMap)> {
    let mut records = Vec::new();
    let mut min_layers = 0;
    let mut declared_nodes = 0;
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source, e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if trimmed.starts_with('#') {
            let (l, n) = parse_directive(trimmed);
            min_layers = min_layers.max(l.unwrap_or(0));
            declared_nodes = declared_nodes.max(n.unwrap_or(0));
            continue;
        }
        let rec = EdgeRecord::parse(trimmed).map_err(|message| Error::Parse {
            path: source.to_path_buf(),
            line: lineno + 1,
            message,
        })?;
        records.push(rec);
    }

    let mut index: BTreeMap<u64, usize> = (1..=declared_nodes as u64).map(|id| (id, 0)).collect();
    for r in &records {
        index.insert(r.u, 0);
        index.insert(r.v, 0);
    }
    if index.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    for (i, slot) in index.values_mut().enumerate() {
        *slot = i;
    }
    let n = index.len();
    let num_layers = records.iter().map(|r| r.layer).max().unwrap_or(0).max(min_layers).max(1);

    let mut per_layer: Vec<Vec<(usize, usize, f64)>> = vec![Vec::new(); num_layers];
    for r in &records {
        let (u, v) = (index[&r.u], index[&r.v]);
        if opts.drop_self_loops && u == v {
            continue;
        }
        let w = r.weight.unwrap_or(1.0);
        if w == 0.0 {
            continue;
        }
        per_layer[r.layer - 1].push((u, v, if opts.binarize { 1.0 } else { w }));
    }
    let layers = per_layer
        .into_iter()
        .map(|edges| Layer::from_edges(n, edges))
        .collect::<Result<Vec<_>>>()?;
    let net = MultiLayerNetwork::new(n, layers, !opts.drop_self_loops)?;
    Ok((net, NodeMap::from_ids(index.into_keys().collect())))
}

pub fn read_multiplex_edges(path: &Path, opts: ReadOptions) -> Result<(MultiLayerNetwork, NodeMap)> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    parse_multiplex_edges(std::io::BufReader::new(file), path, opts)
}

/// Writes each undirected edge once (`u <= v`) with original ids. Weights are
/// written only for non-binary networks.
pub fn write_multiplex_edges(net: &MultiLayerNetwork, map: &NodeMap, path: &Path) -> Result<()> {
    if map.len() != net.n() {
        return Err(Error::Dimension(format!(
            "node map has {} entries for {} nodes",
            map.len(),
            net.n()
        )));
    }
    let mut s = String::new();
    if map.is_contiguous() {
        let _ = writeln!(s, "#! layers={} nodes={}", net.num_layers(), net.n());
    } else {
        let _ = writeln!(s, "#! layers={}", net.num_layers());
    }
    for (l, layer) in net.layers().iter().enumerate() {
        for (i, j, w) in layer.upper_edges() {
            let (u, v) = (map.original(i), map.original(j));
            if net.is_binary() {
                let _ = writeln!(s, "{} {u} {v}", l + 1);
            } else {
                let _ = writeln!(s, "{} {u} {v} {w}", l + 1);
            }
        }
    }
    write_atomic(path, s.as_bytes())
}
