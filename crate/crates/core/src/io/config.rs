//! Flat `key = value` experiment configs.
//!
//! ```text
//! # comments start with '#'
//! preset = exp1-scaled      # optional; other keys override it
//! n = 200
//! L = 30
//! rho = 0.1
//! n0 = 50
//! K = 3
//! pure_fraction = 0.25      # n0 = floor(n * pure_fraction)
//! sweep = rho               # rho | L | n | n0
//! values = 0.02, 0.06, 0.1
//! repetitions = 20
//! seed = 7
//! methods = spsum, spdsos, spsos
//! self_loops = true
//! ```

use std::path::Path;

use crate::error::{Error, Result};
use crate::estimators::Method;
use crate::experiments::{ExperimentConfig, Preset, SweepParam};

const KEYS: [&str; 13] = [
    "preset",
    "n",
    "L",
    "rho",
    "n0",
    "K",
    "pure_fraction",
    "sweep",
    "values",
    "repetitions",
    "seed",
    "methods",
    "self_loops",
];

/// Parses config text. Without a `preset`, every model key plus `sweep` and
/// `values` is required.
pub fn parse_config(text: &str, source: &Path) -> Result<ExperimentConfig> {
    let err = |line: usize, message: String| Error::Parse {
        path: source.to_path_buf(),
        line,
        message,
    };
    let mut pairs: Vec<(usize, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| err(i + 1, format!("expected key = value, got '{line}'")))?;
        let key = k.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(err(i + 1, format!("unknown key '{key}'")));
        }
        if pairs.iter().any(|(_, k, _)| *k == key) {
            return Err(err(i + 1, format!("duplicate key '{key}'")));
        }
        pairs.push((i + 1, key, v.trim().to_string()));
    }
    let get = |key: &str| pairs.iter().find(|(_, k, _)| k == key);

    let seed = match get("seed") {
        Some((l, _, v)) => v.parse().map_err(|_| err(*l, format!("bad seed '{v}'")))?,
        None => 0,
    };
    let mut cfg = match get("preset") {
        Some((l, _, v)) => v
            .parse::<Preset>()
            .map_err(|e| err(*l, e.to_string()))?
            .config(seed),
        None => {
            for key in ["n", "L", "rho", "n0", "sweep", "values"] {
                if get(key).is_none() {
                    return Err(err(0, format!("missing key '{key}' (no preset given)")));
                }
            }
            ExperimentConfig {
                preset: None,
                n: 0,
                layers: 0,
                rho: 0.0,
                n0: 0,
                k: 3,
                pure_fraction: None,
                sweep: SweepParam::Rho,
                values: Vec::new(),
                repetitions: 1,
                base_seed: seed,
                methods: Method::ALL.to_vec(),
                self_loops: true,
            }
        }
    };

    for (line, key, value) in &pairs {
        let line = *line;
        let count = |v: &str| -> Result<usize> {
            v.parse().map_err(|_| err(line, format!("'{key}' must be a count, got '{v}'")))
        };
        let real = |v: &str| -> Result<f64> {
            v.parse().map_err(|_| err(line, format!("'{key}' must be a number, got '{v}'")))
        };
        match key.as_str() {
            "n" => cfg.n = count(value)?,
            "L" => cfg.layers = count(value)?,
            "rho" => cfg.rho = real(value)?,
            "n0" => cfg.n0 = count(value)?,
            "K" => cfg.k = count(value)?,
            "pure_fraction" => cfg.pure_fraction = Some(real(value)?),
            "sweep" => cfg.sweep = value.parse().map_err(|e: Error| err(line, e.to_string()))?,
            "values" => {
                cfg.values = value
                    .split(',')
                    .map(|v| real(v.trim()))
                    .collect::<Result<Vec<_>>>()?
            }
            "repetitions" => cfg.repetitions = count(value)?,
            "methods" => {
                cfg.methods = value
                    .split(',')
                    .map(|m| m.trim().parse::<Method>())
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| err(line, e.to_string()))?
            }
            "self_loops" => {
                cfg.self_loops = value
                    .parse()
                    .map_err(|_| err(line, format!("self_loops must be true or false, got '{value}'")))?
            }
            "seed" => cfg.base_seed = seed,
            _ => {}
        }
    }
    if pairs.iter().any(|(_, k, _)| k != "seed" && k != "preset") {
        cfg.preset = None;
    }
    cfg.validate().map_err(|e| err(0, e.to_string()))?;
    Ok(cfg)
}

pub fn read_config(path: &Path) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_config(&text, path)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig> {
        parse_config(text, Path::new("cfg"))
    }

    #[test]
    fn preset_with_override() {
        let c = parse("preset = exp1-scaled\nrepetitions = 3\nseed = 9\n").unwrap();
        assert_eq!(c.repetitions, 3);
        assert_eq!(c.base_seed, 9);
        assert_eq!(c.n, 200);
        assert_eq!(c.preset, None);
        let c = parse("preset = exp2-scaled\nseed = 9\n").unwrap();
        assert_eq!(c.preset, Some(Preset::Exp2Scaled));
    }

    #[test]
    fn full_custom_config() {
        let text = "n = 90\nL = 5\nrho = 0.3\nn0 = 10 # pure\nsweep = L\nvalues = 2, 4, 8\nmethods = spdsos\nself_loops = false\n";
        let c = parse(text).unwrap();
        assert_eq!(c.sweep, SweepParam::Layers);
        assert_eq!(c.values, vec![2.0, 4.0, 8.0]);
        assert_eq!(c.methods, vec![Method::SpDSoS]);
        assert!(!c.self_loops);
    }

    #[test]
    fn errors() {
        assert!(matches!(parse("n = 5\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse("bogus = 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse("preset = exp1\nn\n"), Err(Error::Parse { line: 2, .. })));
        assert!(parse("preset = exp1\nn = 1\nn = 2\n").is_err());
        assert!(parse("preset = exp1\nvalues = 0.2, 0.1\n").is_err());
    }
}
