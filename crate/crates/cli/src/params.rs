use crate::error::{usage, CliResult};
use crate::io::read_text;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};
use std::collections::BTreeMap;
use std::path::Path;

pub const SEED_ENV: &str = "OUTLIER_LAB_SEED";

/// Overlays the flags given on the command line onto an optional JSON
/// configuration file. Returns the merged arguments and the merged map.
pub fn merge<T: Serialize + DeserializeOwned>(
    flags: &T,
    config: Option<&Path>,
) -> CliResult<(T, BTreeMap<String, Value>)> {
    let mut merged = match config {
        Some(p) => match serde_json::from_str::<Value>(&read_text(p)?) {
            Ok(Value::Object(m)) => m,
            Ok(_) => return Err(usage(format!("{}: config must be a JSON object", p.display()))),
            Err(e) => return Err(usage(format!("{}: {e}", p.display()))),
        },
        None => Map::new(),
    };
    let given = serde_json::to_value(flags).map_err(|e| usage(e.to_string()))?;
    if let Value::Object(m) = given {
        merged.extend(m.into_iter().filter(|(_, v)| !v.is_null()));
    }
    let args: T = serde_json::from_value(Value::Object(merged.clone()))
        .map_err(|e| usage(format!("bad configuration: {e}")))?;
    Ok((args, merged.into_iter().collect()))
}

/// `lo:hi:count`, with both ends included for grids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl Range {
    pub fn parse(flag: &str, s: &str) -> CliResult<Self> {
        let bad = || usage(format!("--{flag} expects lo:hi:count, got `{s}`"));
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(bad());
        }
        let lo: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let hi: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        if !(lo.is_finite() && hi.is_finite() && hi > lo) {
            return Err(usage(format!("--{flag}: need finite lo < hi, got `{s}`")));
        }
        if count < 2 {
            return Err(usage(format!("--{flag}: need a count of at least 2, got `{s}`")));
        }
        Ok(Self { lo, hi, count })
    }

    /// `count` equally spaced points from `lo` to `hi`.
    pub fn points(&self) -> Vec<f64> {
        let h = (self.hi - self.lo) / (self.count - 1) as f64;
        (0..self.count)
            .map(|i| if i + 1 == self.count { self.hi } else { self.lo + i as f64 * h })
            .collect()
    }
}

/// Seed from the merged arguments, else from the environment.
pub fn resolve_seed(seed: Option<u64>) -> CliResult<u64> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| usage(format!("{SEED_ENV} must be an unsigned integer, got `{v}`"))),
        Err(_) => Err(usage(format!("missing required flag --seed (or {SEED_ENV})"))),
    }
}
