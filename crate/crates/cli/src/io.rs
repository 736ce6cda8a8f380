use crate::error::{usage, CliResult};
use serde_json::{json, Map, Value};
use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

pub const TOOL_VERSION: &str = concat!("outlier-lab ", env!("CARGO_PKG_VERSION"));

/// Provenance embedded in every emitted file. `meta` holds facts about the
/// output itself, such as the mass convention or the bin layout.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub master_seed: Option<u64>,
    pub tool_version: String,
    pub output_path: String,
    pub meta: BTreeMap<String, Value>,
}

impl Manifest {
    pub fn new(command: &str, parameters: BTreeMap<String, Value>, output_path: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters,
            master_seed: None,
            tool_version: TOOL_VERSION.to_string(),
            output_path: output_path.to_string(),
            meta: BTreeMap::new(),
        }
    }

    pub fn with_output(&self, output_path: &str) -> Self {
        Self {
            output_path: output_path.to_string(),
            ..self.clone()
        }
    }

    pub fn set_meta(&mut self, key: &str, v: impl Into<Value>) {
        self.meta.insert(key.to_string(), v.into());
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        m.insert("command".into(), json!(self.command));
        m.insert("parameters".into(), json!(self.parameters));
        if let Some(s) = self.master_seed {
            m.insert("master_seed".into(), json!(s));
        }
        m.insert("tool_version".into(), json!(self.tool_version));
        m.insert("output_path".into(), json!(self.output_path));
        if !self.meta.is_empty() {
            m.insert("meta".into(), json!(self.meta));
        }
        Value::Object(m)
    }

    fn csv_lines(&self) -> Vec<String> {
        let mut out = vec![format!("# command={}", self.command)];
        out.extend(
            self.parameters
                .iter()
                .map(|(k, v)| format!("# param.{k}={}", scalar_text(v))),
        );
        if let Some(s) = self.master_seed {
            out.push(format!("# master_seed={s}"));
        }
        out.push(format!("# tool_version={}", self.tool_version));
        out.push(format!("# output_path={}", self.output_path));
        out.extend(
            self.meta
                .iter()
                .map(|(k, v)| format!("# meta.{k}={}", scalar_text(v))),
        );
        out
    }

    fn from_csv_lines(lines: &[(String, String)]) -> CliResult<Self> {
        let mut m = Manifest::new("", BTreeMap::new(), "");
        m.tool_version.clear();
        for (k, v) in lines {
            if let Some(p) = k.strip_prefix("param.") {
                m.parameters.insert(p.to_string(), parse_scalar(v));
            } else if let Some(p) = k.strip_prefix("meta.") {
                m.meta.insert(p.to_string(), parse_scalar(v));
            } else {
                match k.as_str() {
                    "command" => m.command = v.clone(),
                    "master_seed" => {
                        m.master_seed = Some(
                            v.parse()
                                .map_err(|_| usage(format!("bad master_seed `{v}`")))?,
                        )
                    }
                    "tool_version" => m.tool_version = v.clone(),
                    "output_path" => m.output_path = v.clone(),
                    _ => return Err(usage(format!("unknown manifest key `{k}`"))),
                }
            }
        }
        if m.command.is_empty() || m.tool_version.is_empty() {
            return Err(usage("file carries no outlier-lab manifest"));
        }
        Ok(m)
    }

    pub fn meta_f64(&self, key: &str) -> CliResult<f64> {
        self.meta
            .get(key)
            .and_then(Value::as_f64)
            .ok_or_else(|| usage(format!("manifest lacks numeric meta.{key}")))
    }

    pub fn meta_u64(&self, key: &str) -> CliResult<u64> {
        self.meta
            .get(key)
            .and_then(Value::as_u64)
            .ok_or_else(|| usage(format!("manifest lacks integer meta.{key}")))
    }

    pub fn meta_str(&self, key: &str) -> CliResult<&str> {
        self.meta
            .get(key)
            .and_then(Value::as_str)
            .ok_or_else(|| usage(format!("manifest lacks meta.{key}")))
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn parse_scalar(s: &str) -> Value {
    serde_json::from_str::<Value>(s)
        .ok()
        .filter(|v| v.is_number() || v.is_boolean())
        .unwrap_or_else(|| Value::String(s.to_string()))
}

/// A cell of a CSV table.
#[derive(Debug, Clone, Copy)]
pub enum Cell {
    F(f64),
    U(u64),
}

impl Cell {
    fn text(self) -> String {
        match self {
            // 17 significant digits round-trip every f64
            Cell::F(x) => format!("{x:.16e}"),
            Cell::U(u) => u.to_string(),
        }
    }

    pub fn as_f64(self) -> f64 {
        match self {
            Cell::F(x) => x,
            Cell::U(u) => u as f64,
        }
    }
}

/// Column-major table with a manifest.
#[derive(Debug, Clone)]
pub struct Table {
    pub manifest: Manifest,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(manifest: Manifest, columns: &[&str]) -> Self {
        Self {
            manifest,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> CliResult<Vec<f64>> {
        let j = self
            .columns
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| usage(format!("table has no column `{name}`")))?;
        Ok(self.rows.iter().map(|r| r[j].as_f64()).collect())
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for l in self.manifest.csv_lines() {
            s.push_str(&l);
            s.push('\n');
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for r in &self.rows {
            let cells: Vec<String> = r.iter().map(|c| c.text()).collect();
            s.push_str(&cells.join(","));
            s.push('\n');
        }
        s
    }

    pub fn to_json(&self) -> Value {
        let mut data = Map::new();
        for (j, c) in self.columns.iter().enumerate() {
            let col: Vec<Value> = self
                .rows
                .iter()
                .map(|r| match r[j] {
                    Cell::F(x) => json!(x),
                    Cell::U(u) => json!(u),
                })
                .collect();
            data.insert(c.clone(), Value::Array(col));
        }
        document(&self.manifest, Value::Object(data))
    }

    pub fn parse_csv(text: &str) -> CliResult<Self> {
        let mut meta = Vec::new();
        let mut lines = text.lines();
        let header = loop {
            match lines.next() {
                Some(l) if l.starts_with('#') => {
                    let body = l.trim_start_matches('#').trim_start();
                    let (k, v) = body
                        .split_once('=')
                        .ok_or_else(|| usage(format!("bad manifest line `{l}`")))?;
                    meta.push((k.to_string(), v.to_string()));
                }
                Some(l) => break l,
                None => return Err(usage("file has no header row")),
            }
        };
        let manifest = Manifest::from_csv_lines(&meta)?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (i, l) in lines.enumerate().filter(|(_, l)| !l.is_empty()) {
            let row = l
                .split(',')
                .map(|c| {
                    c.parse::<u64>()
                        .map(Cell::U)
                        .or_else(|_| c.parse::<f64>().map(Cell::F))
                        .map_err(|_| usage(format!("row {}: bad number `{c}`", i + 1)))
                })
                .collect::<CliResult<Vec<_>>>()?;
            if row.len() != columns.len() {
                return Err(usage(format!("row {} has {} cells", i + 1, row.len())));
            }
            rows.push(row);
        }
        Ok(Self {
            manifest,
            columns,
            rows,
        })
    }
}

pub fn document(manifest: &Manifest, data: Value) -> Value {
    json!({ "manifest": manifest.to_json(), "data": data })
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| usage(format!("cannot write to stdout: {e}"))),
    }
}

pub fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}
