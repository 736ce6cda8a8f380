use crate::error::{missing, usage, CliError, CliResult};
use crate::io::{document, emit, json_text, read_text, Manifest, Table};
use crate::params::merge;
use clap::Args;
use outlier_lab::harness::{compare_histogram, BinSpec, Histogram};
use outlier_lab::model::{CurveKind, ModelCurve};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareArgs {
    /// Histogram written by `sample` (imag-hist.csv or ymax.csv).
    #[arg(long)]
    pub empirical: Option<PathBuf>,
    /// One-dimensional density written by `density`, or a histogram written
    /// by `sample`.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn read_table(p: &Path) -> CliResult<Table> {
    Table::parse_csv(&read_text(p)?).map_err(|e| usage(format!("{}: {e}", p.display())))
}

fn histogram(t: &Table) -> CliResult<Histogram> {
    let m = &t.manifest;
    if m.command != "sample" {
        return Err(usage(format!("empirical input comes from `{}`, not `sample`", m.command)));
    }
    let obs = m.meta_str("observable")?;
    if obs != "imag-hist" && obs != "ymax" {
        return Err(usage(format!("observable `{obs}` is not a height histogram")));
    }
    let bins = BinSpec::new(m.meta_f64("bins_lo")?, m.meta_f64("bins_hi")?, m.meta_u64("bins_count")? as usize)
        .map_err(|e| usage(e.to_string()))?;
    let counts: Vec<u64> = t.column("count")?.into_iter().map(|c| c as u64).collect();
    if counts.len() != bins.count {
        return Err(usage(format!("{} rows for {} bins", counts.len(), bins.count)));
    }
    let (lo, hi) = (t.column("lo")?, t.column("hi")?);
    let edges = bins.edges();
    if lo.iter().zip(&edges).any(|(a, b)| a != b) || hi.iter().zip(&edges[1..]).any(|(a, b)| a != b) {
        return Err(usage("bin edges disagree with the manifest"));
    }
    let h = Histogram {
        bins,
        counts,
        underflow: m.meta_u64("underflow")?,
        overflow: m.meta_u64("overflow")?,
        invalid: m.meta_u64("invalid")?,
    };
    if h.total() != m.meta_u64("samples_total")? {
        return Err(usage("sample total disagrees with the manifest"));
    }
    Ok(h)
}

/// A histogram read back as a bin-averaged density.
fn histogram_curve(t: &Table) -> CliResult<ModelCurve> {
    let h = histogram(t)?;
    let mass = t.manifest.meta_f64("mass")?;
    Ok(ModelCurve {
        model: format!("sample:{}", t.manifest.meta_str("observable")?),
        parameters: BTreeMap::new(),
        kind: CurveKind::BinAveraged,
        grid: h.bins.edges(),
        values: t.column("density")?,
        mass,
    })
}

fn model_curve(t: &Table) -> CliResult<ModelCurve> {
    let m = &t.manifest;
    if m.command == "sample" {
        return histogram_curve(t);
    }
    if m.command != "density" {
        return Err(usage(format!("model input comes from `{}`", m.command)));
    }
    if m.meta_str("kind")? != "pointwise" {
        return Err(usage("model curve must be pointwise"));
    }
    let mass = m
        .meta_f64("mass")
        .map_err(|_| usage("model is not a density with a mass convention"))?;
    let grid_col = t.columns.first().cloned().unwrap_or_default();
    if t.columns.get(1).map(String::as_str) != Some("value") {
        return Err(usage("model must be a one-dimensional curve"));
    }
    let parameters: BTreeMap<String, f64> = m
        .parameters
        .iter()
        .filter_map(|(k, v)| v.as_f64().map(|x| (k.clone(), x)))
        .collect();
    let name = m.parameters.get("model").and_then(Value::as_str).unwrap_or("unknown");
    Ok(ModelCurve {
        model: name.to_string(),
        parameters,
        kind: CurveKind::Pointwise,
        grid: t.column(&grid_col)?,
        values: t.column("value")?,
        mass,
    })
}

pub fn run(flags: CompareArgs) -> CliResult<()> {
    let (a, mut params) = merge(&flags, flags.config.as_deref())?;
    params.remove("out");
    let emp_path = a.empirical.clone().ok_or_else(|| missing("empirical"))?;
    let model_path = a.model.clone().ok_or_else(|| missing("model"))?;
    let emp = read_table(&emp_path)?;
    let model = read_table(&model_path)?;
    let h = histogram(&emp)?;
    let curve = model_curve(&model)?;
    let report = compare_histogram(&h, &curve).map_err(|e| match e {
        outlier_lab::Error::InvalidArgument(m) => usage(format!("incompatible inputs: {m}")),
        other => CliError::Numeric(other),
    })?;
    let out = a.out.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "-".into());
    let manifest = Manifest::new("compare", params, &out);
    let data = json!({
        "report": report,
        "empirical_manifest": emp.manifest.to_json(),
        "model_manifest": model.manifest.to_json(),
    });
    emit(a.out.as_deref(), &json_text(&document(&manifest, data)))
}
