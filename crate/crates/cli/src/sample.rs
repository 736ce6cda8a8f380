use crate::error::{invalid, missing, usage, CliResult};
use crate::io::{document, emit, json_text, Cell, Manifest, Table};
use crate::params::{merge, resolve_seed, Range};
use clap::{Args, ValueEnum};
use outlier_lab::harness::{
    run_trials, BinSpec, Ensemble, EnsembleStats, Histogram, Observable, Solver, Summary, TrialConfig,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// GUE with the rank-one imaginary deformation (needs --gamma).
    Gue,
    /// Haar unitary with one damped channel (needs --T).
    Cue,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Tridiagonal,
    Dense,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleKind>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t_coupling: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    /// Master seed; falls back to OUTLIER_LAB_SEED.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Comma-separated subset of imag-hist, ymax, exceed-counts, scaled-2d, min-modulus.
    #[arg(long, value_delimiter = ',')]
    pub observables: Option<Vec<String>>,
    /// Comma-separated ascending levels m, counted as heights above m n^{-1/3}.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thresholds: Option<Vec<f64>>,
    /// Height bins `lo:hi:count`.
    #[arg(long, allow_hyphen_values = true)]
    pub bins: Option<String>,
    /// Bins of the scaled real part for scaled-2d.
    #[arg(long, allow_hyphen_values = true)]
    pub bins_x: Option<String>,
    /// Bins of the scaled imaginary part for scaled-2d.
    #[arg(long, allow_hyphen_values = true)]
    pub bins_y: Option<String>,
    /// Exponent `a` in the scaling `n^a z` used by scaled-2d.
    #[arg(long, allow_hyphen_values = true)]
    pub scale_exponent: Option<f64>,
    #[arg(long, value_enum)]
    pub solver: Option<SolverKind>,
    /// Size of the worker pool. Results do not depend on it.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn bins(flag: &str, s: &str) -> CliResult<BinSpec> {
    let r = Range::parse(flag, s)?;
    BinSpec::new(r.lo, r.hi, r.count).map_err(invalid)
}

fn bins_text(b: &BinSpec) -> String {
    format!("{}:{}:{}", b.lo, b.hi, b.count)
}

fn list_text(xs: &[f64]) -> String {
    xs.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn build_config(a: &SampleArgs) -> CliResult<TrialConfig> {
    let n = a.n.ok_or_else(|| missing("n"))?;
    let ensemble = match a.ensemble.ok_or_else(|| missing("ensemble"))? {
        EnsembleKind::Gue => {
            if a.t_coupling.is_some() {
                return Err(usage("--T applies only to --ensemble cue"));
            }
            Ensemble::GueDeformed {
                gamma: a.gamma.ok_or_else(|| missing("gamma"))?,
            }
        }
        EnsembleKind::Cue => {
            if a.gamma.is_some() {
                return Err(usage("--gamma applies only to --ensemble gue"));
            }
            Ensemble::CueSubunitary {
                t_coupling: a.t_coupling.ok_or_else(|| missing("T"))?,
            }
        }
    };
    let trials = a.trials.ok_or_else(|| missing("trials"))?;
    let mut cfg = TrialConfig::new(ensemble, n, trials, resolve_seed(a.seed)?);
    if let Some(obs) = &a.observables {
        let obs = obs
            .iter()
            .map(|s| Observable::parse(s.trim()))
            .collect::<Result<Vec<_>, _>>()
            .map_err(invalid)?;
        cfg = cfg.with_observables(&obs);
    }
    if let Some(t) = &a.thresholds {
        cfg.thresholds = t.clone();
    }
    if let Some(b) = &a.bins {
        cfg.bins = bins("bins", b)?;
    }
    cfg.bins_2d = match (&a.bins_x, &a.bins_y) {
        (Some(x), Some(y)) => Some((bins("bins-x", x)?, bins("bins-y", y)?)),
        (None, None) => None,
        _ => return Err(usage("--bins-x and --bins-y go together")),
    };
    if let Some(e) = a.scale_exponent {
        cfg.scale_exponent = e;
    }
    cfg.solver = match a.solver {
        Some(SolverKind::Dense) => Solver::Dense,
        _ => Solver::Tridiagonal,
    };
    cfg.workers = a.workers;
    cfg.validate().map_err(invalid)?;
    Ok(cfg)
}

/// The effective configuration, defaults included. The worker count is left
/// out because it does not affect the results.
fn parameters(cfg: &TrialConfig) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    match cfg.ensemble {
        Ensemble::GueDeformed { gamma } => {
            p.insert("ensemble".into(), json!("gue"));
            p.insert("gamma".into(), json!(gamma));
        }
        Ensemble::CueSubunitary { t_coupling } => {
            p.insert("ensemble".into(), json!("cue"));
            p.insert("T".into(), json!(t_coupling));
        }
    }
    p.insert("n".into(), json!(cfg.n));
    p.insert("trials".into(), json!(cfg.trials));
    let obs: Vec<&str> = cfg.observables.iter().map(|o| o.name()).collect();
    p.insert("observables".into(), json!(obs.join(",")));
    if !cfg.thresholds.is_empty() {
        p.insert("thresholds".into(), json!(list_text(&cfg.thresholds)));
    }
    p.insert("bins".into(), json!(bins_text(&cfg.bins)));
    if let Some((bx, by)) = &cfg.bins_2d {
        p.insert("bins_x".into(), json!(bins_text(bx)));
        p.insert("bins_y".into(), json!(bins_text(by)));
    }
    p.insert("scale_exponent".into(), json!(cfg.scale_exponent));
    let solver = match cfg.solver {
        Solver::Tridiagonal => "tridiagonal",
        Solver::Dense => "dense",
    };
    p.insert("solver".into(), json!(solver));
    p
}

fn height_name(cfg: &TrialConfig) -> &'static str {
    match cfg.ensemble {
        Ensemble::GueDeformed { .. } => "imaginary-part",
        Ensemble::CueSubunitary { .. } => "one-minus-modulus",
    }
}

fn histogram_table(m: Manifest, h: &Histogram, mass: f64) -> Table {
    let mut m = m;
    m.set_meta("mass", mass);
    m.set_meta("bins_lo", h.bins.lo);
    m.set_meta("bins_hi", h.bins.hi);
    m.set_meta("bins_count", h.bins.count as u64);
    m.set_meta("samples_total", h.total());
    m.set_meta("underflow", h.underflow);
    m.set_meta("overflow", h.overflow);
    m.set_meta("invalid", h.invalid);
    let edges = h.bins.edges();
    let mut t = Table::new(m, &["lo", "hi", "count", "density"]);
    for (i, (&c, d)) in h.counts.iter().zip(h.density(mass)).enumerate() {
        t.push(vec![Cell::F(edges[i]), Cell::F(edges[i + 1]), Cell::U(c), Cell::F(d)]);
    }
    t
}

fn sample_table(m: Manifest, column: &str, xs: &[f64], stats: &EnsembleStats) -> Table {
    let mut t = Table::new(m, &["trial", column]);
    for (r, &x) in stats.records.iter().zip(xs) {
        t.push(vec![Cell::U(r.index), Cell::F(x)]);
    }
    t
}

fn summary_json(s: &Summary) -> Value {
    json!({ "count": s.count, "mean": s.mean, "std_dev": s.std_dev, "std_err": s.std_err })
}

fn write(dir: &Path, name: &str, text: &str) -> CliResult<()> {
    emit(Some(&dir.join(name)), text)
}

pub fn run(flags: SampleArgs) -> CliResult<()> {
    let (a, _) = merge(&flags, flags.config.as_deref())?;
    let cfg = build_config(&a)?;
    let dir = a.out.clone().ok_or_else(|| missing("out"))?;
    let stats = run_trials(&cfg)?;

    fs::create_dir_all(&dir).map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let mut base = Manifest::new("sample", parameters(&cfg), "");
    base.master_seed = Some(cfg.master_seed);
    base.set_meta("trials_done", stats.trials_done);
    base.set_meta("failures", stats.failures() as u64);
    base.set_meta("height", height_name(&cfg));
    let path = |name: &str| dir.join(name).display().to_string();
    let manifest_for = |obs: &str, file: &str| {
        let mut m = base.with_output(&path(file));
        m.set_meta("observable", obs);
        m
    };

    let mut data = serde_json::Map::new();
    data.insert("trials_done".into(), json!(stats.trials_done));
    data.insert("failures".into(), json!(stats.failures()));
    data.insert("failed_trials".into(), json!(stats.failed_trials));
    data.insert("max_invariant_residual".into(), json!(stats.max_invariant_residual()));

    if let Some(h) = &stats.imag_hist {
        let t = histogram_table(manifest_for("imag-hist", "imag-hist.csv"), h, cfg.n as f64);
        write(&dir, "imag-hist.csv", &t.to_csv())?;
        data.insert("imag_hist".into(), json!({ "samples_total": h.total(), "in_range": h.in_range() }));
    }
    if let Some(h) = &stats.ymax_hist {
        let t = histogram_table(manifest_for("ymax", "ymax.csv"), h, 1.0);
        write(&dir, "ymax.csv", &t.to_csv())?;
        let xs = stats.ymax_samples();
        let s = sample_table(manifest_for("ymax", "ymax-samples.csv"), "y_max", &xs, &stats);
        write(&dir, "ymax-samples.csv", &s.to_csv())?;
        data.insert("ymax".into(), summary_json(&Summary::of(&xs)));
    }
    if cfg.wants(Observable::ExceedCounts) {
        let mut m = manifest_for("exceed-counts", "exceed-counts.csv");
        m.set_meta("thresholds", list_text(&cfg.thresholds));
        m.set_meta("level_scale", (cfg.n as f64).powf(-1.0 / 3.0));
        let cols: Vec<String> = (0..cfg.thresholds.len()).map(|k| format!("above_{k}")).collect();
        let mut names = vec!["trial"];
        names.extend(cols.iter().map(String::as_str));
        let mut t = Table::new(m, &names);
        for r in &stats.records {
            let mut row = vec![Cell::U(r.index)];
            row.extend(r.exceed.iter().map(|&c| Cell::U(c as u64)));
            t.push(row);
        }
        write(&dir, "exceed-counts.csv", &t.to_csv())?;
        let ex: Vec<Value> = cfg
            .thresholds
            .iter()
            .enumerate()
            .map(|(k, &m)| {
                let mut v = summary_json(&stats.exceed_summary(k));
                v["threshold"] = json!(m);
                v["total"] = json!(stats.exceed_totals[k]);
                v
            })
            .collect();
        data.insert("exceed_counts".into(), Value::Array(ex));
    }
    if let Some(h) = &stats.hist_2d {
        let mut m = manifest_for("scaled-2d", "scaled-2d.csv");
        m.set_meta("outside", h.outside);
        m.set_meta("samples_total", h.total());
        let (ex, ey) = (h.x.edges(), h.y.edges());
        let mut t = Table::new(m, &["x_lo", "x_hi", "y_lo", "y_hi", "count"]);
        for iy in 0..h.y.count {
            for ix in 0..h.x.count {
                t.push(vec![
                    Cell::F(ex[ix]),
                    Cell::F(ex[ix + 1]),
                    Cell::F(ey[iy]),
                    Cell::F(ey[iy + 1]),
                    Cell::U(h.get(ix, iy)),
                ]);
            }
        }
        write(&dir, "scaled-2d.csv", &t.to_csv())?;
        data.insert("scaled_2d".into(), json!({ "samples_total": h.total(), "outside": h.outside }));
    }
    if cfg.wants(Observable::MinModulus) {
        let xs = stats.min_modulus_samples();
        let t = sample_table(manifest_for("min-modulus", "min-modulus.csv"), "min_modulus", &xs, &stats);
        write(&dir, "min-modulus.csv", &t.to_csv())?;
        data.insert("min_modulus".into(), summary_json(&Summary::of(&xs)));
    }

    let m = base.with_output(&path("summary.json"));
    write(&dir, "summary.json", &json_text(&document(&m, Value::Object(data))))
}
