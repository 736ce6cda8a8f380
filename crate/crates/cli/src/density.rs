use crate::error::{missing, usage, CliResult};
use crate::io::{emit, json_text, Cell, Manifest, Table};
use crate::params::{merge, Range};
use clap::{Args, ValueEnum};
use outlier_lab::critical::{critical_2d_density, critical_imag_density};
use outlier_lab::cue::{radial_density_limit, xmin_cdf_series};
use outlier_lab::finite::{rho2d_exact, rho_imag_exact, FiniteDensityParams, ImagForm};
use outlier_lab::ld::{ld_density, outlier_pdf, LDParams};
use outlier_lab::limit::{
    bulk_scaled_density, expected_count, limit_count_fraction, limit_imag_density, BulkPoint,
    CountForm,
};
use serde::{Deserialize, Serialize};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityModel {
    /// Exact joint density of X + iY at finite n.
    #[value(name = "finite-2d")]
    #[serde(rename = "finite-2d")]
    Finite2d,
    /// Exact density of imaginary parts at finite n.
    FiniteImag,
    /// Bulk density of rescaled imaginary parts at X.
    LimitBulk,
    /// Limiting density of y = nY.
    LimitImag,
    /// Count of eigenvalues above Y (with --n), else the limiting fraction above y.
    LimitCount,
    /// Large-deviation density of imaginary parts.
    Ld,
    /// Approximate density of the outlier.
    OutlierPdf,
    /// Critical-regime density of imaginary parts.
    CriticalImag,
    /// Critical-regime joint density in (q, m).
    #[value(name = "critical-2d")]
    #[serde(rename = "critical-2d")]
    Critical2d,
    /// Limiting radial density of the subunitary model.
    CueRadial,
    /// Distribution function of the smallest modulus.
    CueXmin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityArgs {
    #[arg(long, value_enum)]
    pub model: Option<DensityModel>,
    /// Matrix size.
    #[arg(long)]
    pub n: Option<usize>,
    /// Coupling of the rank-one deformation.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Critical detuning.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    /// Scaled coupling `t` of the subunitary model.
    #[arg(long = "t")]
    pub t: Option<f64>,
    /// Coupling `T` of the subunitary model.
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t_coupling: Option<f64>,
    /// Real part for the bulk density.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<f64>,
    /// Evaluation grid `lo:hi:count`, both ends included.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: Option<String>,
    /// Second grid for the joint densities.
    #[arg(long, allow_hyphen_values = true)]
    pub grid2: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file with default values for any of these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| missing(flag))
}

type Curve1 = Box<dyn Fn(f64) -> outlier_lab::Result<f64>>;
type Curve2 = Box<dyn Fn(f64, f64) -> outlier_lab::Result<f64>>;

enum Plan {
    /// Grid column name, mass (for densities) and the curve.
    One(&'static str, Option<f64>, Curve1),
    /// Outlier density with its validity flag.
    Flagged(LDParams),
    Two([&'static str; 2], Option<f64>, Curve2),
}

fn plan(a: &DensityArgs, model: DensityModel) -> CliResult<Plan> {
    use DensityModel as M;
    Ok(match model {
        M::Finite2d => {
            let p = FiniteDensityParams::new(need(a.n, "n")?, need(a.gamma, "gamma")?)?;
            Plan::Two(["x", "y"], Some(1.0), Box::new(move |x, y| rho2d_exact(p, x, y)))
        }
        M::FiniteImag => {
            let p = FiniteDensityParams::new(need(a.n, "n")?, need(a.gamma, "gamma")?)?;
            Plan::One("y", Some(1.0), Box::new(move |y| rho_imag_exact(p, y, ImagForm::F3)))
        }
        M::LimitBulk => {
            let (x, gamma) = (need(a.x, "x")?, need(a.gamma, "gamma")?);
            Plan::One("y", Some(1.0), Box::new(move |y| bulk_scaled_density(BulkPoint { x, y, gamma })))
        }
        M::LimitImag => {
            let gamma = need(a.gamma, "gamma")?;
            Plan::One("y", Some(1.0), Box::new(move |y| limit_imag_density(y, gamma)))
        }
        M::LimitCount => {
            let gamma = need(a.gamma, "gamma")?;
            match a.n {
                Some(n) => Plan::One(
                    "y",
                    None,
                    Box::new(move |y| expected_count(n, y, gamma, CountForm::Bessel)),
                ),
                None => Plan::One("y", None, Box::new(move |y| limit_count_fraction(y, gamma))),
            }
        }
        M::Ld => {
            let p = LDParams::new(need(a.gamma, "gamma")?, need(a.n, "n")?)?;
            Plan::One("y", Some(1.0), Box::new(move |y| ld_density(p, y)))
        }
        M::OutlierPdf => Plan::Flagged(LDParams::new(need(a.gamma, "gamma")?, need(a.n, "n")?)?),
        M::CriticalImag => {
            let alpha = need(a.alpha, "alpha")?;
            Plan::One("m", None, Box::new(move |m| critical_imag_density(alpha, m)))
        }
        M::Critical2d => {
            let alpha = need(a.alpha, "alpha")?;
            Plan::Two(["q", "m"], None, Box::new(move |q, m| critical_2d_density(alpha, q, m)))
        }
        M::CueRadial => {
            let t = need(a.t_coupling, "T")?;
            Plan::One("y", Some(1.0), Box::new(move |y| radial_density_limit(y, t)))
        }
        M::CueXmin => {
            let t = need(a.t, "t")?;
            Plan::One("x", None, Box::new(move |x| xmin_cdf_series(x, t)))
        }
    })
}

pub fn run(flags: DensityArgs) -> CliResult<()> {
    let (a, mut params) = merge(&flags, flags.config.as_deref())?;
    params.remove("out");
    let model = need(a.model, "model")?;
    let grid = Range::parse("grid", a.grid.as_deref().ok_or_else(|| missing("grid"))?)?.points();
    let out = a.out.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "-".into());
    let mut manifest = Manifest::new("density", params, &out);
    manifest.set_meta("kind", "pointwise");

    let table = match plan(&a, model)? {
        Plan::One(col, mass, f) => {
            if a.grid2.is_some() {
                return Err(usage("--grid2 applies only to finite-2d and critical-2d"));
            }
            if let Some(m) = mass {
                manifest.set_meta("mass", m);
            }
            let mut t = Table::new(manifest, &[col, "value"]);
            for &x in &grid {
                t.push(vec![Cell::F(x), Cell::F(f(x)?)]);
            }
            t
        }
        Plan::Flagged(p) => {
            manifest.set_meta("mass", 1.0);
            let mut t = Table::new(manifest, &["y", "value", "valid"]);
            for &y in &grid {
                let r = outlier_pdf(p, y)?;
                t.push(vec![Cell::F(y), Cell::F(r.value), Cell::U(r.valid as u64)]);
            }
            t
        }
        Plan::Two(cols, mass, f) => {
            let g2 = Range::parse("grid2", a.grid2.as_deref().ok_or_else(|| missing("grid2"))?)?.points();
            if let Some(m) = mass {
                manifest.set_meta("mass", m);
            }
            let mut t = Table::new(manifest, &[cols[0], cols[1], "value"]);
            for &u in &grid {
                for &v in &g2 {
                    t.push(vec![Cell::F(u), Cell::F(v), Cell::F(f(u, v)?)]);
                }
            }
            t
        }
    };
    let text = match a.format.unwrap_or_default() {
        Format::Csv => table.to_csv(),
        Format::Json => json_text(&table.to_json()),
    };
    emit(a.out.as_deref(), &text)
}
