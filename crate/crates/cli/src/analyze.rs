use crate::error::{missing, CliResult};
use crate::io::{document, emit, json_text, Manifest};
use crate::params::merge;
use clap::{Args, ValueEnum};
use outlier_lab::critical::{alpha0_bracket, q6_asymptotic_roots, q6_coefficients, q6_real_roots};
use outlier_lab::ld::{fluctuation_sigma, stationary_points};
use outlier_lab::limit::{solve_extreme_scale, solve_extreme_scale_window};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::path::PathBuf;

/// Default bracket width for `alpha0`.
const DEFAULT_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum What {
    /// Minimum and maximum of the rate function (needs --gamma).
    Stationary,
    /// Width of outlier fluctuations (needs --gamma).
    Sigma,
    /// Bracket for the detuning where the sextic gains real roots (--tol).
    Alpha0,
    /// Coefficients and real roots of the sextic (needs --alpha).
    Q6Roots,
    /// Height where one eigenvalue is expected above (needs --n, --gamma; optional --window).
    ExtremeScale,
}

#[derive(Debug, Default, Args, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyzeArgs {
    #[arg(long, value_enum)]
    pub what: Option<What>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Bracket width for `alpha0`.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Half-width of the window |X| < W for `extreme-scale`.
    #[arg(long)]
    pub window: Option<f64>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

fn opt(v: Option<f64>) -> Value {
    v.map_or(Value::Null, |x| json!(x))
}

pub fn run(flags: AnalyzeArgs) -> CliResult<()> {
    let (a, mut params) = merge(&flags, flags.config.as_deref())?;
    let data = match a.what.ok_or_else(|| missing("what"))? {
        What::Stationary => {
            let s = stationary_points(a.gamma.ok_or_else(|| missing("gamma"))?);
            json!({ "y_star": opt(s.y_star), "y_double_star": opt(s.y_double_star) })
        }
        What::Sigma => {
            json!({ "sigma": fluctuation_sigma(a.gamma.ok_or_else(|| missing("gamma"))?)? })
        }
        What::Alpha0 => {
            let tol = a.tol.unwrap_or(DEFAULT_TOL);
            params.insert("tol".into(), json!(tol));
            let (lo, hi) = alpha0_bracket(tol)?;
            json!({ "lo": lo, "hi": hi, "midpoint": 0.5 * (lo + hi) })
        }
        What::Q6Roots => {
            let alpha = a.alpha.ok_or_else(|| missing("alpha"))?;
            let (r1, r2) = q6_asymptotic_roots(alpha);
            json!({
                "coefficients": q6_coefficients(alpha),
                "real_roots": q6_real_roots(alpha)?,
                "asymptotic_roots": [r1, r2],
            })
        }
        What::ExtremeScale => {
            let n = a.n.ok_or_else(|| missing("n"))?;
            let gamma = a.gamma.ok_or_else(|| missing("gamma"))?;
            let y = match a.window {
                Some(w) => solve_extreme_scale_window(n, gamma, w)?,
                None => solve_extreme_scale(n, gamma)?,
            };
            json!({ "y_e": y, "n_y_e": n as f64 * y })
        }
    };
    let manifest = Manifest::new("analyze", params, "-");
    emit(None, &json_text(&document(&manifest, data)))
}
