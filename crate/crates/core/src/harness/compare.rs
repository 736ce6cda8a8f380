use super::config::Observable;
use super::stats::{EnsembleStats, Histogram};
use crate::error::{Error, Result};
use crate::model::ModelCurve;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub model: String,
    /// Bins inside the model support that entered the comparison.
    pub bins_compared: usize,
    /// All samples in the histogram, inside or outside the bins.
    pub samples: u64,
    /// Samples in the compared bins.
    pub window_samples: u64,
    /// Largest gap between the empirical and model CDFs at the bin edges,
    /// both conditioned on the compared window.
    pub sup_cdf: f64,
    /// `Σ |d̂_i − d_i| w_i` with the histogram scaled to the model mass.
    pub l1: f64,
    /// `(c_i − S q_i)/√(S q_i (1 − q_i))` with `q_i` the model probability of
    /// bin `i` and `S` the total sample count. NaN where `q_i = 0`.
    pub z_scores: Vec<f64>,
    pub max_abs_z: f64,
    /// 99% Dvoretzky-Kiefer-Wolfowitz band for `window_samples` draws.
    pub dkw_99: f64,
}

/// `√(ln(2/α) / (2n))` at `α = 0.01`.
pub fn dkw_bound(samples: u64) -> f64 {
    ((2.0f64 / 0.01).ln() / (2.0 * samples.max(1) as f64)).sqrt()
}

/// Compares a histogram with a model density. The bins used are those lying
/// inside the model support.
pub fn compare_histogram(h: &Histogram, model: &ModelCurve) -> Result<ComparisonReport> {
    model.validate()?;
    let samples = h.total();
    if samples == 0 {
        return Err(Error::InvalidArgument("histogram is empty".into()));
    }
    let edges = h.bins.edges();
    let (lo, hi) = model.support();
    let tol = 1e-12 * (hi - lo);
    let first = edges.iter().position(|&e| e >= lo - tol);
    let last = edges.iter().rposition(|&e| e <= hi + tol);
    let (first, last) = match (first, last) {
        (Some(a), Some(b)) if b > a => (a, b),
        _ => {
            return Err(Error::InvalidArgument(
                "model support does not cover any histogram bin".into(),
            ))
        }
    };
    let masses = model.bin_masses(&edges[first..=last])?;
    let counts = &h.counts[first..last];
    let window_samples: u64 = counts.iter().sum();
    if window_samples == 0 {
        return Err(Error::InvalidArgument("no samples inside the model support".into()));
    }
    let s = samples as f64;
    let model_window: f64 = masses.iter().sum();

    let mut l1 = 0.0;
    let mut sup_cdf: f64 = 0.0;
    let (mut ce, mut cm) = (0.0, 0.0);
    let mut z_scores = Vec::with_capacity(counts.len());
    for (&c, &m) in counts.iter().zip(&masses) {
        let c = c as f64;
        l1 += (c / s * model.mass - m).abs();
        ce += c / window_samples as f64;
        cm += m / model_window;
        sup_cdf = sup_cdf.max((ce - cm).abs());
        let q = m / model.mass;
        z_scores.push(if q > 0.0 && q < 1.0 {
            (c - s * q) / (s * q * (1.0 - q)).sqrt()
        } else {
            f64::NAN
        });
    }
    let max_abs_z = z_scores.iter().filter(|z| z.is_finite()).fold(0.0f64, |a, z| a.max(z.abs()));
    Ok(ComparisonReport {
        model: model.model.clone(),
        bins_compared: counts.len(),
        samples,
        window_samples,
        sup_cdf,
        l1,
        z_scores,
        max_abs_z,
        dkw_99: dkw_bound(window_samples),
    })
}

/// Compares the histogram of `observable` in a run with a model density.
pub fn compare(stats: &EnsembleStats, observable: Observable, model: &ModelCurve) -> Result<ComparisonReport> {
    let h = match observable {
        Observable::ImagHist => stats.imag_hist.as_ref(),
        Observable::Ymax => stats.ymax_hist.as_ref(),
        _ => None,
    }
    .ok_or_else(|| {
        Error::InvalidArgument(format!("run has no histogram for `{}`", observable.name()))
    })?;
    compare_histogram(h, model)
}
