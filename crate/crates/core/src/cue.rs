//! Subunitary ensemble `J = U diag(√(1−T), 1, …, 1)` with `U` Haar on `U(n)`.

use crate::error::{Error, Result};
use crate::limit::decay_profile;
use crate::linalg::ComplexMatrix;
use crate::rmt::{sample_haar_unitary, spectrum_of, Spectrum, UnitaryMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CueParams {
    pub n: usize,
    pub t_coupling: f64,
    /// Critical parameter with `T = 1 − t/n`, when the run is in that scaling.
    pub t_critical: Option<f64>,
}

impl CueParams {
    pub fn new(n: usize, t_coupling: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        check_coupling(t_coupling)?;
        Ok(Self {
            n,
            t_coupling,
            t_critical: None,
        })
    }

    /// `T = 1 − t/n`.
    pub fn critical(n: usize, t: f64) -> Result<Self> {
        if !(t > 0.0) || t > n as f64 {
            return Err(Error::InvalidArgument(format!("need 0 < t <= n, got t={t}")));
        }
        let mut p = Self::new(n, 1.0 - t / n as f64)?;
        p.t_critical = Some(t);
        Ok(p)
    }
}

fn check_coupling(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("T must lie in [0, 1], got {t}")))
    }
}

/// `U diag(√(1−T), 1, …, 1)`: the first column of `U` scaled by `√(1−T)`.
pub fn build_subunitary(u: &UnitaryMatrix, t_coupling: f64) -> Result<ComplexMatrix> {
    check_coupling(t_coupling)?;
    let s = (1.0 - t_coupling).sqrt();
    let mut j = u.matrix().clone();
    for i in 0..j.n() {
        j[(i, 0)] *= s;
    }
    Ok(j)
}

/// Spectrum of one subunitary sample drawn from `seed`.
pub fn sample_spectrum(p: CueParams, seed: u64) -> Result<Spectrum> {
    let u = sample_haar_unitary(p.n, seed)?;
    let j = build_subunitary(&u, p.t_coupling)?;
    spectrum_of(&j, seed)
}

/// `−d/dy [e^{−gy} sinh(y)/y]` with `g = 2/T − 1`: limiting density of
/// `y = n(1 − |z|)`.
pub fn radial_density_limit(y: f64, t_coupling: f64) -> Result<f64> {
    check_coupling(t_coupling)?;
    if t_coupling == 0.0 {
        return Err(Error::ModelInapplicable(
            "at T = 0 every eigenvalue lies on the unit circle".into(),
        ));
    }
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::OutOfDomain(format!("need finite y > 0, got {y}")));
    }
    Ok(decay_profile(2.0 / t_coupling - 1.0, y))
}

/// Outcome of summing the `x_min` series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XminSeries {
    pub value: f64,
    /// Terms actually added.
    pub terms: usize,
    /// Rounding-error bound on the sum.
    pub error_bound: f64,
    /// Set when `1 − value` fell below the rounding-error bound (or the terms
    /// grew past `XMIN_PEAK_LIMIT`) and the value was clamped to 1.
    pub clamped: bool,
}

/// Largest term magnitude tolerated before the alternating sum is treated as
/// ill-conditioned. Past it the survival probability is far below rounding.
pub const XMIN_PEAK_LIMIT: f64 = 1e6;
const XMIN_MAX_TERMS: usize = 100_000;

/// `Pr{X ≤ x} = Σ_{n≥1} (−1)^{n+1} x^{n(n−1)} / Π_{k≤n}(1 − x^{2k}) · e^{t(1 − x^{−2n})}`.
pub fn xmin_cdf_series(x: f64, t: f64) -> Result<f64> {
    Ok(xmin_cdf_series_detailed(x, t)?.value)
}

/// Terms are formed in log space and summed with Neumaier compensation. Term
/// magnitudes are log-concave in `n`, so summation stops at the first term
/// below `1e-16` once they are decreasing.
pub fn xmin_cdf_series_detailed(x: f64, t: f64) -> Result<XminSeries> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfDomain(format!("need 0 < x < 1, got {x}")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("need finite t > 0, got {t}")));
    }
    let lx = x.ln();
    let ln_peak = XMIN_PEAK_LIMIT.ln();
    let ln_stop = 1e-16f64.ln();
    let clamp_one = |terms, error_bound| XminSeries {
        value: 1.0,
        terms,
        error_bound,
        clamped: true,
    };
    let mut ln_prod = 0.0;
    let mut ln_prod_abs = 0.0;
    let mut prev = f64::INFINITY;
    let (mut sum, mut comp, mut err) = (0.0f64, 0.0f64, 0.0f64);
    for n in 1..=XMIN_MAX_TERMS {
        let nf = n as f64;
        ln_prod += (-(2.0 * nf * lx).exp()).ln_1p();
        ln_prod_abs += ln_prod.abs().max(1.0);
        let a = nf * (nf - 1.0) * lx;
        let c = t * (-2.0 * nf * lx).exp_m1();
        let ln_term = a - ln_prod - c;
        if ln_term > ln_peak {
            return Ok(clamp_one(n - 1, f64::INFINITY));
        }
        let mag = ln_term.exp();
        // absolute error of ln_term carries over as relative error of the term
        err += mag * f64::EPSILON * (4.0 + a.abs() + ln_prod_abs + c.abs());
        let term = if n % 2 == 1 { mag } else { -mag };
        let s = sum + term;
        comp += if sum.abs() >= term.abs() {
            (sum - s) + term
        } else {
            (term - s) + sum
        };
        sum = s;
        if n >= 2 && ln_term < prev && ln_term < ln_stop {
            let value = sum + comp;
            if 1.0 - value <= err {
                return Ok(clamp_one(n, err));
            }
            return Ok(XminSeries {
                value: value.clamp(0.0, 1.0),
                terms: n,
                error_bound: err,
                clamped: false,
            });
        }
        prev = ln_term;
    }
    Err(Error::SolverFailure {
        iterations: XMIN_MAX_TERMS,
    })
}

/// `|Pr{2t(1−X) − log t + log log t < y} − e^{−e^{−y}}|`.
pub fn gumbel_limit_check(t: f64, y: f64) -> Result<f64> {
    if !(t >= 10.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("need finite t >= 10, got {t}")));
    }
    let x = 1.0 - (y + t.ln() - t.ln().ln()) / (2.0 * t);
    let survival = 1.0 - xmin_cdf_series(x, t)?;
    Ok((survival - (-(-y).exp()).exp()).abs())
}
