//! Large-deviation form of the imaginary-part density at `Y = O(1)`:
//! `ρ_N(Y) ≈ N^{-1/2} Ψ_γ(Y) e^{−N Φ_γ(Y)}`, with the outlier density and its
//! Gaussian fluctuation law.

use crate::error::{Error, Result};
use std::f64::consts::PI;

pub use crate::specfun::tau_star;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LDParams {
    pub gamma: f64,
    pub n: usize,
}

impl LDParams {
    pub fn new(gamma: f64, n: usize) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        if n < 3 {
            return Err(Error::InvalidArgument(format!("need N >= 3, got {n}")));
        }
        Ok(Self { gamma, n })
    }

    fn check_open(&self, y: f64) -> Result<()> {
        if y > 0.0 && y < self.gamma {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!(
                "Y must lie in (0, {}), got {y}",
                self.gamma
            )))
        }
    }
}

/// `r_*(Y) = (√(Y²+4) − Y)/2`, evaluated as `2/(√(Y²+4) + Y)`.
pub fn r_star(y: f64) -> f64 {
    crate::specfun::tau_star(y).recip()
}

/// `Φ_γ(Y) = Y(γ−Y) − ln((γ−Y)/γ) − Y r_* + 2 ln r_*` on `[0, γ)`.
pub fn rate_phi(p: LDParams, y: f64) -> Result<f64> {
    if !(y >= 0.0 && y < p.gamma) {
        return Err(Error::OutOfDomain(format!(
            "Y must lie in [0, {}), got {y}",
            p.gamma
        )));
    }
    let g = p.gamma;
    let r = r_star(y);
    Ok(y * (g - y) - (-y / g).ln_1p() - y * r + 2.0 * r.ln())
}

/// `Ψ_γ(Y) = (2π)^{-1/2} γ/(γ−Y)² (1 − r_*(γ−Y))² / (Y^{3/2} (Y²+4)^{1/4})`.
pub fn prefactor_psi(p: LDParams, y: f64) -> Result<f64> {
    p.check_open(y)?;
    let g = p.gamma;
    let d = g - y;
    let r = r_star(y);
    let q = 1.0 - r * d;
    Ok(g / (d * d) * q * q / ((2.0 * PI).sqrt() * y.powf(1.5) * (y * y + 4.0).powf(0.25)))
}

/// The same prefactor before simplification with `1 − r_*² = Y r_*`.
pub fn prefactor_psi_unsimplified(p: LDParams, y: f64) -> Result<f64> {
    p.check_open(y)?;
    let g = p.gamma;
    let d = g - y;
    let r = r_star(y);
    let num = 3.0 * y - 2.0 * g + r * r * d * (2.0 + y * d);
    Ok(g / (d * d) * num / ((2.0 * PI).sqrt() * y.powf(2.5) * (y * y + 4.0).powf(0.25)))
}

/// `N^{-1/2} Ψ_γ(Y) e^{−N Φ_γ(Y)}`.
pub fn ld_density(p: LDParams, y: f64) -> Result<f64> {
    let psi = prefactor_psi(p, y)?;
    let phi = rate_phi(p, y)?;
    let nf = p.n as f64;
    Ok(psi * (-nf * phi).exp() / nf.sqrt())
}

/// A value together with a flag telling whether the approximation is in its
/// intended range.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Flagged {
    pub value: f64,
    pub valid: bool,
}

/// `p_N(Y) = √N Ψ_γ(Y) e^{−N Φ_γ(Y)}`, the approximate density of the
/// largest imaginary part. Points below `Y_**` are flagged as invalid.
pub fn outlier_pdf(p: LDParams, y: f64) -> Result<Flagged> {
    if p.gamma <= 1.0 {
        return Err(Error::ModelInapplicable(format!(
            "there is no outlier for gamma <= 1 (gamma = {})",
            p.gamma
        )));
    }
    let v = ld_density(p, y)? * p.n as f64;
    let y2 = stationary_points(p.gamma).y_double_star.unwrap_or(0.0);
    Ok(Flagged {
        value: v,
        valid: y >= y2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoints {
    /// Local minimum of `Φ_γ`, the typical outlier height `γ − 1/γ`.
    pub y_star: Option<f64>,
    /// Local maximum of `Φ_γ`, the boundary between bulk and outlier.
    pub y_double_star: Option<f64>,
}

pub fn stationary_points(gamma: f64) -> StationaryPoints {
    if gamma > 1.0 {
        let s = gamma - 1.0 / gamma;
        StationaryPoints {
            y_star: Some(s),
            y_double_star: Some(2.0 * s / (3.0 + (1.0 + 8.0 / (gamma * gamma)).sqrt())),
        }
    } else {
        StationaryPoints {
            y_star: None,
            y_double_star: None,
        }
    }
}

/// `σ = √((γ²+1) / (γ²(γ²−1)))`, the scale of outlier fluctuations in units
/// of `N^{-1/2}`.
pub fn fluctuation_sigma(gamma: f64) -> Result<f64> {
    if !(gamma > 1.0) || !gamma.is_finite() {
        return Err(Error::ModelInapplicable(format!(
            "outlier fluctuations need gamma > 1, got {gamma}"
        )));
    }
    let g2 = gamma * gamma;
    Ok(((g2 + 1.0) / (g2 * (g2 - 1.0))).sqrt())
}

/// Rescaled density at `Y = y N^{−1+ε}` for `0 < ε < 1`:
/// `N^{−ε/2} (2√π)^{-1} ((1−γ)²/γ) y^{−3/2} e^{−N^ε y (1−γ)²/γ}`.
pub fn crossover_density(n: usize, gamma: f64, eps: f64, y: f64) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "crossover exponent must lie in (0, 1), got {eps}"
        )));
    }
    if !(y > 0.0) {
        return Err(Error::OutOfDomain(format!("need y > 0, got {y}")));
    }
    let nf = n as f64;
    let d = (1.0 - gamma).powi(2) / gamma;
    Ok(nf.powf(-eps / 2.0) / (2.0 * PI.sqrt()) * d * y.powf(-1.5) * (-nf.powf(eps) * y * d).exp())
}
