use crate::error::{Error, Result};
use crate::logscaled::{LogComplex, LogReal};
use num_complex::Complex64;
use std::f64::consts::PI;

/// `(√(Y²+4) − Y)/2` in the cancellation-free form `2/(√(Y²+4) + Y)`.
pub(crate) fn r_star(y: f64) -> f64 {
    2.0 / ((y * y + 4.0).sqrt() + y)
}

/// Saddle point `τ_* = (Y + √(Y²+4))/2 = 1/r_*`.
pub fn tau_star(y: f64) -> f64 {
    0.5 * (y + (y * y + 4.0).sqrt())
}

/// Which large-N form of `L_{N−k}^{(α)}(−NY²)` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LaguerreRegime {
    /// `Y < N^{-1/4}` picks `SmallY`, otherwise `Fixed`.
    Auto,
    /// `Y = O(1)`: leading term only.
    Fixed,
    /// `1/N ≪ Y ≪ 1`: leading term with the `1/(NY)` correction.
    SmallY,
}

pub fn laguerre_asymptotic(n: usize, k: usize, alpha: u32, y: f64) -> Result<LogReal> {
    laguerre_asymptotic_with(n, k, alpha, y, LaguerreRegime::Auto)
}

pub fn laguerre_asymptotic_with(
    n: usize,
    k: usize,
    alpha: u32,
    y: f64,
    regime: LaguerreRegime,
) -> Result<LogReal> {
    if n < 10 || k > n {
        return Err(Error::InvalidArgument(format!(
            "need N >= 10 and k <= N, got N={n}, k={k}"
        )));
    }
    if !(y > 0.0) || !y.is_finite() {
        return Err(Error::OutOfDomain(format!("need finite Y > 0, got {y}")));
    }
    let nf = n as f64;
    let a = alpha as f64;
    let r = r_star(y);
    let small = match regime {
        LaguerreRegime::Auto => y < nf.powf(-0.25),
        LaguerreRegime::Fixed => false,
        LaguerreRegime::SmallY => true,
    };
    let bracket = if small {
        1.0 - r * (a * a - 0.25) / (4.0 * y * nf)
    } else {
        1.0
    };
    if bracket <= 0.0 {
        return Err(Error::ModelInapplicable(format!(
            "NY = {} is too small for the asymptotic form",
            nf * y
        )));
    }
    let ln = nf * y * r - 0.5 * (2.0 * PI * nf).ln()
        + (-2.0 * (nf - k as f64) - a - 1.0) * r.ln()
        - (a + 0.5) * y.ln()
        - 0.25 * (y * y + 4.0).ln()
        + bracket.ln();
    Ok(LogReal::from_ln(ln))
}

/// `σ_+ = (iz + √(4 − z²))/2`.
pub fn sigma_plus(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    0.5 * (i * z + (4.0 - z * z).sqrt())
}

/// `σ_− = (i z̄ − √(4 − z̄²))/2`.
pub fn sigma_minus(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let zb = z.conj();
    0.5 * (i * zb - (4.0 - zb * zb).sqrt())
}

fn check_upper(n: usize, z: Complex64) -> Result<()> {
    if !(z.im > 0.0) || !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::OutOfDomain(format!(
            "need finite z with Im z > 0, got {z}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidArgument("N must be positive".into()));
    }
    Ok(())
}

fn pi_from_sigma(k: usize, n: usize, zz: Complex64, s: Complex64) -> LogComplex {
    let i = Complex64::i();
    let nf = n as f64;
    let l = (-i * s).ln();
    let ln = 0.5 * (2.0 * PI / nf).ln() - 0.5 * (1.0 + s * s).ln() + k as f64 * l
        - 0.5 * nf * (1.0 + i * zz * s + 2.0 * l);
    LogComplex::from_value(Complex64::from_polar(1.0, ln.im)) * LogComplex::from_ln(ln.re)
}

/// Large-N form of `π_k(z)` near the origin of the upper half plane.
pub fn hermite_asymptotic_pi(k: usize, n: usize, z: Complex64) -> Result<LogComplex> {
    check_upper(n, z)?;
    Ok(pi_from_sigma(k, n, z, sigma_plus(z)))
}

/// Large-N form of `π_k(z̄)`, built on `σ_−`.
pub fn hermite_asymptotic_pi_conj(k: usize, n: usize, z: Complex64) -> Result<LogComplex> {
    check_upper(n, z)?;
    Ok(pi_from_sigma(k, n, z.conj(), sigma_minus(z)))
}
