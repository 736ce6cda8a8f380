//! Critical regime `γ = 1 + α N^{-1/3}`, heights `Y = m N^{-1/3}` and
//! positions `X = q N^{-1/3}`.

use crate::error::{Error, Result};
use crate::linalg::polynomial_roots;
use crate::quad::{integrate_points, QuadOptions};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalParams {
    pub alpha: f64,
    pub m: f64,
    pub q: f64,
}

fn check_m(m: f64) -> Result<()> {
    if m > 0.0 && m.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("need finite m > 0, got {m}")))
    }
}

/// `ln p̃_α(m)`.
pub fn critical_imag_log_density(alpha: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    let b = 1.5 * m - alpha;
    let e = alpha - 0.5 * m;
    Ok(-(2.0 * PI.sqrt()).ln() + (1.5 / m + b * b).ln() - 1.5 * m.ln() - m * e * e)
}

/// `p̃_α(m) = (2√π)^{-1} (3/(2m) + (3m/2 − α)²) m^{-3/2} e^{−m(α − m/2)²}`.
pub fn critical_imag_density(alpha: f64, m: f64) -> Result<f64> {
    Ok(critical_imag_log_density(alpha, m)?.exp())
}

/// `p̃(q, m) = (4πm)^{-1} [1/m + q²/4 + (3m/2 − α)²] e^{−m[q²/4 + (α − m/2)²]}`.
pub fn critical_2d_density(alpha: f64, q: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    let b = 1.5 * m - alpha;
    let e = alpha - 0.5 * m;
    let q2 = 0.25 * q * q;
    Ok((1.0 / m + q2 + b * b) * (-m * (q2 + e * e)).exp() / (4.0 * PI * m))
}

/// Large-deviation form applied in the critical window:
/// `(2√π)^{-1} (3m/2 − α)² m^{-3/2} e^{−m(α − m/2)²}`.
pub fn critical_ld_form(alpha: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    let b = 1.5 * m - alpha;
    let e = alpha - 0.5 * m;
    Ok(b * b * m.powf(-1.5) * (-m * e * e).exp() / (2.0 * PI.sqrt()))
}

/// Small-`m` form from the Bessel tail:
/// `(2√π)^{-1} (3/(2m) + α²) m^{-3/2} e^{−mα²}`.
pub fn critical_tail_form(alpha: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    Ok((1.5 / m + alpha * alpha) * m.powf(-1.5) * (-m * alpha * alpha).exp() / (2.0 * PI.sqrt()))
}

/// Coefficients of `Q₆(α, m)` in ascending powers of `m`.
pub fn q6_coefficients(alpha: f64) -> [f64; 7] {
    let a = alpha;
    let a2 = a * a;
    [
        -60.0,
        -48.0 * a2,
        72.0 * a - 16.0 * a2 * a2,
        80.0 * a2 * a,
        -144.0 * a2,
        108.0 * a,
        -27.0,
    ]
}

/// `Q₆(α, m)`, whose sign is the sign of `∂p̃_α/∂m`.
pub fn q6(alpha: f64, m: f64) -> f64 {
    q6_coefficients(alpha)
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * m + c)
}

/// Positive real roots of `Q₆(α, ·)`, ascending. A companion-matrix
/// eigenvalue counts as real when its imaginary part is below
/// `1e-9 (1 + |Re|)`.
pub fn q6_real_roots(alpha: f64) -> Result<Vec<f64>> {
    let roots = polynomial_roots(&q6_coefficients(alpha))?;
    let mut out: Vec<f64> = roots
        .iter()
        .filter(|z| z.im.abs() < 1e-9 * (1.0 + z.re.abs()) && z.re > 0.0)
        .map(|z| z.re)
        .collect();
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Bracket `(lo, hi)` around the smallest `α` at which `Q₆` acquires positive
/// real roots, by bisection on `[0, 1]`. Bisection runs to half the requested
/// width so the dyadic grid cannot pin the threshold to a bracket edge.
pub fn alpha0_bracket(tolerance: f64) -> Result<(f64, f64)> {
    if !(tolerance >= 1e-6) {
        return Err(Error::InvalidArgument(format!(
            "tolerance must be at least 1e-6, got {tolerance}"
        )));
    }
    let has_roots = |a: f64| q6_real_roots(a).map(|r| !r.is_empty());
    let (mut lo, mut hi) = (0.0, 1.0);
    if has_roots(lo)? || !has_roots(hi)? {
        return Err(Error::PrecisionLoss(
            "the root-existence predicate does not change sign on [0, 1]".into(),
        ));
    }
    while hi - lo > 0.5 * tolerance {
        let mid = 0.5 * (lo + hi);
        if has_roots(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok((lo, hi))
}

/// Leading-order large-`α` roots `(m₁, m₂)`:
/// `m₁ = 2α(1 + 3/(8α³))`, `m₂ = (2/3)α(1 + 15/(8α³))`.
pub fn q6_asymptotic_roots(alpha: f64) -> (f64, f64) {
    let a3 = alpha.powi(3);
    (
        2.0 * alpha * (1.0 + 3.0 / (8.0 * a3)),
        2.0 / 3.0 * alpha * (1.0 + 15.0 / (8.0 * a3)),
    )
}

/// `Ñ_α(m) = ∫_m^∞ p̃_α(m') dm'`, truncated at `max(4|α| + 20, m + 20)`.
pub fn expected_count_above(alpha: f64, m: f64) -> Result<f64> {
    check_m(m)?;
    let upper = (4.0 * alpha.abs() + 20.0).max(m + 20.0);
    let f = |t: f64| critical_imag_density(alpha, t).unwrap_or(0.0);
    let mut pts = vec![m];
    for p in [2.0 * m, 1.0, 2.0 * alpha, 4.0, 10.0] {
        if p > m && p < upper && !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts.push(upper);
    pts.sort_by(f64::total_cmp);
    let r = integrate_points(f, &pts, QuadOptions::tol(1e-14, 1e-12));
    if !r.converged {
        return Err(Error::PrecisionLoss(format!(
            "count integral did not converge at alpha={alpha}, m={m}"
        )));
    }
    Ok(r.value)
}
