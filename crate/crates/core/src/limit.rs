//! Large-N limits: the semicircle, the scaled bulk density near the real
//! axis, the limiting density of scaled imaginary parts, counting functions
//! and the scale of typical extreme imaginary parts.

use crate::error::{Error, Result};
use crate::quad::{integrate_points, QuadOptions};
use crate::specfun::bessel_i_scaled;
use statrs::function::erf::erf;
use std::f64::consts::PI;

/// `ν(X) = √(4 − X²)/(2π)` on `[−2, 2]`.
pub fn semicircle(x: f64) -> f64 {
    if x.abs() >= 2.0 {
        0.0
    } else {
        (4.0 - x * x).sqrt() / (2.0 * PI)
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "gamma must be positive and finite, got {gamma}"
        )))
    }
}

fn check_y(y: f64) -> Result<()> {
    if y > 0.0 && y.is_finite() {
        Ok(())
    } else {
        Err(Error::OutOfDomain(format!("need finite y > 0, got {y}")))
    }
}

/// Point `(X, y)` of the bulk with `y` measured in units of `1/(2πν(X)N)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BulkPoint {
    pub x: f64,
    pub y: f64,
    pub gamma: f64,
}

/// `g(X) = (γ + 1/γ) / (2πν(X))`.
pub fn bulk_rate(x: f64, gamma: f64) -> f64 {
    (gamma + 1.0 / gamma) / (2.0 * PI * semicircle(x))
}

/// `−d/dy [e^{−yg} sinh(y)/y] = e^{−yg} (g f − f′)` with `f = sinh(y)/y`.
pub fn decay_profile(g: f64, y: f64) -> f64 {
    if y < 1.0 {
        // f and f′ from their Taylor series
        let y2 = y * y;
        let mut f = 1.0;
        let mut fp = 0.0;
        let mut pow = 1.0; // y^{2k}
        let mut fact = 1.0; // (2k+1)!
        for k in 1..=12 {
            let kf = k as f64;
            pow *= y2;
            fact *= (2.0 * kf) * (2.0 * kf + 1.0);
            f += pow / fact;
            fp += 2.0 * kf * pow / (y * fact);
        }
        (-y * g).exp() * (g * f - fp)
    } else {
        let a = (y * (1.0 - g)).exp(); // e^{−yg} e^{y}
        let b = (-y * (1.0 + g)).exp(); // e^{−yg} e^{−y}
        let sinh_e = 0.5 * (a - b);
        let cosh_e = 0.5 * (a + b);
        let f_e = sinh_e / y;
        let fp_e = (y * cosh_e - sinh_e) / (y * y);
        g * f_e - fp_e
    }
}

pub fn bulk_scaled_density(pt: BulkPoint) -> Result<f64> {
    check_gamma(pt.gamma)?;
    check_y(pt.y)?;
    if !(pt.x.abs() < 2.0) {
        return Err(Error::OutOfDomain(format!(
            "bulk point needs |X| < 2, got {}",
            pt.x
        )));
    }
    Ok(decay_profile(bulk_rate(pt.x, pt.gamma), pt.y))
}

/// Limiting density of `y = NY`:
/// `e^{−yc}/y · [c I₁(2y) − 2 I₂(2y)]`, `c = γ + 1/γ`.
pub fn limit_imag_density(y: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_y(y)?;
    let c = gamma + 1.0 / gamma;
    let s1 = bessel_i_scaled(1, 2.0 * y)?;
    let s2 = bessel_i_scaled(2, 2.0 * y)?;
    Ok((y * (2.0 - c)).exp() / y * (c * s1 - 2.0 * s2))
}

/// Fraction of eigenvalues with `NY` above `y`: `e^{−yc} I₁(2y)/y`.
pub fn limit_count_fraction(y: f64, gamma: f64) -> Result<f64> {
    check_gamma(gamma)?;
    check_y(y)?;
    let c = gamma + 1.0 / gamma;
    Ok((y * (2.0 - c)).exp() * bessel_i_scaled(1, 2.0 * y)? / y)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountForm {
    /// `e^{−NYc} I₁(2NY)/Y`.
    Bessel,
    /// Large-`NY` form `e^{−NY(1−γ)²/γ} / (2√(πN) Y^{3/2})`.
    Asymptotic,
}

/// Mean number of eigenvalues with imaginary part above `Y`.
pub fn expected_count(n: usize, y: f64, gamma: f64, form: CountForm) -> Result<f64> {
    check_gamma(gamma)?;
    check_y(y)?;
    let nf = n as f64;
    Ok(match form {
        CountForm::Bessel => nf * limit_count_fraction(nf * y, gamma)?,
        CountForm::Asymptotic => {
            let d = 1.0 - gamma;
            (-nf * y * d * d / gamma).exp() / (2.0 * (PI * nf).sqrt() * y.powf(1.5))
        }
    })
}

fn check_window(w: f64) -> Result<()> {
    if w > 0.0 && w <= 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "window half-width must lie in (0, 2], got {w}"
        )))
    }
}

/// Mean number of eigenvalues with `|X| < W` and imaginary part above `Y`:
/// `e^{−NYc}/(4πY) · [T_W(NY) − T_W(−NY)]`, `T_W(u) = 2∫_0^W e^{u√(4−X²)} dX`.
pub fn window_count(n: usize, y: f64, gamma: f64, w: f64) -> Result<f64> {
    check_window(w)?;
    check_gamma(gamma)?;
    check_y(y)?;
    let u = n as f64 * y;
    let c = gamma + 1.0 / gamma;
    let theta_max = (0.5 * w).asin();
    // X = 2 sin θ; the exponentials are combined with e^{−uc} before evaluation
    let f = |t: f64| {
        let ct = t.cos();
        let plus = (u * (2.0 * ct - c)).exp();
        let minus = (-u * (2.0 * ct + c)).exp();
        4.0 * ct * (plus - minus)
    };
    let mut pts = vec![0.0];
    for k in [1.0, 4.0, 16.0] {
        let t = k / u.sqrt();
        if t < theta_max {
            pts.push(t);
        }
    }
    pts.push(theta_max);
    let r = integrate_points(f, &pts, QuadOptions::tol(0.0, 1e-12));
    Ok(r.value / (4.0 * PI * y))
}

/// Gaussian-window approximation for `NY ≫ 1`:
/// `e^{−NY(1−γ)²/γ} / (2πY^{3/2}) √(2/N) ∫_0^{W√(NY/2)} e^{−t²/2} dt`.
pub fn window_count_gaussian(n: usize, y: f64, gamma: f64, w: f64) -> Result<f64> {
    check_window(w)?;
    check_gamma(gamma)?;
    check_y(y)?;
    let nf = n as f64;
    let d = 1.0 - gamma;
    let t_int = (PI / 2.0).sqrt() * erf(0.5 * w * (nf * y).sqrt());
    Ok((-nf * y * d * d / gamma).exp() / (2.0 * PI * y.powf(1.5)) * (2.0 / nf).sqrt() * t_int)
}

/// Root of a decreasing `count(Y) = 1` on `[1e-9, γ]` by geometric bisection.
fn bisect_unit_level(gamma: f64, count: impl Fn(f64) -> Result<f64>) -> Result<f64> {
    let mut lo = 1e-9;
    let mut hi = gamma;
    if count(lo)? < 1.0 || count(hi)? > 1.0 {
        return Err(Error::ModelInapplicable(
            "the unit level is not bracketed by [1e-9, gamma]".into(),
        ));
    }
    for _ in 0..200 {
        if (hi - lo) <= 1e-12 * hi {
            break;
        }
        let mid = (lo * hi).sqrt();
        if count(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo * hi).sqrt())
}

/// `Y_e` with `expected_count(N, Y_e, γ) = 1`.
pub fn solve_extreme_scale(n: usize, gamma: f64) -> Result<f64> {
    if n < 10 {
        return Err(Error::InvalidArgument(format!("need N >= 10, got {n}")));
    }
    check_gamma(gamma)?;
    bisect_unit_level(gamma, |y| expected_count(n, y, gamma, CountForm::Bessel))
}

/// `Y_e` with `window_count(N, Y_e, γ, W) = 1`.
pub fn solve_extreme_scale_window(n: usize, gamma: f64, w: f64) -> Result<f64> {
    if n < 10 {
        return Err(Error::InvalidArgument(format!("need N >= 10, got {n}")));
    }
    check_gamma(gamma)?;
    check_window(w)?;
    bisect_unit_level(gamma, |y| window_count(n, y, gamma, w))
}
