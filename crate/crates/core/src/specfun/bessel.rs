use crate::error::{Error, Result};
use crate::logscaled::LogReal;
use std::f64::consts::PI;

/// Below this argument the power series is used, above it the asymptotic
/// expansion.
pub const BESSEL_SWITCH: f64 = 30.0;

const ASYMPTOTIC_TERMS: usize = 10;

fn check(order: u32, z: f64) -> Result<()> {
    if order > 2 {
        return Err(Error::InvalidArgument(format!(
            "Bessel order must be 0, 1 or 2, got {order}"
        )));
    }
    if !z.is_finite() || z < 0.0 {
        return Err(Error::InvalidArgument(format!(
            "Bessel argument must be finite and non-negative, got {z}"
        )));
    }
    Ok(())
}

/// Modified Bessel function `I_order(z)`.
pub fn bessel_i(order: u32, z: f64) -> Result<LogReal> {
    if z < BESSEL_SWITCH {
        bessel_i_series(order, z)
    } else {
        bessel_i_asymptotic(order, z)
    }
}

/// `e^{-z} I_order(z)`.
pub fn bessel_i_scaled(order: u32, z: f64) -> Result<f64> {
    Ok(bessel_i(order, z)?.to_value_shifted(-z))
}

/// Power series `Σ (z/2)^{2k+ν} / (k! (k+ν)!)`, summed relative to its first
/// term.
pub fn bessel_i_series(order: u32, z: f64) -> Result<LogReal> {
    check(order, z)?;
    let nu = order as f64;
    if z == 0.0 {
        return Ok(if order == 0 {
            LogReal::one()
        } else {
            LogReal::zero()
        });
    }
    let q = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut k = 0.0;
    loop {
        term *= q / ((k + 1.0) * (k + 1.0 + nu));
        sum += term;
        k += 1.0;
        if term < 1e-17 * sum {
            break;
        }
    }
    let ln_fact_nu = [0.0, 0.0, 2f64.ln()][order as usize];
    Ok(LogReal::from_ln(nu * (0.5 * z).ln() - ln_fact_nu + sum.ln()))
}

/// Large-argument expansion `e^z/√(2πz) Σ_p (−1)^p a_p(ν)/z^p` with
/// `a_p = Π_{j≤p} (4ν² − (2j−1)²) / (p! 8^p)`.
pub fn bessel_i_asymptotic(order: u32, z: f64) -> Result<LogReal> {
    check(order, z)?;
    if z == 0.0 {
        return Err(Error::OutOfDomain(
            "asymptotic Bessel expansion needs z > 0".into(),
        ));
    }
    let mu = 4.0 * (order as f64).powi(2);
    let mut term = 1.0;
    let mut sum = 1.0;
    for p in 1..ASYMPTOTIC_TERMS {
        let pf = p as f64;
        let odd = 2.0 * pf - 1.0;
        term *= -(mu - odd * odd) / (8.0 * pf * z);
        sum += term;
    }
    Ok(LogReal::from_ln(z - 0.5 * (2.0 * PI * z).ln() + sum.ln()))
}
