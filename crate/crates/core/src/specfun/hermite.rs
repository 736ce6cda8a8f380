use crate::error::{Error, Result};
use crate::logscaled::LogComplex;
use crate::specfun::RESCALE_LN;
use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;
use std::f64::consts::PI;

/// Orthonormal Hermite polynomials `p_0(w) … p_degree_max(w)` for the weight
/// `e^{-x^2}`.
#[derive(Debug, Clone)]
pub struct HermiteSeq {
    pub degree_max: usize,
    pub argument: Complex64,
    pub values: Vec<LogComplex>,
}

impl HermiteSeq {
    pub fn get(&self, k: usize) -> LogComplex {
        self.values[k]
    }
}

/// Runs `p_{k+1} = w √(2/(k+1)) p_k − √(k/(k+1)) p_{k−1}` from
/// `p_0 = π^{-1/4}`, carrying a shared exponent for the working pair.
pub fn hermite_orthonormal_seq(degree_max: usize, w: Complex64) -> Result<HermiteSeq> {
    if !(w.re.is_finite() && w.im.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Hermite argument must be finite, got {w}"
        )));
    }
    let p0 = PI.powf(-0.25);
    let mut values = Vec::with_capacity(degree_max + 1);
    values.push(LogComplex::from_value(Complex64::new(p0, 0.0)));

    let hi = RESCALE_LN.exp();
    let lo = (-RESCALE_LN).exp();
    let mut shift = 0.0;
    let mut prev = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(p0, 0.0);
    for k in 0..degree_max {
        let kf = k as f64;
        let next = w * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        let mut v = LogComplex::from_value(cur);
        v.log_magnitude += shift;
        values.push(v);

        let m = cur.norm().max(prev.norm());
        if m > hi || (m < lo && m > 0.0) {
            prev /= m;
            cur /= m;
            shift += m.ln();
        }
    }
    Ok(HermiteSeq {
        degree_max,
        argument: w,
        values,
    })
}

/// `π_m(z) = ∫ e^{-Nσ²/2} (z + iσ)^{N−m} dσ`, evaluated through the
/// orthonormal Hermite polynomial of degree `N − m` at `z √(N/2)`.
pub fn pi_exact(m: usize, n: usize, z: Complex64) -> Result<LogComplex> {
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "index m={m} exceeds N={n}"
        )));
    }
    let deg = n - m;
    let w = z * (n as f64 / 2.0).sqrt();
    let seq = hermite_orthonormal_seq(deg, w)?;
    let nf = n as f64;
    let ln_c = 0.5 * (2.0 * PI).ln()
        + 0.25 * PI.ln()
        + 0.5 * (ln_gamma(deg as f64 + 1.0) - (deg as f64 + 1.0) * nf.ln());
    Ok(LogComplex::from_ln(ln_c) * seq.get(deg))
}
