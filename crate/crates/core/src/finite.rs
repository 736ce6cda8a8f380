//! Exact finite-N mean densities: the joint density of eigenvalues in the
//! complex plane (through orthonormal Hermite polynomials) and the density of
//! imaginary parts (through Laguerre polynomials at `−NY²`).

use crate::error::{Error, Result};
use crate::logscaled::{combine_real, LogReal};
use crate::quad::{integrate, integrate_points, QuadOptions};
use crate::specfun::{hermite_orthonormal_seq, laguerre_neg, laguerre_neg_pair};
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FiniteDensityParams {
    pub n: usize,
    pub gamma: f64,
}

impl FiniteDensityParams {
    pub fn new(n: usize, gamma: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!("need n >= 3, got {n}")));
        }
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "gamma must be positive and finite, got {gamma}"
            )));
        }
        Ok(Self { n, gamma })
    }

    fn check_y(&self, y: f64) -> Result<()> {
        if y > 0.0 && y < self.gamma {
            Ok(())
        } else {
            Err(Error::OutOfDomain(format!(
                "Y must lie in (0, {}), got {y}",
                self.gamma
            )))
        }
    }

    /// `ln[(1/(Yγ)) (1−Y/γ)^{N−2} e^{−NY(γ−Y)}]`.
    fn ln_prefactor(&self, y: f64) -> f64 {
        let nf = self.n as f64;
        let g = self.gamma;
        -(y * g).ln() + (nf - 2.0) * (-y / g).ln_1p() - nf * y * (g - y)
    }
}

/// Three algebraically equal forms of the Laguerre combination `F_N(Y)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImagForm {
    F1,
    F2,
    F3,
}

/// `F_N(Y)` in the requested form.
pub fn laguerre_combination(p: FiniteDensityParams, y: f64, form: ImagForm) -> Result<LogReal> {
    let n = p.n;
    let nf = n as f64;
    let g = p.gamma;
    let d = g - y;
    let x = -nf * y * y;
    let w = (nf - 1.0) / nf;
    let (l1_nm2, l1_nm1) = laguerre_neg_pair(n - 1, 1, x)?;
    Ok(match form {
        ImagForm::F1 => {
            let l0_nm1 = laguerre_neg(n - 1, 0, x)?;
            let l2_nm2 = laguerre_neg(n - 2, 2, x)?;
            combine_real(&[
                (w * y, l1_nm1),
                (-w * d, l0_nm1),
                (y * (d * d + d / (nf * y)), l1_nm2),
                (-d * y * y, l2_nm2),
            ])
        }
        ImagForm::F2 => {
            let l0_nm1 = laguerre_neg(n - 1, 0, x)?;
            combine_real(&[
                (-2.0 * g, l0_nm1),
                (w * 3.0 * y + 2.0 * g / nf, l1_nm1),
                (-2.0 * y + y * d * d, l1_nm2),
            ])
        }
        ImagForm::F3 => combine_real(&[
            (w * (3.0 * y - 2.0 * g), l1_nm1),
            (2.0 * g - 2.0 * y + y * d * d, l1_nm2),
        ]),
    })
}

/// Mean density of imaginary parts `ρ_N^{(ℑ)}(Y)`, normalized to one.
pub fn rho_imag_exact(p: FiniteDensityParams, y: f64, form: ImagForm) -> Result<f64> {
    p.check_y(y)?;
    let f = laguerre_combination(p, y, form)?;
    Ok(f.to_value_shifted(p.ln_prefactor(y)))
}

/// Mean density `ρ_N(X, Y)` of eigenvalues `X + iY`, normalized to one.
pub fn rho2d_exact(p: FiniteDensityParams, x: f64, y: f64) -> Result<f64> {
    p.check_y(y)?;
    if !x.is_finite() {
        return Err(Error::InvalidArgument(format!("X must be finite, got {x}")));
    }
    let n = p.n;
    let nf = n as f64;
    let g = p.gamma;
    let d = g - y;
    let w = Complex64::new(x, y) * (nf / 2.0).sqrt();
    let seq = hermite_orthonormal_seq(n, w)?;
    let pn = seq.get(n);
    let pm = seq.get(n - 1);
    let a = pn * pm.conj();
    let ln_pn2 = 2.0 * pn.log_magnitude;
    let ln_pm2 = 2.0 * pm.log_magnitude;
    let top = a.log_magnitude.max(ln_pn2).max(ln_pm2);
    if top == f64::NEG_INFINITY {
        return Ok(0.0);
    }
    let av = a.to_value_shifted(-top);
    let pn2 = (ln_pn2 - top).exp();
    let pm2 = (ln_pm2 - top).exp();
    let bracket = av.im * (1.0 - 1.0 / nf + d * (g + 1.0 / (nf * y)))
        - pm2 * (y * d * d + d)
        - pn2 * d
        + av.re * x * d;
    let ln_pre = p.ln_prefactor(y) + 0.5 * (nf / 2.0).ln() - 0.5 * nf * x * x + top;
    Ok(bracket * ln_pre.exp())
}

/// Half-width in X beyond which the joint density is negligible.
const X_CUTOFF: f64 = 6.0;

/// `∫ ρ_N(X, Y) dX` by quadrature, using evenness in X.
pub fn rho_imag_from_2d(p: FiniteDensityParams, y: f64) -> Result<f64> {
    rho_imag_from_2d_with(p, y, QuadOptions::tol(1e-13, 1e-10))
}

pub fn rho_imag_from_2d_with(p: FiniteDensityParams, y: f64, opts: QuadOptions) -> Result<f64> {
    p.check_y(y)?;
    let f = |x: f64| rho2d_exact(p, x, y).unwrap_or(f64::NAN);
    let r = integrate_points(f, &[0.0, 1.0, 2.0, 3.0, X_CUTOFF], opts);
    if !r.value.is_finite() {
        return Err(Error::PrecisionLoss(format!(
            "X-integration at Y={y} did not produce a finite value"
        )));
    }
    Ok(2.0 * r.value)
}

/// Endpoint offset used when integrating over `(0, γ)`.
pub const ENDPOINT_EPS: f64 = 1e-12;

/// `∫_0^γ ρ_N^{(ℑ)}(Y) dY`.
pub fn imag_normalization(p: FiniteDensityParams, form: ImagForm) -> Result<f64> {
    let f = |y: f64| rho_imag_exact(p, y, form).unwrap_or(f64::NAN);
    let r = integrate(
        f,
        ENDPOINT_EPS,
        p.gamma - ENDPOINT_EPS,
        QuadOptions::tol(1e-9, 1e-12),
    );
    if !r.value.is_finite() {
        return Err(Error::PrecisionLoss(
            "normalization integral is not finite".into(),
        ));
    }
    Ok(r.value)
}

/// Imaginary-part density with a one-off normalization check.
///
/// If the integral over `(0, γ)` differs from one by more than `1e-3`, all
/// values are divided by it and `rescaled` is set.
#[derive(Debug, Clone, Copy)]
pub struct ImagDensity {
    pub params: FiniteDensityParams,
    pub form: ImagForm,
    pub mass: f64,
    pub rescaled: bool,
}

impl ImagDensity {
    pub fn new(params: FiniteDensityParams, form: ImagForm) -> Result<Self> {
        let mass = imag_normalization(params, form)?;
        Ok(Self {
            params,
            form,
            mass,
            rescaled: (mass - 1.0).abs() > 1e-3,
        })
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        let v = rho_imag_exact(self.params, y, self.form)?;
        Ok(if self.rescaled { v / self.mass } else { v })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(n: usize, g: f64) -> FiniteDensityParams {
        FiniteDensityParams::new(n, g).unwrap()
    }

    #[test]
    fn parameter_validation() {
        assert!(FiniteDensityParams::new(2, 1.0).is_err());
        assert!(FiniteDensityParams::new(5, 0.0).is_err());
        let p = params(5, 1.0);
        assert!(matches!(rho_imag_exact(p, 1.0, ImagForm::F3), Err(Error::OutOfDomain(_))));
        assert!(matches!(rho_imag_exact(p, 0.0, ImagForm::F3), Err(Error::OutOfDomain(_))));
        assert!(matches!(rho2d_exact(p, 0.0, -0.1), Err(Error::OutOfDomain(_))));
    }

    #[test]
    fn forms_agree() {
        let p = params(50, 2.0);
        let a = rho_imag_exact(p, 1.2, ImagForm::F1).unwrap();
        let b = rho_imag_exact(p, 1.2, ImagForm::F2).unwrap();
        let c = rho_imag_exact(p, 1.2, ImagForm::F3).unwrap();
        assert!(((a - b) / a).abs() <= 1e-11);
        assert!(((a - c) / a).abs() <= 1e-11);
        assert!(((b - c) / b).abs() <= 1e-11);
    }

    #[test]
    fn imag_density_normalized() {
        let m = imag_normalization(params(8, 1.5), ImagForm::F3).unwrap();
        assert!((m - 1.0).abs() <= 1e-6, "{m}");
        let d = ImagDensity::new(params(8, 1.5), ImagForm::F1).unwrap();
        assert!(!d.rescaled);
    }

    #[test]
    fn vanishes_at_top_edge() {
        let p = params(10, 1.0);
        let near = rho_imag_exact(p, 1.0 - 1e-9, ImagForm::F3).unwrap();
        assert!(near.abs() < 1e-50);
    }

    #[test]
    fn joint_density_even_in_x() {
        let p = params(10, 2.0);
        let a = rho2d_exact(p, 0.7, 0.4).unwrap();
        let b = rho2d_exact(p, -0.7, 0.4).unwrap();
        assert!(((a - b) / a).abs() <= 1e-10);
    }

    #[test]
    fn marginal_of_joint_density() {
        for &(n, g, y) in &[(6, 1.0, 0.3), (10, 2.0, 1.5)] {
            let p = params(n, g);
            let a = rho_imag_from_2d(p, y).unwrap();
            let b = rho_imag_exact(p, y, ImagForm::F3).unwrap();
            assert!(((a - b) / b).abs() <= 1e-6, "n={n}: {a} vs {b}");
        }
    }

    #[test]
    fn marginal_quadrature_is_refined() {
        let p = params(6, 1.0);
        let coarse = rho_imag_from_2d_with(p, 0.3, QuadOptions::tol(1e-9, 1e-9)).unwrap();
        let fine = rho_imag_from_2d_with(p, 0.3, QuadOptions::tol(1e-14, 1e-13)).unwrap();
        assert!((coarse - fine).abs() < 1e-8);
    }

    #[test]
    fn joint_density_normalized() {
        let p = params(6, 1.0);
        let outer = |y: f64| rho_imag_from_2d_with(p, y, QuadOptions::tol(1e-12, 1e-10)).unwrap();
        let r = integrate(outer, ENDPOINT_EPS, 1.0 - ENDPOINT_EPS, QuadOptions::tol(1e-9, 1e-10));
        assert!((r.value - 1.0).abs() <= 1e-6, "{}", r.value);
    }

    #[test]
    fn non_negative_on_grids() {
        for &n in &[5, 20, 50] {
            for &g in &[0.5, 1.0, 2.0] {
                let p = params(n, g);
                for i in 1..1000 {
                    let y = g * i as f64 / 1000.0;
                    let v = rho_imag_exact(p, y, ImagForm::F3).unwrap();
                    assert!(v >= -1e-12, "n={n} g={g} y={y}: {v}");
                }
            }
        }
    }

    #[test]
    fn large_n_stays_finite() {
        let p = params(5000, 2.0);
        let v = rho_imag_exact(p, 1.5, ImagForm::F3).unwrap();
        assert!(v.is_finite() && v > 0.0);
        let v = rho2d_exact(params(2000, 1.0), 0.1, 0.01).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn form_equivalence(n in 3usize..300, g in 0.2f64..4.0, frac in 0.02f64..0.98) {
            let p = params(n, g);
            let y = frac * g;
            let a = rho_imag_exact(p, y, ImagForm::F1).unwrap();
            let b = rho_imag_exact(p, y, ImagForm::F2).unwrap();
            let c = rho_imag_exact(p, y, ImagForm::F3).unwrap();
            // skip points where the density itself is at rounding level
            prop_assume!(a.abs() > 1e-250);
            let scale = a.abs().max(b.abs()).max(c.abs());
            prop_assert!((a - b).abs() <= 1e-10 * scale, "{} {} {}", a, b, c);
            prop_assert!((a - c).abs() <= 1e-10 * scale, "{} {} {}", a, b, c);
        }
    }
}
