//! Values stored as a unit factor times `exp(log_magnitude)`.
//!
//! Hermite and Laguerre polynomials of degree in the thousands, and Bessel
//! functions of large argument, overflow `f64` long before the densities
//! built from them do. Every such quantity travels as a [`LogScaled`] and is
//! only turned back into a plain number after the exponents have cancelled.

use num_complex::Complex64;
use std::ops::{Div, Mul};

/// The unit part of a [`LogScaled`] value: a sign for reals, a phase for
/// complex numbers.
pub trait UnitFactor: Copy + PartialEq + std::fmt::Debug {
    type Value: Copy;

    fn one() -> Self;
    fn mul(self, other: Self) -> Self;
    fn div(self, other: Self) -> Self;
    /// Split a value into `(factor, |value|)`.
    fn split(v: Self::Value) -> (Self, f64);
    fn scale(self, magnitude: f64) -> Self::Value;
}

/// Sign of a real number, stored as `+1.0` or `-1.0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sign(f64);

impl Sign {
    pub const PLUS: Sign = Sign(1.0);
    pub const MINUS: Sign = Sign(-1.0);

    pub fn value(self) -> f64 {
        self.0
    }
}

impl UnitFactor for Sign {
    type Value = f64;

    fn one() -> Self {
        Sign::PLUS
    }

    fn mul(self, other: Self) -> Self {
        Sign(self.0 * other.0)
    }

    fn div(self, other: Self) -> Self {
        Sign(self.0 * other.0)
    }

    fn split(v: f64) -> (Self, f64) {
        if v < 0.0 {
            (Sign::MINUS, -v)
        } else {
            (Sign::PLUS, v)
        }
    }

    fn scale(self, magnitude: f64) -> f64 {
        self.0 * magnitude
    }
}

/// Unit-modulus complex phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Phase(Complex64);

impl Phase {
    pub fn value(self) -> Complex64 {
        self.0
    }
}

impl UnitFactor for Phase {
    type Value = Complex64;

    fn one() -> Self {
        Phase(Complex64::new(1.0, 0.0))
    }

    fn mul(self, other: Self) -> Self {
        Phase(self.0 * other.0)
    }

    fn div(self, other: Self) -> Self {
        Phase(self.0 * other.0.conj())
    }

    fn split(v: Complex64) -> (Self, f64) {
        let r = v.norm();
        if r == 0.0 || !r.is_finite() {
            (Phase::one(), r)
        } else {
            Phase(v / r).renormalized(r)
        }
    }

    fn scale(self, magnitude: f64) -> Complex64 {
        self.0 * magnitude
    }
}

impl Phase {
    // One Newton step on |u| = 1 keeps the factor unit to ~1 ulp.
    fn renormalized(self, r: f64) -> (Self, f64) {
        let u = self.0;
        let n2 = u.norm_sqr();
        (Phase(u * (1.5 - 0.5 * n2)), r)
    }
}

/// `factor * exp(log_magnitude)`. An exact zero has `log_magnitude = -inf`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScaled<F: UnitFactor> {
    pub log_magnitude: f64,
    pub factor: F,
}

pub type LogReal = LogScaled<Sign>;
pub type LogComplex = LogScaled<Phase>;

impl<F: UnitFactor> LogScaled<F> {
    pub fn new(log_magnitude: f64, factor: F) -> Self {
        Self {
            log_magnitude,
            factor,
        }
    }

    pub fn zero() -> Self {
        Self::new(f64::NEG_INFINITY, F::one())
    }

    pub fn one() -> Self {
        Self::new(0.0, F::one())
    }

    /// A positive value given by its logarithm.
    pub fn from_ln(ln: f64) -> Self {
        Self::new(ln, F::one())
    }

    pub fn from_value(v: F::Value) -> Self {
        let (factor, mag) = F::split(v);
        Self::new(mag.ln(), factor)
    }

    /// Value with an extra `exp(shift)` applied before de-scaling.
    pub fn to_value_shifted(self, shift: f64) -> F::Value {
        self.factor.scale((self.log_magnitude + shift).exp())
    }

    pub fn to_value(self) -> F::Value {
        self.to_value_shifted(0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.log_magnitude == f64::NEG_INFINITY
    }

    pub fn powi(self, k: i32) -> Self {
        let mut factor = F::one();
        let base = if k >= 0 {
            self.factor
        } else {
            F::one().div(self.factor)
        };
        for _ in 0..k.unsigned_abs() {
            factor = factor.mul(base);
        }
        Self::new(self.log_magnitude * k as f64, factor)
    }
}

impl LogComplex {
    pub fn conj(self) -> Self {
        Self::new(self.log_magnitude, Phase(self.factor.0.conj()))
    }
}

impl<F: UnitFactor> Mul for LogScaled<F> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(
            self.log_magnitude + rhs.log_magnitude,
            self.factor.mul(rhs.factor),
        )
    }
}

impl<F: UnitFactor> Div for LogScaled<F> {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        Self::new(
            self.log_magnitude - rhs.log_magnitude,
            self.factor.div(rhs.factor),
        )
    }
}

/// Sum `Σ c_i · v_i` of real coefficients times log-scaled reals, returned as
/// a log-scaled real. Terms are brought to the largest exponent first.
pub fn combine_real(terms: &[(f64, LogReal)]) -> LogReal {
    let top = terms
        .iter()
        .filter(|(c, v)| *c != 0.0 && !v.is_zero())
        .map(|(_, v)| v.log_magnitude)
        .fold(f64::NEG_INFINITY, f64::max);
    if top == f64::NEG_INFINITY {
        return LogReal::zero();
    }
    let s: f64 = terms
        .iter()
        .map(|(c, v)| c * v.to_value_shifted(-top))
        .sum();
    let mut out = LogReal::from_value(s);
    out.log_magnitude += top;
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn zero_and_one() {
        assert_eq!(LogReal::zero().to_value(), 0.0);
        assert_eq!(LogReal::one().to_value(), 1.0);
        assert_eq!(LogReal::from_value(0.0).log_magnitude, f64::NEG_INFINITY);
    }

    #[test]
    fn huge_product_stays_finite_in_log_space() {
        let a = LogReal::from_ln(5000.0);
        let b = LogReal::from_ln(-4999.0);
        assert!(((a * b).to_value() - 1f64.exp()).abs() < 1e-9);
    }

    #[test]
    fn combine_cancels_exponents() {
        let a = LogReal::from_ln(1000.0);
        let b = LogReal::from_ln(1000.0 + 2f64.ln());
        let s = combine_real(&[(2.0, a), (-1.0, b), (1.0, a)]);
        assert!((s.log_magnitude - 1000.0).abs() < 1e-12);
        assert_eq!(s.factor, Sign::PLUS);
    }

    proptest! {
        #[test]
        fn real_round_trip(v in -1e300f64..1e300) {
            let back = LogReal::from_value(v).to_value();
            prop_assert!((back - v).abs() <= 1e-13 * v.abs());
        }

        #[test]
        fn complex_round_trip_and_unit_phase(re in -1e5f64..1e5, im in -1e5f64..1e5) {
            let z = Complex64::new(re, im);
            let s = LogComplex::from_value(z);
            prop_assume!(z.norm() > 1e-300);
            prop_assert!((s.factor.value().norm() - 1.0).abs() < 1e-14);
            prop_assert!((s.to_value() - z).norm() <= 1e-13 * z.norm());
        }

        #[test]
        fn product_adds_logs(a in -300f64..300.0, b in -300f64..300.0, sa: bool, sb: bool) {
            let x = if sa { a.exp() } else { -a.exp() };
            let y = if sb { b.exp() } else { -b.exp() };
            let p = LogReal::from_value(x) * LogReal::from_value(y);
            prop_assert!((p.log_magnitude - (a + b)).abs() < 1e-12 * (1.0 + (a + b).abs()));
            prop_assert!((p.to_value() - x * y).abs() <= 1e-12 * (x * y).abs());
        }
    }
}
