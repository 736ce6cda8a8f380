//! Overflow-safe special functions.

mod asymptotic;
mod bessel;
mod hermite;
mod laguerre;

pub use asymptotic::{
    hermite_asymptotic_pi, hermite_asymptotic_pi_conj, laguerre_asymptotic,
    laguerre_asymptotic_with, sigma_minus, sigma_plus, tau_star, LaguerreRegime,
};
pub use bessel::{bessel_i, bessel_i_asymptotic, bessel_i_scaled, bessel_i_series, BESSEL_SWITCH};
pub use hermite::{hermite_orthonormal_seq, pi_exact, HermiteSeq};
pub use laguerre::{laguerre_neg, laguerre_neg_pair};

/// Values are renormalized once the working magnitude leaves
/// `[e^-300, e^300]`.
pub(crate) const RESCALE_LN: f64 = 300.0;
