//! Spectral statistics of rank-one non-Hermitian deformations of the GUE.
//!
//! The random matrix is `J = H + iγ e₁e₁ᵀ` with `H` drawn from the GUE
//! normalized so that `E Tr H² = N`. The crate evaluates exact finite-N
//! densities, their large-N limits, large-deviation and critical-regime
//! forms, a subunitary CUE analogue, and Monte Carlo experiments checking
//! them against sampled spectra.

pub mod critical;
pub mod cue;
pub mod error;
pub mod finite;
pub mod harness;
pub mod ld;
pub mod limit;
pub mod linalg;
pub mod logscaled;
pub mod model;
pub mod quad;
pub mod rmt;
pub mod rng;
pub mod specfun;

pub use error::{Error, Result};
