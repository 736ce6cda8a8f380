use super::{eigenvalues, ComplexMatrix};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Complex roots of `Σ_k c[k] x^k` from the eigenvalues of the companion
/// matrix. Vanishing leading coefficients lower the degree.
pub fn polynomial_roots(coeffs: &[f64]) -> Result<Vec<Complex64>> {
    let deg = match coeffs.iter().rposition(|&c| c != 0.0) {
        Some(d) => d,
        None => {
            return Err(Error::InvalidArgument(
                "the zero polynomial has no isolated roots".into(),
            ))
        }
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[deg];
    let comp = ComplexMatrix::from_fn(deg, |i, j| {
        if i == 0 {
            Complex64::new(-coeffs[deg - 1 - j] / lead, 0.0)
        } else if i == j + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    eigenvalues(&comp)
}
