use super::csqrt;
use crate::error::{Error, Result};
use num_complex::Complex64;

/// Eigenvalues of the complex symmetric tridiagonal matrix with diagonal `d`
/// and off-diagonal `e` (`e[i]` couples `i` and `i+1`), by implicit QL with
/// complex orthogonal rotations.
///
/// Complex orthogonal rotations are not unitary, so the iteration can break
/// down; that case is reported as a solver failure and callers fall back to
/// the dense solver.
pub fn tridiagonal_eigenvalues(d: &[Complex64], e: &[Complex64]) -> Result<Vec<Complex64>> {
    let n = d.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if e.len() + 1 != n {
        return Err(Error::InvalidArgument(format!(
            "off-diagonal length {} does not match dimension {n}",
            e.len()
        )));
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut d = d.to_vec();
    let mut e: Vec<Complex64> = e.iter().copied().chain(std::iter::once(zero)).collect();
    let eps = f64::EPSILON;
    let mut sweeps = 0;
    let max_sweeps = 30 * n;
    let breakdown = |r: Complex64, f: Complex64, g: Complex64| r.l1_norm() < 1e-8 * (f.l1_norm() + g.l1_norm());

    for l in 0..n {
        let mut its = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].l1_norm() + d[m + 1].l1_norm();
                if e[m].l1_norm() <= eps * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            its += 1;
            sweeps += 1;
            if its > 30 || sweeps > max_sweeps {
                return Err(Error::SolverFailure { iterations: sweeps });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = csqrt(g * g + 1.0);
            let denom = if (g + r).norm() >= (g - r).norm() { g + r } else { g - r };
            g = d[m] - d[l] + e[l] / denom;
            let mut s = Complex64::new(1.0, 0.0);
            let mut c = Complex64::new(1.0, 0.0);
            let mut p = zero;
            let mut deflated_early = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = csqrt(f * f + g * g);
                if breakdown(r, f, g) {
                    if f.l1_norm() + g.l1_norm() == 0.0 {
                        d[i + 1] -= p;
                        e[m] = zero;
                        deflated_early = true;
                        break;
                    }
                    return Err(Error::SolverFailure { iterations: sweeps });
                }
                e[i + 1] = r;
                let inv = r.inv();
                s = f * inv;
                c = g * inv;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated_early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = zero;
        }
    }
    if d.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SolverFailure { iterations: sweeps });
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigenvalues, ComplexMatrix};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_same_spectrum(a: &[Complex64], b: &[Complex64], tol: f64) {
        assert_eq!(a.len(), b.len());
        let mut used = vec![false; b.len()];
        for x in a {
            let (j, dist) = b
                .iter()
                .enumerate()
                .filter(|(j, _)| !used[*j])
                .map(|(j, y)| (j, (x - y).norm()))
                .min_by(|p, q| p.1.total_cmp(&q.1))
                .unwrap();
            assert!(dist < tol, "{x} unmatched ({dist})");
            used[j] = true;
        }
    }

    #[test]
    fn real_symmetric_case() {
        // second-difference matrix: 2 − 2cos(kπ/(n+1))
        let n = 12;
        let d = vec![c(2.0, 0.0); n];
        let e = vec![c(-1.0, 0.0); n - 1];
        let mut ev: Vec<f64> = tridiagonal_eigenvalues(&d, &e).unwrap().iter().map(|z| z.re).collect();
        ev.sort_by(f64::total_cmp);
        for (k, v) in ev.iter().enumerate() {
            let want = 2.0 - 2.0 * ((k + 1) as f64 * std::f64::consts::PI / (n + 1) as f64).cos();
            assert!((v - want).abs() < 1e-13);
        }
    }

    #[test]
    fn matches_dense_solver_with_complex_corner() {
        let n = 30;
        let d: Vec<Complex64> = (0..n)
            .map(|i| c((i as f64 * 0.37).sin(), if i == 0 { 1.7 } else { 0.0 }))
            .collect();
        let e: Vec<Complex64> = (0..n - 1).map(|i| c(0.2 + (i as f64 * 0.11).cos().abs(), 0.0)).collect();
        let dense = ComplexMatrix::from_fn(n, |i, j| {
            if i == j {
                d[i]
            } else if i + 1 == j {
                e[i]
            } else if j + 1 == i {
                e[j]
            } else {
                c(0.0, 0.0)
            }
        });
        let a = tridiagonal_eigenvalues(&d, &e).unwrap();
        let b = eigenvalues(&dense).unwrap();
        assert_same_spectrum(&a, &b, 1e-10);
    }

    #[test]
    fn length_mismatch() {
        assert!(tridiagonal_eigenvalues(&[c(1.0, 0.0)], &[c(1.0, 0.0)]).is_err());
    }
}
