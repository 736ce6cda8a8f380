use super::{csqrt, reduce_to_hessenberg, ComplexMatrix};
use crate::error::{Error, Result};
use num_complex::Complex64;

/// All eigenvalues of a general complex matrix, in no particular order.
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let mut h = a.clone();
    reduce_to_hessenberg(&mut h);
    eigenvalues_hessenberg(h)
}

/// Rotation `[c s; −s̄ c]` with real `c` that zeroes `b` in `(a, b)ᵀ`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let norm = na.hypot(nb);
    (na / norm, (a / na) * b.conj() / norm)
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    // eigenvalue of [a b; c d] closest to d
    let half = 0.5 * (a - d);
    let disc = csqrt(half * half + b * c);
    let mu1 = d - b * c / (half + disc);
    let mu2 = d - b * c / (half - disc);
    let pick = |m: Complex64| if m.re.is_finite() && m.im.is_finite() { Some(m) } else { None };
    match (pick(mu1), pick(mu2)) {
        (Some(x), Some(y)) => {
            if (x - d).norm() <= (y - d).norm() {
                x
            } else {
                y
            }
        }
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => d,
    }
}

/// Single-shift complex QR iteration on an upper Hessenberg matrix.
pub fn eigenvalues_hessenberg(mut h: ComplexMatrix) -> Result<Vec<Complex64>> {
    let n = h.n();
    let zero = Complex64::new(0.0, 0.0);
    let mut out = vec![zero; n];
    if n == 0 {
        return Ok(out);
    }
    let eps = f64::EPSILON;
    let max_sweeps = 30 * n;
    let mut sweeps = 0;
    let mut its = 0;
    let mut hi = n - 1;
    let mut rot: Vec<(f64, Complex64)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            out[0] = h[(0, 0)];
            return Ok(out);
        }
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            if sub <= eps * diag || sub < f64::MIN_POSITIVE {
                h[(l, l - 1)] = zero;
                break;
            }
            l -= 1;
        }
        if l == hi {
            out[hi] = h[(hi, hi)];
            hi -= 1;
            its = 0;
            continue;
        }
        if sweeps >= max_sweeps {
            return Err(Error::SolverFailure { iterations: sweeps });
        }
        sweeps += 1;
        its += 1;

        let mu = if its == 10 || its == 20 {
            let s = h[(hi, hi - 1)].re.abs()
                + if hi >= l + 2 {
                    h[(hi - 1, hi - 2)].re.abs()
                } else {
                    0.0
                };
            h[(hi, hi)] + 0.75 * s
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in l..=hi {
            h[(k, k)] -= mu;
        }
        rot.clear();
        for k in l..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..=hi {
                let x = h[(k, j)];
                let y = h[(k + 1, j)];
                h[(k, j)] = c * x + s * y;
                h[(k + 1, j)] = -s.conj() * x + c * y;
            }
            h[(k + 1, k)] = zero;
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            let last = (k + 2).min(hi);
            for i in l..=last {
                let x = h[(i, k)];
                let y = h[(i, k + 1)];
                h[(i, k)] = c * x + s.conj() * y;
                h[(i, k + 1)] = -s * x + c * y;
            }
        }
        for k in l..=hi {
            h[(k, k)] += mu;
        }
    }
}
