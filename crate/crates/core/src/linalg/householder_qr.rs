use super::{householder, ComplexMatrix};
use num_complex::Complex64;

/// `A = QR` by Householder reflections; `Q` unitary, `R` upper triangular.
pub fn qr_decompose(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.n();
    let zero = Complex64::new(0.0, 0.0);
    let mut r = a.clone();
    let mut reflectors = Vec::with_capacity(n);
    let mut x = vec![zero; n];
    for k in 0..n.saturating_sub(1) {
        let len = n - k;
        for i in 0..len {
            x[i] = r[(k + i, k)];
        }
        let (v, tau, beta) = householder(&x[..len]);
        for j in k + 1..n {
            let mut s = zero;
            for i in 0..len {
                s += v[i].conj() * r[(k + i, j)];
            }
            let s = tau * s;
            for i in 0..len {
                let d = v[i] * s;
                r[(k + i, j)] -= d;
            }
        }
        r[(k, k)] = beta;
        for i in k + 1..n {
            r[(i, k)] = zero;
        }
        reflectors.push((v, tau));
    }
    // Q = H_0 H_1 … applied to the identity from the right end
    let mut q = ComplexMatrix::identity(n);
    for (k, (v, tau)) in reflectors.iter().enumerate().rev() {
        let len = n - k;
        for j in 0..n {
            let mut s = zero;
            for i in 0..len {
                s += v[i].conj() * q[(k + i, j)];
            }
            let s = tau * s;
            for i in 0..len {
                let d = v[i] * s;
                q[(k + i, j)] -= d;
            }
        }
    }
    (q, r)
}
