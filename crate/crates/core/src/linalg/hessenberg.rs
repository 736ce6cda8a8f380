use super::{householder, ComplexMatrix};
use num_complex::Complex64;

/// Unitary similarity to upper Hessenberg form by Householder reflections.
/// The first basis vector is left fixed.
pub fn reduce_to_hessenberg(a: &mut ComplexMatrix) {
    let n = a.n();
    if n < 3 {
        return;
    }
    let zero = Complex64::new(0.0, 0.0);
    let mut x = vec![zero; n];
    let mut w = vec![zero; n];
    for k in 0..n - 2 {
        let len = n - k - 1;
        for i in 0..len {
            x[i] = a[(k + 1 + i, k)];
        }
        let (v, tau, beta) = householder(&x[..len]);
        if tau == zero {
            continue;
        }
        // left: rows k+1.., columns k..
        for j in k..n {
            let mut s = zero;
            for i in 0..len {
                s += v[i].conj() * a[(k + 1 + i, j)];
            }
            w[j] = tau * s;
        }
        for i in 0..len {
            for j in k..n {
                let d = v[i] * w[j];
                a[(k + 1 + i, j)] -= d;
            }
        }
        // right: all rows, columns k+1..
        for r in 0..n {
            let mut s = zero;
            for i in 0..len {
                s += a[(r, k + 1 + i)] * v[i];
            }
            let s = s * tau.conj();
            for i in 0..len {
                let d = s * v[i].conj();
                a[(r, k + 1 + i)] -= d;
            }
        }
        a[(k + 1, k)] = beta;
        for i in k + 2..n {
            a[(i, k)] = zero;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn test_matrix(n: usize) -> ComplexMatrix {
        ComplexMatrix::from_fn(n, |i, j| {
            let t = (i * 7 + j * 13) as f64;
            Complex64::new(t.sin(), (1.3 * t).cos())
        })
    }

    #[test]
    fn preserves_trace_and_norm_and_is_hessenberg() {
        let a = test_matrix(9);
        let mut h = a.clone();
        reduce_to_hessenberg(&mut h);
        for i in 0..9usize {
            for j in 0..i.saturating_sub(1) {
                assert_eq!(h[(i, j)], Complex64::new(0.0, 0.0));
            }
        }
        assert!((h.trace() - a.trace()).norm() < 1e-12);
        assert!((h.frobenius_norm() - a.frobenius_norm()).abs() < 1e-12);
        // Tr A² is also invariant
        let t2a = a.matmul(&a).trace();
        let t2h = h.matmul(&h).trace();
        assert!((t2a - t2h).norm() < 1e-11);
        // the first row and column entry is untouched
        assert_eq!(h[(0, 0)], a[(0, 0)]);
    }
}
