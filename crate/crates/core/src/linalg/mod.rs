//! Dense complex linear algebra needed for eigenvalue sampling.

mod hessenberg;
mod householder_qr;
mod poly;
mod qr;
mod tridiag;

pub use hessenberg::reduce_to_hessenberg;
pub use householder_qr::qr_decompose;
pub use poly::polynomial_roots;
pub use qr::{eigenvalues, eigenvalues_hessenberg};
pub use tridiag::tridiagonal_eigenvalues;

use num_complex::Complex64;
use std::ops::{Index, IndexMut};

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![Complex64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let src = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, s) in dst.iter_mut().zip(src) {
                    *d += a * s;
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.n + j]
    }
}

/// Principal square root without the polar round trip.
#[inline]
pub(crate) fn csqrt(z: Complex64) -> Complex64 {
    if z.im == 0.0 {
        return if z.re >= 0.0 {
            Complex64::new(z.re.sqrt(), z.im)
        } else {
            Complex64::new(0.0, (-z.re).sqrt().copysign(z.im))
        };
    }
    // plain sqrt(re² + im²): callers keep |z| far from the overflow range
    let t = (0.5 * ((z.re * z.re + z.im * z.im).sqrt() + z.re.abs())).sqrt();
    if z.re >= 0.0 {
        Complex64::new(t, z.im / (2.0 * t))
    } else {
        Complex64::new(z.im.abs() / (2.0 * t), t.copysign(z.im))
    }
}

/// Householder reflector `I − τ v vᴴ` (with `v[0] = 1`) mapping `x` onto a
/// multiple of `e₁`. Returns `(v, τ, β)` where `β` is the new leading entry.
pub(crate) fn householder(x: &[Complex64]) -> (Vec<Complex64>, Complex64, Complex64) {
    let zero = Complex64::new(0.0, 0.0);
    let alpha = x[0];
    let tail: f64 = x[1..].iter().map(|z| z.norm_sqr()).sum();
    if tail == 0.0 {
        let mut v = vec![zero; x.len()];
        v[0] = Complex64::new(1.0, 0.0);
        return (v, zero, alpha);
    }
    let norm = (alpha.norm_sqr() + tail).sqrt();
    let phase = if alpha.norm() == 0.0 {
        Complex64::new(1.0, 0.0)
    } else {
        alpha / alpha.norm()
    };
    let beta = -phase * norm;
    let denom = alpha - beta;
    let mut v: Vec<Complex64> = x.iter().map(|z| z / denom).collect();
    v[0] = Complex64::new(1.0, 0.0);
    let tau = (beta - alpha) / beta;
    (v, tau, beta)
}
