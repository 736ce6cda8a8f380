//! Random matrices: GUE samples, their rank-one deformation, Haar unitaries,
//! and spectra with diagnostics.

use crate::error::{Error, Result};
use crate::linalg::{eigenvalues as dense_eigenvalues, qr_decompose, tridiagonal_eigenvalues, ComplexMatrix};
use crate::rng::{stream_rng, STREAM_GUE, STREAM_GUE_TRIDIAGONAL, STREAM_HAAR};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};

/// Hermitian matrix with density proportional to `exp(−(n/2) Tr H²)`.
#[derive(Debug, Clone)]
pub struct HermitianSample {
    pub n: usize,
    pub entries: ComplexMatrix,
    pub seed: u64,
}

/// `H + iγ e₁e₁ᵀ`.
#[derive(Debug, Clone)]
pub struct DeformedMatrix {
    pub n: usize,
    pub gamma: f64,
    pub entries: ComplexMatrix,
}

/// Eigenvalues sorted by descending imaginary part (ties by ascending real
/// part), with trace diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub sum_imag: f64,
    pub sum_real: f64,
    /// `|Σ z_j − Tr J|`.
    pub trace_residual: f64,
    pub source_seed: u64,
}

impl Spectrum {
    pub fn new(mut eigenvalues: Vec<Complex64>, trace: Complex64, source_seed: u64) -> Self {
        eigenvalues.sort_by(|a, b| b.im.total_cmp(&a.im).then(a.re.total_cmp(&b.re)));
        let sum: Complex64 = eigenvalues.iter().sum();
        Self {
            sum_imag: sum.im,
            sum_real: sum.re,
            trace_residual: (sum - trace).norm(),
            eigenvalues,
            source_seed,
        }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn y_max(&self) -> f64 {
        self.eigenvalues.first().map_or(f64::NAN, |z| z.im)
    }

    pub fn imag_parts(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().map(|z| z.im)
    }

    pub fn moduli(&self) -> impl Iterator<Item = f64> + '_ {
        self.eigenvalues.iter().map(|z| z.norm())
    }

    pub fn min_modulus(&self) -> f64 {
        self.moduli().fold(f64::INFINITY, f64::min)
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidArgument("matrix dimension must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("gamma must be positive and finite, got {gamma}")))
    }
}

/// Diagonal entries have variance `1/n`; real and imaginary parts of the
/// off-diagonal entries each have variance `1/(2n)`.
pub fn sample_gue(n: usize, seed: u64) -> Result<HermitianSample> {
    check_n(n)?;
    let mut rng = stream_rng(seed, STREAM_GUE);
    let sd_diag = (1.0 / n as f64).sqrt();
    let sd_off = (0.5 / n as f64).sqrt();
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        h[(i, i)] = Complex64::new(sd_diag * d, 0.0);
        for j in i + 1..n {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            let z = Complex64::new(sd_off * re, sd_off * im);
            h[(i, j)] = z;
            h[(j, i)] = z.conj();
        }
    }
    Ok(HermitianSample { n, entries: h, seed })
}

pub fn build_deformation(h: &HermitianSample, gamma: f64) -> Result<DeformedMatrix> {
    check_gamma(gamma)?;
    let mut entries = h.entries.clone();
    entries[(0, 0)] += Complex64::new(0.0, gamma);
    Ok(DeformedMatrix {
        n: h.n,
        gamma,
        entries,
    })
}

/// Dense Hessenberg reduction followed by shifted QR.
pub fn eigenvalues(m: &DeformedMatrix) -> Result<Spectrum> {
    spectrum_of(&m.entries, 0)
}

pub(crate) fn spectrum_of(m: &ComplexMatrix, seed: u64) -> Result<Spectrum> {
    let ev = dense_eigenvalues(m)?;
    Ok(Spectrum::new(ev, m.trace(), seed))
}

/// Tridiagonal matrix unitarily similar to a GUE sample by a similarity that
/// fixes `e₁`, so `T + iγ e₁e₁ᵀ` has the same spectral law as `H + iγ e₁e₁ᵀ`.
#[derive(Debug, Clone)]
pub struct TridiagonalGue {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
    pub seed: u64,
}

impl TridiagonalGue {
    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn to_dense(&self, gamma: f64) -> ComplexMatrix {
        let n = self.n();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self.diag[i], 0.0);
            if i + 1 < n {
                m[(i, i + 1)] = Complex64::new(self.off[i], 0.0);
                m[(i + 1, i)] = Complex64::new(self.off[i], 0.0);
            }
        }
        m[(0, 0)] += Complex64::new(0.0, gamma);
        m
    }
}

/// Diagonal `N(0, 1/n)`, off-diagonal `b_k = √(Gamma(n−k, 1)/n)`.
pub fn sample_gue_tridiagonal(n: usize, seed: u64) -> Result<TridiagonalGue> {
    check_n(n)?;
    let mut rng = stream_rng(seed, STREAM_GUE_TRIDIAGONAL);
    let nf = n as f64;
    let sd = (1.0 / nf).sqrt();
    let mut diag = Vec::with_capacity(n);
    let mut off = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n {
        let d: f64 = rng.sample(StandardNormal);
        diag.push(sd * d);
        if k + 1 < n {
            let shape = (n - k - 1) as f64;
            let g = Gamma::new(shape, 1.0).expect("positive shape").sample(&mut rng);
            off.push((g / nf).sqrt());
        }
    }
    Ok(TridiagonalGue { diag, off, seed })
}

/// Spectrum of `T + iγ e₁e₁ᵀ` by complex-symmetric QL, with the dense solver
/// as fallback when the rotations break down.
pub fn spectrum_tridiagonal(t: &TridiagonalGue, gamma: f64) -> Result<Spectrum> {
    check_gamma(gamma)?;
    tridiagonal_spectrum_from(t, gamma)
}

/// As `spectrum_tridiagonal`, also accepting the Hermitian endpoint `γ = 0`.
pub(crate) fn tridiagonal_spectrum_from(t: &TridiagonalGue, gamma: f64) -> Result<Spectrum> {
    let mut d: Vec<Complex64> = t.diag.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    d[0].im += gamma;
    let e: Vec<Complex64> = t.off.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let trace: Complex64 = d.iter().sum();
    let ev = match tridiagonal_eigenvalues(&d, &e) {
        Ok(ev) => ev,
        Err(_) => dense_eigenvalues(&t.to_dense(gamma))?,
    };
    let s = Spectrum::new(ev, trace, t.seed);
    // a numerically poor QL result is also redone densely
    let scale = 1.0 + gamma + t.diag.iter().map(|x| x.abs()).sum::<f64>();
    if s.trace_residual > 1e-10 * scale * t.n() as f64 {
        let ev = dense_eigenvalues(&t.to_dense(gamma))?;
        return Ok(Spectrum::new(ev, trace, t.seed));
    }
    Ok(s)
}

#[derive(Debug, Clone)]
pub struct UnitaryMatrix(pub ComplexMatrix);

impl UnitaryMatrix {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix, with the phases
/// fixed so that `R` has a positive diagonal.
pub fn sample_haar_unitary(n: usize, seed: u64) -> Result<UnitaryMatrix> {
    check_n(n)?;
    let mut rng = stream_rng(seed, STREAM_HAAR);
    let g = ComplexMatrix::from_fn(n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let (mut q, r) = qr_decompose(&g);
    for j in 0..n {
        let rjj = r[(j, j)];
        let ph = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= ph;
        }
    }
    Ok(UnitaryMatrix(q))
}
