use crate::error::{ensure_finite, Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Ensemble {
    /// `H + iγ e₁e₁ᵀ` with `H` from the GUE.
    GueDeformed { gamma: f64 },
    /// `U diag(√(1−T), 1, …, 1)` with `U` Haar.
    CueSubunitary { t_coupling: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Observable {
    /// Histogram of every eigenvalue height.
    ImagHist,
    /// Histogram and samples of the largest height.
    Ymax,
    /// Per-trial counts of heights above each threshold (critical units).
    ExceedCounts,
    /// Joint histogram of `(Re z, Im z)` scaled by `n^{scale_exponent}`.
    Scaled2d,
    /// Samples of `min |z_j|`.
    MinModulus,
}

impl Observable {
    pub const ALL: [Observable; 5] = [
        Observable::ImagHist,
        Observable::Ymax,
        Observable::ExceedCounts,
        Observable::Scaled2d,
        Observable::MinModulus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Observable::ImagHist => "imag-hist",
            Observable::Ymax => "ymax",
            Observable::ExceedCounts => "exceed-counts",
            Observable::Scaled2d => "scaled-2d",
            Observable::MinModulus => "min-modulus",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown observable `{s}`")))
    }
}

/// Half-open bins `[lo, hi)` split into `count` equal parts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

impl BinSpec {
    pub fn new(lo: f64, hi: f64, count: usize) -> Result<Self> {
        let b = Self { lo, hi, count };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        ensure_finite("bin lower edge", self.lo)?;
        ensure_finite("bin upper edge", self.hi)?;
        if self.count < 2 {
            return Err(Error::InvalidArgument(format!(
                "need at least 2 bins, got {}",
                self.count
            )));
        }
        if self.hi <= self.lo {
            return Err(Error::InvalidArgument("bin range must have hi > lo".into()));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        (self.hi - self.lo) / self.count as f64
    }

    pub fn edges(&self) -> Vec<f64> {
        (0..=self.count)
            .map(|i| if i == self.count { self.hi } else { self.lo + i as f64 * self.width() })
            .collect()
    }
}

/// Eigenvalue routine for the deformed GUE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Tridiagonal model of the GUE with a dense fallback.
    #[default]
    Tridiagonal,
    /// Dense sample, Hessenberg reduction and shifted QR.
    Dense,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub ensemble: Ensemble,
    pub n: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub observables: BTreeSet<Observable>,
    /// Exceedance levels `m`, counted as heights above `m n^{-1/3}`.
    pub thresholds: Vec<f64>,
    pub bins: BinSpec,
    /// Bins for the joint histogram, `(x, y)`.
    pub bins_2d: Option<(BinSpec, BinSpec)>,
    pub scale_exponent: f64,
    pub solver: Solver,
    /// Size of the worker pool; `None` uses the global pool. Results do not
    /// depend on it.
    pub workers: Option<usize>,
}

/// Trials per work unit. Fixed so that results do not depend on the pool.
pub const CHUNK_TRIALS: usize = 64;

impl TrialConfig {
    pub fn new(ensemble: Ensemble, n: usize, trials: usize, master_seed: u64) -> Self {
        Self {
            ensemble,
            n,
            trials,
            master_seed,
            observables: [Observable::ImagHist, Observable::Ymax].into_iter().collect(),
            thresholds: Vec::new(),
            bins: BinSpec {
                lo: 0.0,
                hi: 2.0,
                count: 80,
            },
            bins_2d: None,
            scale_exponent: 1.0 / 3.0,
            solver: Solver::default(),
            workers: None,
        }
    }

    pub fn with_observables(mut self, obs: &[Observable]) -> Self {
        self.observables = obs.iter().copied().collect();
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be at least 1".into()));
        }
        match self.ensemble {
            Ensemble::GueDeformed { gamma } => {
                if !(gamma > 0.0 && gamma.is_finite()) {
                    return Err(Error::InvalidArgument(format!(
                        "gamma must be positive and finite, got {gamma}"
                    )));
                }
            }
            Ensemble::CueSubunitary { t_coupling } => {
                if !(0.0..=1.0).contains(&t_coupling) {
                    return Err(Error::InvalidArgument(format!(
                        "T must lie in [0, 1], got {t_coupling}"
                    )));
                }
            }
        }
        self.bins.validate()?;
        if let Some((bx, by)) = &self.bins_2d {
            bx.validate()?;
            by.validate()?;
        } else if self.observables.contains(&Observable::Scaled2d) {
            return Err(Error::InvalidArgument("scaled-2d needs 2-D bins".into()));
        }
        for &m in &self.thresholds {
            ensure_finite("threshold", m)?;
        }
        if self.thresholds.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument("thresholds must be sorted ascending".into()));
        }
        if self.observables.contains(&Observable::ExceedCounts) && self.thresholds.is_empty() {
            return Err(Error::InvalidArgument("exceed-counts needs at least one threshold".into()));
        }
        ensure_finite("scale exponent", self.scale_exponent)?;
        if self.workers == Some(0) {
            return Err(Error::InvalidArgument("workers must be at least 1".into()));
        }
        Ok(())
    }

    pub fn wants(&self, o: Observable) -> bool {
        self.observables.contains(&o)
    }
}
