use super::config::{BinSpec, TrialConfig};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Counts on half-open bins, with the samples outside `[lo, hi)` tallied
/// separately so the total number of samples is never lost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bins: BinSpec,
    pub counts: Vec<u64>,
    pub underflow: u64,
    pub overflow: u64,
    /// NaN samples.
    pub invalid: u64,
}

impl Histogram {
    pub fn new(bins: BinSpec) -> Self {
        Self {
            bins,
            counts: vec![0; bins.count],
            underflow: 0,
            overflow: 0,
            invalid: 0,
        }
    }

    pub fn index_of(&self, x: f64) -> Option<usize> {
        let b = &self.bins;
        if !(x >= b.lo && x < b.hi) {
            return None;
        }
        Some((((x - b.lo) / b.width()) as usize).min(b.count - 1))
    }

    pub fn add(&mut self, x: f64) {
        if x.is_nan() {
            self.invalid += 1;
        } else if let Some(i) = self.index_of(x) {
            self.counts[i] += 1;
        } else if x < self.bins.lo {
            self.underflow += 1;
        } else {
            self.overflow += 1;
        }
    }

    pub fn merge(&mut self, other: &Histogram) -> Result<()> {
        if self.bins != other.bins {
            return Err(Error::InvalidArgument("cannot merge histograms with different bins".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.underflow += other.underflow;
        self.overflow += other.overflow;
        self.invalid += other.invalid;
        Ok(())
    }

    pub fn in_range(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// All samples, including those outside the bins.
    pub fn total(&self) -> u64 {
        self.in_range() + self.underflow + self.overflow + self.invalid
    }

    /// Density with total mass `mass` spread over all samples.
    pub fn density(&self, mass: f64) -> Vec<f64> {
        let scale = mass / (self.total().max(1) as f64 * self.bins.width());
        self.counts.iter().map(|&c| c as f64 * scale).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram2d {
    pub x: BinSpec,
    pub y: BinSpec,
    /// Row-major in `y`: `counts[iy * x.count + ix]`.
    pub counts: Vec<u64>,
    pub outside: u64,
}

impl Histogram2d {
    pub fn new(x: BinSpec, y: BinSpec) -> Self {
        Self {
            x,
            y,
            counts: vec![0; x.count * y.count],
            outside: 0,
        }
    }

    pub fn add(&mut self, px: f64, py: f64) {
        let hx = Histogram::new(self.x);
        let hy = Histogram::new(self.y);
        match (hx.index_of(px), hy.index_of(py)) {
            (Some(i), Some(j)) => self.counts[j * self.x.count + i] += 1,
            _ => self.outside += 1,
        }
    }

    pub fn merge(&mut self, other: &Histogram2d) -> Result<()> {
        if self.x != other.x || self.y != other.y {
            return Err(Error::InvalidArgument("cannot merge histograms with different bins".into()));
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        self.outside += other.outside;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum::<u64>() + self.outside
    }

    pub fn get(&self, ix: usize, iy: usize) -> u64 {
        self.counts[iy * self.x.count + ix]
    }
}

/// Scalar summaries of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub index: u64,
    pub y_max: f64,
    pub min_modulus: f64,
    pub sum_imag: f64,
    /// `|Σ Im z_j − γ|` for the deformed GUE, `|Π |z_j| − √(1−T)|` for the
    /// subunitary ensemble.
    pub invariant_residual: f64,
    /// Heights above each threshold.
    pub exceed: Vec<u32>,
}

/// Monte Carlo accumulators. Histograms are integer counts and per-trial
/// records are kept sorted by trial index, so merging is associative and
/// commutative and every derived statistic is independent of merge order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleStats {
    pub n: usize,
    pub trials_done: u64,
    pub failed_trials: Vec<u64>,
    pub imag_hist: Option<Histogram>,
    pub ymax_hist: Option<Histogram>,
    pub hist_2d: Option<Histogram2d>,
    pub thresholds: Vec<f64>,
    pub exceed_totals: Vec<u64>,
    pub records: Vec<TrialRecord>,
}

/// Mean and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub std_dev: f64,
    pub std_err: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let count = xs.len();
        if count == 0 {
            return Self {
                count,
                mean: f64::NAN,
                std_dev: f64::NAN,
                std_err: f64::NAN,
            };
        }
        let n = count as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if count > 1 {
            xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        Self {
            count,
            mean,
            std_dev: var.sqrt(),
            std_err: (var / n).sqrt(),
        }
    }
}

impl EnsembleStats {
    pub fn empty(cfg: &TrialConfig) -> Self {
        use super::config::Observable as O;
        Self {
            n: cfg.n,
            trials_done: 0,
            failed_trials: Vec::new(),
            imag_hist: cfg.wants(O::ImagHist).then(|| Histogram::new(cfg.bins)),
            ymax_hist: cfg.wants(O::Ymax).then(|| Histogram::new(cfg.bins)),
            hist_2d: cfg.bins_2d.filter(|_| cfg.wants(O::Scaled2d)).map(|(x, y)| Histogram2d::new(x, y)),
            thresholds: cfg.thresholds.clone(),
            exceed_totals: vec![0; cfg.thresholds.len()],
            records: Vec::new(),
        }
    }

    pub fn merge(mut self, other: EnsembleStats) -> Result<Self> {
        if self.n != other.n || self.thresholds != other.thresholds {
            return Err(Error::InvalidArgument("cannot merge runs of different configurations".into()));
        }
        fn merge_opt<T>(a: &mut Option<T>, b: Option<T>, f: impl Fn(&mut T, &T) -> Result<()>) -> Result<()> {
            match (a.as_mut(), b) {
                (Some(x), Some(y)) => f(x, &y),
                (None, None) => Ok(()),
                _ => Err(Error::InvalidArgument("cannot merge runs with different observables".into())),
            }
        }
        merge_opt(&mut self.imag_hist, other.imag_hist, Histogram::merge)?;
        merge_opt(&mut self.ymax_hist, other.ymax_hist, Histogram::merge)?;
        merge_opt(&mut self.hist_2d, other.hist_2d, Histogram2d::merge)?;
        for (a, b) in self.exceed_totals.iter_mut().zip(&other.exceed_totals) {
            *a += b;
        }
        self.trials_done += other.trials_done;
        self.failed_trials.extend(other.failed_trials);
        self.failed_trials.sort_unstable();
        self.records.extend(other.records);
        self.records.sort_by_key(|r| r.index);
        Ok(self)
    }

    pub fn ymax_samples(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.y_max).collect()
    }

    pub fn min_modulus_samples(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.min_modulus).collect()
    }

    /// Per-trial counts above threshold `k`.
    pub fn exceed_per_trial(&self, k: usize) -> Vec<u32> {
        self.records.iter().map(|r| r.exceed[k]).collect()
    }

    pub fn exceed_summary(&self, k: usize) -> Summary {
        let xs: Vec<f64> = self.exceed_per_trial(k).into_iter().map(f64::from).collect();
        Summary::of(&xs)
    }

    pub fn max_invariant_residual(&self) -> f64 {
        self.records.iter().map(|r| r.invariant_residual).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> usize {
        self.failed_trials.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn half_open_bins() {
        let mut h = Histogram::new(BinSpec::new(0.0, 1.0, 4).unwrap());
        for x in [0.0, 0.25, 0.999, 1.0, -0.1, f64::NAN] {
            h.add(x);
        }
        assert_eq!(h.counts, vec![1, 1, 0, 1]);
        assert_eq!((h.underflow, h.overflow, h.invalid), (1, 1, 1));
        assert_eq!(h.total(), 6);
    }

    proptest! {
        #[test]
        fn histogram_merge_commutes(xs in prop::collection::vec(-0.5f64..1.5, 0..200),
                                    split in 0usize..200) {
            let b = BinSpec::new(0.0, 1.0, 7).unwrap();
            let split = split.min(xs.len());
            let mut all = Histogram::new(b);
            let (mut l, mut r) = (Histogram::new(b), Histogram::new(b));
            for (i, &x) in xs.iter().enumerate() {
                all.add(x);
                if i < split { l.add(x) } else { r.add(x) }
            }
            let mut lr = l.clone();
            lr.merge(&r).unwrap();
            let mut rl = r.clone();
            rl.merge(&l).unwrap();
            prop_assert_eq!(&lr, &all);
            prop_assert_eq!(&rl, &all);
        }
    }
}
