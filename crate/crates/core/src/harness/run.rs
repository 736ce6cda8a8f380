use super::config::{Ensemble, Observable, Solver, TrialConfig, CHUNK_TRIALS};
use super::stats::{EnsembleStats, TrialRecord};
use crate::cue::{sample_spectrum, CueParams};
use crate::error::{Error, Result};
use crate::rmt::{build_deformation, eigenvalues, sample_gue, sample_gue_tridiagonal, spectrum_tridiagonal, Spectrum};
use crate::rng::trial_seed;
use rayon::prelude::*;

/// Spectrum of trial `index`.
pub fn trial_spectrum(cfg: &TrialConfig, index: u64) -> Result<Spectrum> {
    let seed = trial_seed(cfg.master_seed, index);
    match cfg.ensemble {
        Ensemble::GueDeformed { gamma } => match cfg.solver {
            Solver::Tridiagonal => spectrum_tridiagonal(&sample_gue_tridiagonal(cfg.n, seed)?, gamma),
            Solver::Dense => {
                let h = sample_gue(cfg.n, seed)?;
                let mut s = eigenvalues(&build_deformation(&h, gamma)?)?;
                s.source_seed = seed;
                Ok(s)
            }
        },
        Ensemble::CueSubunitary { t_coupling } => sample_spectrum(CueParams::new(cfg.n, t_coupling)?, seed),
    }
}

/// Height of an eigenvalue: `Im z` for the deformed GUE, `1 − |z|` for the
/// subunitary ensemble.
pub fn height(ensemble: &Ensemble, z: num_complex::Complex64) -> f64 {
    match ensemble {
        Ensemble::GueDeformed { .. } => z.im,
        Ensemble::CueSubunitary { .. } => 1.0 - z.norm(),
    }
}

fn record(cfg: &TrialConfig, stats: &mut EnsembleStats, index: u64, s: &Spectrum) {
    let heights: Vec<f64> = s.eigenvalues.iter().map(|&z| height(&cfg.ensemble, z)).collect();
    let y_max = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if let Some(h) = stats.imag_hist.as_mut() {
        heights.iter().for_each(|&y| h.add(y));
    }
    if let Some(h) = stats.ymax_hist.as_mut() {
        h.add(y_max);
    }
    if let Some(h) = stats.hist_2d.as_mut() {
        let scale = (cfg.n as f64).powf(cfg.scale_exponent);
        for z in &s.eigenvalues {
            h.add(z.re * scale, z.im * scale);
        }
    }
    let unit = (cfg.n as f64).powf(-1.0 / 3.0);
    let exceed: Vec<u32> = if cfg.wants(Observable::ExceedCounts) {
        cfg.thresholds
            .iter()
            .map(|&m| heights.iter().filter(|&&y| y > m * unit).count() as u32)
            .collect()
    } else {
        vec![0; cfg.thresholds.len()]
    };
    for (t, &c) in stats.exceed_totals.iter_mut().zip(&exceed) {
        *t += u64::from(c);
    }
    let invariant_residual = match cfg.ensemble {
        Ensemble::GueDeformed { gamma } => (s.sum_imag - gamma).abs(),
        Ensemble::CueSubunitary { t_coupling } => {
            (s.moduli().product::<f64>() - (1.0 - t_coupling).sqrt()).abs()
        }
    };
    stats.records.push(TrialRecord {
        index,
        y_max,
        min_modulus: s.min_modulus(),
        sum_imag: s.sum_imag,
        invariant_residual,
        exceed,
    });
    stats.trials_done += 1;
}

fn run_chunk(cfg: &TrialConfig, start: usize, end: usize) -> Result<EnsembleStats> {
    let mut stats = EnsembleStats::empty(cfg);
    for index in start as u64..end as u64 {
        match trial_spectrum(cfg, index) {
            Ok(s) => record(cfg, &mut stats, index, &s),
            // dropped, never retried with another seed
            Err(Error::SolverFailure { .. } | Error::PrecisionLoss(_)) => stats.failed_trials.push(index),
            Err(e) => return Err(e),
        }
    }
    Ok(stats)
}

/// Runs `cfg.trials` independent trials. Trial `i` draws its matrix from
/// `trial_seed(master_seed, i)`, trials are grouped in fixed chunks, and
/// chunk results are merged in index order, so the output is bitwise
/// independent of the worker count.
///
/// Trials whose eigensolver fails are dropped; more than 0.1% failures
/// aborts the run.
pub fn run_trials(cfg: &TrialConfig) -> Result<EnsembleStats> {
    cfg.validate()?;
    let chunks: Vec<(usize, usize)> = (0..cfg.trials)
        .step_by(CHUNK_TRIALS)
        .map(|a| (a, (a + CHUNK_TRIALS).min(cfg.trials)))
        .collect();
    let work = || -> Vec<Result<EnsembleStats>> {
        chunks.par_iter().map(|&(a, b)| run_chunk(cfg, a, b)).collect()
    };
    let parts = match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    let mut stats = EnsembleStats::empty(cfg);
    for p in parts {
        stats = stats.merge(p?)?;
    }
    let failures = stats.failures();
    if failures * 1000 > cfg.trials {
        return Err(Error::RunAborted {
            failures,
            trials: cfg.trials,
        });
    }
    Ok(stats)
}
