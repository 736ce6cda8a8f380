//! Reproducible Monte Carlo runs over both ensembles, eigenvalue
//! trajectories in `γ`, and empirical-vs-model comparison.

mod compare;
mod config;
mod run;
mod stats;
mod trajectories;

pub use compare::{compare, compare_histogram, dkw_bound, ComparisonReport};
pub use config::{BinSpec, Ensemble, Observable, Solver, TrialConfig, CHUNK_TRIALS};
pub use run::{height, run_trials, trial_spectrum};
pub use stats::{EnsembleStats, Histogram, Histogram2d, Summary, TrialRecord};
pub use trajectories::{trajectories, TrajectorySet, AMBIGUITY_DISTANCE, REFINE_DISTANCE};
