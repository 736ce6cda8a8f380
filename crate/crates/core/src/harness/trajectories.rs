use crate::error::{ensure_finite, Error, Result};
use crate::rmt::{sample_gue_tridiagonal, tridiagonal_spectrum_from, TridiagonalGue};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// A step whose largest matched distance exceeds this gets a midpoint.
pub const REFINE_DISTANCE: f64 = 0.1;
/// Candidates closer than this in distance count as a tie.
pub const AMBIGUITY_DISTANCE: f64 = 1e-12;
const MIN_STEP: f64 = 1e-6;
const MAX_GRID: usize = 10_000;

/// Eigenvalue paths of `H + iγ e₁e₁ᵀ` for one fixed `H`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySet {
    /// Requested grid with any inserted midpoints.
    pub gamma_grid: Vec<f64>,
    /// `paths[k][i]` is eigenvalue `k` at `gamma_grid[i]`.
    pub paths: Vec<Vec<Complex64>>,
    /// Largest matched distance of each step.
    pub pairing_residuals: Vec<f64>,
    /// Steps in which a tie was broken by real-part order.
    pub ambiguous_steps: Vec<usize>,
    pub seed: u64,
}

impl TrajectorySet {
    pub fn grid_index(&self, gamma: f64) -> Option<usize> {
        self.gamma_grid.iter().position(|&g| g == gamma)
    }

    pub fn values_at(&self, i: usize) -> Vec<Complex64> {
        self.paths.iter().map(|p| p[i]).collect()
    }
}

/// Greedy nearest-neighbour pairing of `from` with `to`: pairs are taken in
/// order of distance, ties within `AMBIGUITY_DISTANCE` going to the smaller
/// real part. Returns `perm` with `to[perm[k]]` paired to `from[k]`, the
/// largest distance and whether a tie occurred.
fn greedy_match(from: &[Complex64], to: &[Complex64]) -> (Vec<usize>, f64, bool) {
    let n = from.len();
    let mut pairs: Vec<(f64, u32, u32)> = Vec::with_capacity(n * n);
    for (i, a) in from.iter().enumerate() {
        for (j, b) in to.iter().enumerate() {
            pairs.push(((a - b).norm(), i as u32, j as u32));
        }
    }
    pairs.sort_unstable_by(|x, y| {
        x.0.total_cmp(&y.0)
            .then(to[x.2 as usize].re.total_cmp(&to[y.2 as usize].re))
            .then(x.1.cmp(&y.1))
    });
    let mut perm = vec![usize::MAX; n];
    let mut taken = vec![false; to.len()];
    let mut worst: f64 = 0.0;
    let mut ambiguous = false;
    let mut left = n.min(to.len());
    for (k, &(d, i, j)) in pairs.iter().enumerate() {
        let (i, j) = (i as usize, j as usize);
        if perm[i] != usize::MAX || taken[j] {
            continue;
        }
        // another free candidate at essentially the same distance
        ambiguous |= pairs[k + 1..]
            .iter()
            .take_while(|p| p.0 - d <= AMBIGUITY_DISTANCE)
            .any(|p| p.1 as usize == i && !taken[p.2 as usize] && p.2 as usize != j);
        perm[i] = j;
        taken[j] = true;
        worst = worst.max(d);
        left -= 1;
        if left == 0 {
            break;
        }
    }
    (perm, worst, ambiguous)
}

fn spectrum_at(t: &TridiagonalGue, gamma: f64) -> Result<Vec<Complex64>> {
    Ok(tridiagonal_spectrum_from(t, gamma)?.eigenvalues)
}

/// Follows every eigenvalue of one deformed GUE sample across `gamma_grid`.
/// A midpoint is inserted whenever the largest matched distance of a step
/// exceeds `REFINE_DISTANCE`.
pub fn trajectories(n: usize, seed: u64, gamma_grid: &[f64]) -> Result<TrajectorySet> {
    if gamma_grid.len() < 2 {
        return Err(Error::InvalidArgument("need at least two grid points".into()));
    }
    for &g in gamma_grid {
        ensure_finite("gamma", g)?;
        if g < 0.0 {
            return Err(Error::InvalidArgument(format!("gamma must be non-negative, got {g}")));
        }
    }
    if gamma_grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("gamma grid must be sorted ascending".into()));
    }
    let t = sample_gue_tridiagonal(n, seed)?;
    let first = spectrum_at(&t, gamma_grid[0])?;
    let mut paths: Vec<Vec<Complex64>> = first.iter().map(|&z| vec![z]).collect();
    let mut grid = vec![gamma_grid[0]];
    let mut residuals = Vec::new();
    let mut ambiguous_steps = Vec::new();
    let mut current = first;

    for &target in &gamma_grid[1..] {
        let mut pending: Vec<(f64, Option<Vec<Complex64>>)> = vec![(target, None)];
        while let Some((g, cached)) = pending.pop() {
            let next = match cached {
                Some(s) => s,
                None => spectrum_at(&t, g)?,
            };
            let (perm, worst, ambiguous) = greedy_match(&current, &next);
            let here = *grid.last().unwrap();
            if worst > REFINE_DISTANCE && g - here > MIN_STEP {
                if grid.len() + pending.len() >= MAX_GRID {
                    return Err(Error::PrecisionLoss("trajectory refinement did not settle".into()));
                }
                pending.push((g, Some(next)));
                pending.push((0.5 * (here + g), None));
                continue;
            }
            if ambiguous {
                ambiguous_steps.push(residuals.len());
            }
            current = perm.iter().map(|&j| next[j]).collect();
            for (p, &z) in paths.iter_mut().zip(&current) {
                p.push(z);
            }
            grid.push(g);
            residuals.push(worst);
        }
    }
    Ok(TrajectorySet {
        gamma_grid: grid,
        paths,
        pairing_residuals: residuals,
        ambiguous_steps,
        seed,
    })
}
