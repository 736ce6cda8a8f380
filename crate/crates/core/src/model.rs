//! Tabulated model curves for emission and for comparison with histograms.

use crate::error::{ensure_finite, Error, Result};
use crate::quad::{integrate, QuadOptions};
use serde::{Deserialize, Serialize};
use std::cell::RefCell;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CurveKind {
    /// `values[i]` is the density at `grid[i]`.
    Pointwise,
    /// `grid` holds bin edges and `values[i]` is the mean density on
    /// `[grid[i], grid[i+1])`.
    BinAveraged,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelCurve {
    pub model: String,
    pub parameters: BTreeMap<String, f64>,
    pub kind: CurveKind,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    /// Total mass of the density on its full domain: 1 for a probability
    /// density, `n` for a per-eigenvalue count density.
    pub mass: f64,
}

fn check_grid(grid: &[f64], min_len: usize) -> Result<()> {
    if grid.len() < min_len {
        return Err(Error::InvalidArgument(format!(
            "grid needs at least {min_len} points, got {}",
            grid.len()
        )));
    }
    for &g in grid {
        ensure_finite("grid point", g)?;
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument("grid must be strictly increasing".into()));
    }
    Ok(())
}

impl ModelCurve {
    pub fn pointwise(
        model: &str,
        parameters: BTreeMap<String, f64>,
        grid: Vec<f64>,
        mass: f64,
        f: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        check_grid(&grid, 2)?;
        let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            model: model.to_string(),
            parameters,
            kind: CurveKind::Pointwise,
            grid,
            values,
            mass,
        })
    }

    /// Bin means by adaptive quadrature. Evaluation errors inside a bin are
    /// reported, not integrated over.
    pub fn bin_averaged(
        model: &str,
        parameters: BTreeMap<String, f64>,
        edges: Vec<f64>,
        mass: f64,
        f: impl Fn(f64) -> Result<f64>,
    ) -> Result<Self> {
        check_grid(&edges, 2)?;
        let mut values = Vec::with_capacity(edges.len() - 1);
        for w in edges.windows(2) {
            let failure = RefCell::new(None);
            let r = integrate(
                |x| match f(x) {
                    Ok(v) => v,
                    Err(e) => {
                        failure.borrow_mut().get_or_insert(e);
                        0.0
                    }
                },
                w[0],
                w[1],
                QuadOptions::tol(1e-13, 1e-10),
            );
            if let Some(e) = failure.into_inner() {
                return Err(e);
            }
            values.push(r.value / (w[1] - w[0]));
        }
        Ok(Self {
            model: model.to_string(),
            parameters,
            kind: CurveKind::BinAveraged,
            grid: edges,
            values,
            mass,
        })
    }

    /// `(lo, hi)` covered by the curve.
    pub fn support(&self) -> (f64, f64) {
        (self.grid[0], *self.grid.last().unwrap())
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            CurveKind::Pointwise => {
                check_grid(&self.grid, 2)?;
                if self.values.len() != self.grid.len() {
                    return Err(Error::InvalidArgument("one value per grid point expected".into()));
                }
            }
            CurveKind::BinAveraged => {
                check_grid(&self.grid, 2)?;
                if self.values.len() + 1 != self.grid.len() {
                    return Err(Error::InvalidArgument("one value per bin expected".into()));
                }
            }
        }
        for &v in &self.values {
            ensure_finite("model value", v)?;
        }
        if !(self.mass > 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidArgument("model mass must be positive".into()));
        }
        Ok(())
    }

    /// Mass of the curve on each `[edges[i], edges[i+1])`. Bin-averaged curves
    /// require every edge to be one of their own edges. Pointwise curves are
    /// integrated by the trapezoid rule with linear interpolation.
    pub fn bin_masses(&self, edges: &[f64]) -> Result<Vec<f64>> {
        self.validate()?;
        check_grid(edges, 2)?;
        let (lo, hi) = self.support();
        let tol = 1e-12 * (hi - lo);
        if edges[0] < lo - tol || *edges.last().unwrap() > hi + tol {
            return Err(Error::InvalidArgument(format!(
                "model support [{lo}, {hi}] does not cover [{}, {}]",
                edges[0],
                edges.last().unwrap()
            )));
        }
        match self.kind {
            CurveKind::BinAveraged => {
                // cumulative mass at each model edge
                let mut cum = vec![0.0];
                for (i, w) in self.grid.windows(2).enumerate() {
                    cum.push(cum[i] + self.values[i] * (w[1] - w[0]));
                }
                let at = |x: f64| -> Result<f64> {
                    let i = self
                        .grid
                        .iter()
                        .position(|&g| (g - x).abs() <= tol)
                        .ok_or_else(|| {
                            Error::InvalidArgument(format!("edge {x} is not a model bin edge"))
                        })?;
                    Ok(cum[i])
                };
                edges.windows(2).map(|w| Ok(at(w[1])? - at(w[0])?)).collect()
            }
            CurveKind::Pointwise => Ok(edges
                .windows(2)
                .map(|w| self.trapezoid(w[0].max(lo), w[1].min(hi)))
                .collect()),
        }
    }

    fn interpolate(&self, x: f64) -> f64 {
        let g = &self.grid;
        let i = g.partition_point(|&v| v <= x).clamp(1, g.len() - 1);
        let (x0, x1) = (g[i - 1], g[i]);
        let (y0, y1) = (self.values[i - 1], self.values[i]);
        y0 + (y1 - y0) * (x - x0) / (x1 - x0)
    }

    fn trapezoid(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        let mut xs = vec![a];
        xs.extend(self.grid.iter().copied().filter(|&g| g > a && g < b));
        xs.push(b);
        xs.windows(2)
            .map(|w| 0.5 * (w[1] - w[0]) * (self.interpolate(w[0]) + self.interpolate(w[1])))
            .sum()
    }
}
