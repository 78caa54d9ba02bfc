//! Sampled density curves: the exchange format between analytic densities,
//! the energy functional, and the CLI.

use crate::equilibrium::{EquilibriumMeasure, Phase};
use crate::quad::trapezoid;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("abscissae must be strictly increasing and finite")]
    BadAbscissae,
    #[error("values must be finite and nonnegative; offending value {0}")]
    BadValue(f64),
    #[error("lengths differ: {xs} abscissae vs {values} values")]
    LengthMismatch { xs: usize, values: usize },
    #[error("grid tagged normalized but trapezoidal mass is {mass} (must be within 1e-6 of 1)")]
    NotNormalized { mass: f64 },
}

/// Provenance of a density grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridMeta {
    /// Coupling that produced the curve (NaN for synthetic grids).
    pub g: f64,
    pub phase: Phase,
    pub points: usize,
    /// Whether the trapezoidal mass is certified to be within 1e-6 of 1.
    pub normalized: bool,
}

/// Ordered (abscissa, value) samples of a nonnegative density.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityGrid {
    xs: Vec<f64>,
    values: Vec<f64>,
    meta: GridMeta,
}

impl DensityGrid {
    pub fn new(xs: Vec<f64>, values: Vec<f64>, meta: GridMeta) -> Result<Self, GridError> {
        if xs.len() < 2 {
            return Err(GridError::TooFewPoints(xs.len()));
        }
        if xs.len() != values.len() {
            return Err(GridError::LengthMismatch {
                xs: xs.len(),
                values: values.len(),
            });
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().any(|x| !x.is_finite()) {
            return Err(GridError::BadAbscissae);
        }
        let mut values = values;
        for v in &mut values {
            if !v.is_finite() || *v < -1e-12 {
                return Err(GridError::BadValue(*v));
            }
            // Absorb quadrature round-off below zero.
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        let grid = Self { xs, values, meta };
        if meta.normalized {
            let mass = grid.mass();
            if (mass - 1.0).abs() > 1e-6 {
                return Err(GridError::NotNormalized { mass });
            }
        }
        Ok(grid)
    }

    /// Sample the analytic density of `mu` on a uniform grid over
    /// [lo, hi]. Tagged normalized only when the trapezoidal mass lands
    /// within 1e-6 of 1.
    pub fn from_measure(
        mu: &EquilibriumMeasure,
        lo: f64,
        hi: f64,
        points: usize,
    ) -> Result<Self, GridError> {
        if points < 2 {
            return Err(GridError::TooFewPoints(points));
        }
        if !(hi > lo) {
            return Err(GridError::BadAbscissae);
        }
        let xs: Vec<f64> = (0..points)
            .map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64)
            .collect();
        let values: Vec<f64> = xs.iter().map(|&x| mu.density(x)).collect();
        let mass = trapezoid(&xs, &values);
        let meta = GridMeta {
            g: mu.g(),
            phase: mu.phase(),
            points,
            normalized: (mass - 1.0).abs() <= 1e-6,
        };
        Self::new(xs, values, meta)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn meta(&self) -> &GridMeta {
        &self.meta
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Trapezoidal mass.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.xs, &self.values)
    }

    /// Piecewise-linear interpolant; zero outside the grid span.
    pub fn interpolate(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x < self.xs[0] || x > self.xs[n - 1] {
            return 0.0;
        }
        let idx = match self.xs.binary_search_by(|v| v.partial_cmp(&x).unwrap()) {
            Ok(i) => return self.values[i],
            Err(i) => i,
        };
        let (x0, x1) = (self.xs[idx - 1], self.xs[idx]);
        let t = (x - x0) / (x1 - x0);
        self.values[idx - 1] * (1.0 - t) + self.values[idx] * t
    }

    /// Rescale values so the trapezoidal mass is exactly 1.
    pub fn renormalized(mut self) -> Result<Self, GridError> {
        let mass = self.mass();
        if !(mass > 0.0) {
            return Err(GridError::BadValue(mass));
        }
        for v in &mut self.values {
            *v /= mass;
        }
        self.meta.normalized = true;
        Ok(self)
    }
}
