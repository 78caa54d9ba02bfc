//! Quartic actions of the type (1,0) and (0,1) single-matrix geometries, in
//! matrix-trace and eigenvalue form.
//!
//! Both ensembles share the single-trace potential `V(s) = 2g s² + 2 s⁴`;
//! they differ only in the sign of the odd terms of the bitracial kernel
//! `U(s,t)`. The eigenvalue action is the negative log-density of the joint
//! eigenvalue distribution, up to an overall constant that is never needed:
//! only action differences enter the sampler.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Which of the two geometries the ensemble describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelKind {
    /// Dirac operator built from an anticommutator with a Hermitian matrix.
    TypeOneZero,
    /// Dirac operator built from a commutator with an anti-Hermitian matrix.
    TypeZeroOne,
}

impl ModelKind {
    /// Sign of the odd kernel terms: +1 for (1,0), -1 for (0,1).
    pub fn odd_sign(self) -> f64 {
        match self {
            ModelKind::TypeOneZero => 1.0,
            ModelKind::TypeZeroOne => -1.0,
        }
    }
}

/// Which coefficient convention the saddle-point machinery uses for the
/// quadratic interaction term (see the `saddle` module).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum SaddleVariant {
    /// Interaction coefficient 6 on m₂ in the linear saddle coefficient.
    #[default]
    Paper,
    /// Interaction coefficient 12, from symmetrizing the quadratic
    /// functional derivative of the double-trace term.
    Symmetrized,
}

/// Full specification of one ensemble: which geometry, at which coupling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub kind: ModelKind,
    pub g: f64,
    pub variant: SaddleVariant,
}

impl ModelSpec {
    pub fn new(kind: ModelKind, g: f64) -> Result<Self, ModelError> {
        if !g.is_finite() {
            return Err(ModelError::NonFiniteCoupling(g));
        }
        Ok(Self {
            kind,
            g,
            variant: SaddleVariant::default(),
        })
    }

    pub fn with_variant(mut self, variant: SaddleVariant) -> Self {
        self.variant = variant;
        self
    }
}

/// A point in eigenvalue space: N ≥ 2 pairwise-considered eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueConfig {
    lambdas: Vec<f64>,
}

impl EigenvalueConfig {
    pub fn new(lambdas: Vec<f64>) -> Result<Self, ModelError> {
        if lambdas.len() < 2 {
            return Err(ModelError::TooFewEigenvalues(lambdas.len()));
        }
        if lambdas.iter().any(|l| !l.is_finite()) {
            return Err(ModelError::NonFiniteEigenvalue);
        }
        Ok(Self { lambdas })
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn n(&self) -> usize {
        self.lambdas.len()
    }
}

/// Power sums p_m = Σ λ_i^m for m = 1..4; everything bitracial reduces to these.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PowerSums {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p4: f64,
}

impl PowerSums {
    pub fn of(lambdas: &[f64]) -> Self {
        let mut p = PowerSums::default();
        for &l in lambdas {
            let l2 = l * l;
            p.p1 += l;
            p.p2 += l2;
            p.p3 += l2 * l;
            p.p4 += l2 * l2;
        }
        p
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("coupling constant must be finite, got {0}")]
    NonFiniteCoupling(f64),
    #[error("need at least 2 eigenvalues, got {0}")]
    TooFewEigenvalues(usize),
    #[error("eigenvalues must be finite")]
    NonFiniteEigenvalue,
    #[error("degenerate configuration: eigenvalues {i} and {j} coincide")]
    DegenerateConfiguration { i: usize, j: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: max |H - H*| entry deviation {deviation:e} exceeds 1e-12")]
    NotHermitian { deviation: f64 },
}

/// Single-trace potential `V(s) = 2g s² + 2 s⁴` (identical for both kinds).
pub fn potential(s: f64, spec: &ModelSpec) -> f64 {
    let s2 = s * s;
    2.0 * spec.g * s2 + 2.0 * s2 * s2
}

/// Bitracial kernel `U(s,t) = ±2g st ± 8 s t³ + 6 s² t²`, sign by kind.
pub fn interaction_kernel(s: f64, t: f64, spec: &ModelSpec) -> f64 {
    let sign = spec.kind.odd_sign();
    sign * (2.0 * spec.g * s * t + 8.0 * s * t * t * t) + 6.0 * s * s * t * t
}

/// Σ_{i,j} U(λ_i, λ_j) over all ordered pairs (diagonal included), evaluated
/// through power sums in O(1): ±(2g p₁² + 8 p₁ p₃) + 6 p₂².
pub fn interaction_sum(p: &PowerSums, spec: &ModelSpec) -> f64 {
    let sign = spec.kind.odd_sign();
    sign * (2.0 * spec.g * p.p1 * p.p1 + 8.0 * p.p1 * p.p3) + 6.0 * p.p2 * p.p2
}

/// Negative log-density of the joint eigenvalue distribution, up to its
/// normalization constant:
///
/// `N Σ V(λ_i) + Σ_{ij} U(λ_i, λ_j) − 2 Σ_{i<j} ln|λ_i − λ_j|`.
pub fn action_eigenvalues(cfg: &EigenvalueConfig, spec: &ModelSpec) -> Result<f64, ModelError> {
    let lambdas = cfg.lambdas();
    let n = cfg.n();
    let mut v_sum = 0.0;
    for &l in lambdas {
        v_sum += potential(l, spec);
    }
    let u_sum = interaction_sum(&PowerSums::of(lambdas), spec);
    let mut log_sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            let d = lambdas[i] - lambdas[j];
            if d == 0.0 {
                return Err(ModelError::DegenerateConfiguration { i, j });
            }
            log_sum += d.abs().ln();
        }
    }
    Ok(n as f64 * v_sum + u_sum - 2.0 * log_sum)
}

/// Trace form of the action, for a Hermitian matrix:
///
/// (1,0): `2N(g tr H² + tr H⁴) + 2g (tr H)² + 8 tr H tr H³ + 6 (tr H²)²`,
/// (0,1): same with the sign of the two odd-trace products flipped.
///
/// Equals the trace part of [`action_eigenvalues`] on the spectrum of `H`
/// (the Vandermonde term is not part of the matrix-space action).
pub fn dirac_action_matrix(h: &DMatrix<Complex64>, spec: &ModelSpec) -> Result<f64, ModelError> {
    if h.nrows() != h.ncols() {
        return Err(ModelError::NotSquare {
            rows: h.nrows(),
            cols: h.ncols(),
        });
    }
    let mut deviation: f64 = 0.0;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            deviation = deviation.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    if deviation > 1e-12 {
        return Err(ModelError::NotHermitian { deviation });
    }
    let n = h.nrows() as f64;
    let h2 = h * h;
    let t1 = h.diagonal().iter().map(|z| z.re).sum::<f64>();
    let t2 = h2.diagonal().iter().map(|z| z.re).sum::<f64>();
    let t3 = (&h2 * h).diagonal().iter().map(|z| z.re).sum::<f64>();
    let t4 = (&h2 * &h2).diagonal().iter().map(|z| z.re).sum::<f64>();
    let sign = spec.kind.odd_sign();
    Ok(2.0 * n * (spec.g * t2 + t4) + sign * (2.0 * spec.g * t1 * t1 + 8.0 * t1 * t3)
        + 6.0 * t2 * t2)
}
