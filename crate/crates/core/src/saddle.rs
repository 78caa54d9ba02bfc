//! Saddle-point machinery: closed-form resolvent with branch handling,
//! residues at infinity, moment/normalization conditions, the principal-value
//! transform used to verify the saddle equation, and the energy functional.
//!
//! Sign conventions. The saddle equation is written with the kernel
//! 1/(x−y): `P.V.∫ Ψ(y)/(x−y) dy = A x + B x³` on the support, with
//! `A = 2g + c·m₂` and B = 4; this is the convention under which the
//! classical semicircle sanity check comes out positive. The coefficient c
//! is 6 under the default convention and 12 when the quadratic functional
//! derivative of the double-trace term is symmetrized; both are carried side
//! by side so the finite-N sampler can discriminate them empirically.

use crate::equilibrium::{self, EquilibriumError, EquilibriumMeasure, Phase};
use crate::grid::DensityGrid;
use crate::model::{ModelSpec, SaddleVariant};
use crate::quad::GaussLegendre;
use num_complex::Complex64;
use thiserror::Error;

/// Nodes for the principal-value and resolvent quadratures.
const PV_NODES: usize = 256;

#[derive(Debug, Error)]
pub enum SaddleError {
    #[error("residue exponent must lie in 1..=7, got {0}")]
    AlphaOutOfRange(u32),
    #[error("z = {z} is within 1e-12 of the support; request a boundary side explicitly")]
    BranchAmbiguity { z: Complex64 },
    #[error("x = {x} is not in the open interior of the support")]
    OutsideSupport { x: f64 },
    #[error("density grid is not a probability density: mass = {mass}")]
    Unnormalized { mass: f64 },
    #[error(transparent)]
    Equilibrium(#[from] EquilibriumError),
}

/// Coefficients of the effective quartic saddle potential
/// `J(s) = (A/2)s² + (B/4)s⁴`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleCoefficients {
    /// Linear coefficient A = 2g + c·m₂.
    pub lin: f64,
    /// Cubic coefficient B (4 for both models in scope).
    pub cubic: f64,
    /// Interaction coefficient c multiplying m₂.
    pub c_sym: f64,
}

impl SaddleCoefficients {
    pub fn for_measure(mu: &EquilibriumMeasure, spec: &ModelSpec) -> Self {
        let c_sym = interaction_coefficient(spec.variant);
        Self {
            lin: 2.0 * spec.g + c_sym * mu.m2(),
            cubic: mu.cubic_coeff(),
            c_sym,
        }
    }
}

/// Interaction coefficient c of a variant.
pub fn interaction_coefficient(variant: SaddleVariant) -> f64 {
    match variant {
        SaddleVariant::Paper => 6.0,
        SaddleVariant::Symmetrized => 12.0,
    }
}

/// Critical coupling of a variant: −√2 (c+4)/4.
pub fn critical_coupling(variant: SaddleVariant) -> f64 {
    equilibrium::critical_coupling_general(interaction_coefficient(variant))
}

/// m₂ of the variant's own equilibrium measure at coupling g.
pub fn predicted_m2(g: f64, variant: SaddleVariant) -> Result<f64, SaddleError> {
    let c = interaction_coefficient(variant);
    Ok(equilibrium::solve_with_interaction_coeff(g, c)?.m2())
}

/// Residue at infinity of `s^α / √((s²−a²)(s²−b²)) · 1/(s−z)`, as a
/// polynomial in z of degree α−2 (identically zero for α = 1).
#[derive(Debug, Clone, PartialEq)]
pub struct ResiduePolynomial {
    coeffs: [f64; 6],
}

impl ResiduePolynomial {
    /// Coefficient of z^q.
    pub fn coeff(&self, q: usize) -> f64 {
        if q < self.coeffs.len() {
            self.coeffs[q]
        } else {
            0.0
        }
    }

    pub fn coeffs(&self) -> &[f64; 6] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|&c| c != 0.0)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }
}

/// Collect the s⁻¹ terms of the double binomial expansion of
/// `s^α (1 − a²/s²)^{−1/2} (1 − b²/s²)^{−1/2} s⁻¹ Σ (z/s)^q`:
/// the coefficient of z^q is `Σ_{k+j=(α−2−q)/2} c_k c_j a^{2k} b^{2j}`
/// with c_k = (2k−1)!!/(2k)!!.
pub fn residue_at_infinity(alpha: u32, a: f64, b: f64) -> Result<ResiduePolynomial, SaddleError> {
    if !(1..=7).contains(&alpha) {
        return Err(SaddleError::AlphaOutOfRange(alpha));
    }
    // c_k are dyadic rationals, exact in binary floating point.
    let mut c = [0.0f64; 4];
    c[0] = 1.0;
    for k in 1..4 {
        c[k] = c[k - 1] * (2.0 * k as f64 - 1.0) / (2.0 * k as f64);
    }
    let (a2, b2) = (a * a, b * b);
    let mut coeffs = [0.0f64; 6];
    if alpha >= 2 {
        for q in 0..=(alpha - 2) as usize {
            let rem = (alpha - 2) as usize - q;
            if rem % 2 != 0 {
                continue;
            }
            let m = rem / 2;
            let mut sum = 0.0;
            for k in 0..=m {
                sum += c[k] * c[m - k] * a2.powi(k as i32) * b2.powi((m - k) as i32);
            }
            coeffs[q] = sum;
        }
    }
    Ok(ResiduePolynomial { coeffs })
}

/// Which side of the support a boundary value is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Above,
    Below,
}

/// √(z² − 4a²), analytic off [−2a, 2a] and ~ z at infinity.
fn sqrt_one_cut(z: Complex64, a: f64) -> Complex64 {
    (z - 2.0 * a).sqrt() * (z + 2.0 * a).sqrt()
}

/// √((z²−a²)(z²−b²)), analytic off the two cuts and ~ z² at infinity;
/// negative real in the gap (−b, b), positive real beyond ±a.
fn sqrt_two_cut(z: Complex64, a: f64, b: f64) -> Complex64 {
    (z - a).sqrt() * (z + a).sqrt() * (z - b).sqrt() * (z + b).sqrt()
}

fn distance_to_support(mu: &EquilibriumMeasure, z: Complex64) -> f64 {
    let mut dist = f64::INFINITY;
    for (lo, hi) in mu.support() {
        let dx = if z.re < lo {
            lo - z.re
        } else if z.re > hi {
            z.re - hi
        } else {
            0.0
        };
        dist = dist.min((dx * dx + z.im * z.im).sqrt());
    }
    dist
}

/// Stieltjes transform `W(z) = ∫ Ψ(s)/(s−z) ds` in closed form, branch fixed
/// by W(z) → −1/z at infinity.
///
/// One-cut: `−[Az + Bz³ − (A + 2Ba² + Bz²)√(z² − 4a²)]`;
/// two-cut: `−[Az + Bz³ − Bz√((z²−a²)(z²−b²))]`.
pub fn stieltjes(mu: &EquilibriumMeasure, z: Complex64) -> Result<Complex64, SaddleError> {
    if distance_to_support(mu, z) < 1e-12 {
        return Err(SaddleError::BranchAmbiguity { z });
    }
    Ok(stieltjes_unchecked(mu, z))
}

fn stieltjes_unchecked(mu: &EquilibriumMeasure, z: Complex64) -> Complex64 {
    let (lin, cubic) = (mu.lin_coeff(), mu.cubic_coeff());
    match mu.phase() {
        Phase::OneCut | Phase::Critical => {
            let a = mu.a();
            let root = sqrt_one_cut(z, a);
            let coeff = lin + 2.0 * cubic * a * a + cubic * z * z;
            -(lin * z + cubic * z * z * z - coeff * root)
        }
        Phase::TwoCut => {
            let root = sqrt_two_cut(z, mu.a(), mu.b());
            -(lin * z + cubic * z * z * z - cubic * z * root)
        }
    }
}

/// Boundary value `W±(x) = lim_{ε→0⁺} W(x ± iε)`.
///
/// On the support this carries the Plemelj jump `Im W±(x) = ±πΨ(x)`; off the
/// support it coincides with the real closed form.
pub fn stieltjes_boundary(mu: &EquilibriumMeasure, x: f64, side: Side) -> Complex64 {
    let on_support = mu.support().iter().any(|&(lo, hi)| x >= lo && x <= hi);
    if !on_support {
        return stieltjes_unchecked(mu, Complex64::new(x, 0.0));
    }
    let sign = match side {
        Side::Above => 1.0,
        Side::Below => -1.0,
    };
    let (lin, cubic) = (mu.lin_coeff(), mu.cubic_coeff());
    let real_part = -(lin * x + cubic * x * x * x);
    match mu.phase() {
        Phase::OneCut | Phase::Critical => {
            let a = mu.a();
            let rad = (4.0 * a * a - x * x).max(0.0).sqrt();
            let coeff = lin + 2.0 * cubic * a * a + cubic * x * x;
            Complex64::new(real_part, sign * coeff * rad)
        }
        Phase::TwoCut => {
            let (a, b) = (mu.a(), mu.b());
            let rad = ((a * a - x * x) * (x * x - b * b)).max(0.0).sqrt();
            // √p(x ± i0) = ± i sign(x) √|p| on the cuts, so the jump term
            // B z √p contributes ± i B |x| √|p|.
            Complex64::new(real_part, sign * cubic * x.abs() * rad)
        }
    }
}

/// Defining-integral evaluation of the Stieltjes transform by quadrature;
/// the independent cross-check for the closed form (z off the support).
pub fn stieltjes_quadrature(mu: &EquilibriumMeasure, z: Complex64) -> Complex64 {
    let rule = GaussLegendre::new(PV_NODES);
    let mut total = Complex64::new(0.0, 0.0);
    for (lo, hi) in mu.support() {
        let re = rule.integrate_sqrt_edges(lo, hi, |s| {
            (mu.density(s) / (Complex64::new(s, 0.0) - z)).re
        });
        let im = rule.integrate_sqrt_edges(lo, hi, |s| {
            (mu.density(s) / (Complex64::new(s, 0.0) - z)).im
        });
        total += Complex64::new(re, im);
    }
    total
}

/// `P.V.∫ Ψ(s)/(s−x) ds` for x in the open interior of the support, by
/// singularity subtraction on the containing cut:
///
/// `∫ (Ψ(s) − Ψ(x))/(s−x) ds + Ψ(x)·ln((edge⁺−x)/(x−edge⁻))`,
///
/// plus the regular contribution of the other cut in the two-cut phase.
/// Deliberately independent of the closed-form resolvent.
pub fn principal_value_transform(mu: &EquilibriumMeasure, x: f64) -> Result<f64, SaddleError> {
    let support = mu.support();
    let containing = support
        .iter()
        .copied()
        .find(|&(lo, hi)| x > lo && x < hi)
        .ok_or(SaddleError::OutsideSupport { x })?;
    // Symmetric measure, odd integrand: exactly zero at the origin.
    if x == 0.0 {
        return Ok(0.0);
    }
    let rule = GaussLegendre::new(PV_NODES);
    let (lo, hi) = containing;
    let psi_x = mu.density(x);
    let mut value = rule.integrate_sqrt_edges(lo, hi, |s| {
        if s == x {
            0.0
        } else {
            (mu.density(s) - psi_x) / (s - x)
        }
    });
    value += psi_x * ((hi - x) / (x - lo)).ln();
    for &(lo2, hi2) in &support {
        if (lo2, hi2) != containing {
            value += rule.integrate_sqrt_edges(lo2, hi2, |s| mu.density(s) / (s - x));
        }
    }
    Ok(value)
}

/// Residual of the saddle-point equation at x:
/// `P.V.∫ Ψ(y)/(x−y) dy − (A x + B x³)` with `A = 2g + c·m₂(μ)`.
///
/// Vanishes (≤ 1e-8) across the support interior for solved measures under
/// the default variant.
pub fn saddle_residual(
    mu: &EquilibriumMeasure,
    spec: &ModelSpec,
    x: f64,
) -> Result<f64, SaddleError> {
    let pv = principal_value_transform(mu, x)?;
    let coeffs = SaddleCoefficients::for_measure(mu, spec);
    Ok(-pv - (coeffs.lin * x + coeffs.cubic * x * x * x))
}

/// Residuals of the endpoint conditions of the two-cut solution:
/// r0 — the j = 0 moment condition (identically zero by symmetry),
/// r1 — the j = 1 moment condition `a² + b² + 2A/B`,
/// r2 — the normalization `(2B/16)(a²−b²)² − 1`, with the factor consistent
/// with the unit-mass density.
pub fn condition_residuals(a: f64, b: f64, coeffs: &SaddleCoefficients) -> (f64, f64, f64) {
    let (a2, b2) = (a * a, b * b);
    let r1 = a2 + b2 + 2.0 * coeffs.lin / coeffs.cubic;
    let r2 = 2.0 * coeffs.cubic / 16.0 * (a2 - b2) * (a2 - b2) - 1.0;
    (0.0, r1, r2)
}

/// Energy functional `I(μ) = ∫V dμ + ∫∫U dμ dμ − ∫∫ ln|s−t| dμ dμ` of a
/// sampled density under the model's potential and kernel.
///
/// The grid is treated as a piecewise-linear density. The bitracial term
/// reduces to moments of the interpolant; the logarithmic term integrates
/// the inner factor in closed form per cell, so the singularity never meets
/// a quadrature node.
pub fn energy(grid: &DensityGrid, spec: &ModelSpec) -> Result<f64, SaddleError> {
    let v_term = energy_potential_term(grid, |x| crate::model::potential(x, spec))?;
    let sign = spec.kind.odd_sign();
    let m1 = interpolant_moment(grid, 1);
    let m2 = interpolant_moment(grid, 2);
    let m3 = interpolant_moment(grid, 3);
    let u_term = sign * (2.0 * spec.g * m1 * m1 + 8.0 * m1 * m3) + 6.0 * m2 * m2;
    Ok(v_term + u_term - log_energy(grid))
}

/// Energy functional with an arbitrary external potential and no bitracial
/// term (the classical log-gas case, used as an oracle).
pub fn energy_with_potential<V: Fn(f64) -> f64>(
    grid: &DensityGrid,
    v: V,
) -> Result<f64, SaddleError> {
    Ok(energy_potential_term(grid, v)? - log_energy(grid))
}

fn energy_potential_term<V: Fn(f64) -> f64>(grid: &DensityGrid, v: V) -> Result<f64, SaddleError> {
    let mass = grid.mass();
    if (mass - 1.0).abs() > 1e-6 {
        return Err(SaddleError::Unnormalized { mass });
    }
    let rule = GaussLegendre::new(8);
    let xs = grid.xs();
    let ys = grid.values();
    let mut total = 0.0;
    for i in 1..xs.len() {
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (ys[i - 1], ys[i]);
        total += rule.integrate(x0, x1, |x| {
            let t = (x - x0) / (x1 - x0);
            v(x) * (y0 * (1.0 - t) + y1 * t)
        });
    }
    Ok(total)
}

/// k-th moment of the piecewise-linear interpolant.
fn interpolant_moment(grid: &DensityGrid, k: i32) -> f64 {
    let rule = GaussLegendre::new(8);
    let xs = grid.xs();
    let ys = grid.values();
    let mut total = 0.0;
    for i in 1..xs.len() {
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (ys[i - 1], ys[i]);
        total += rule.integrate(x0, x1, |x| {
            let t = (x - x0) / (x1 - x0);
            x.powi(k) * (y0 * (1.0 - t) + y1 * t)
        });
    }
    total
}

/// ∫∫ ln|s−t| ψ(s)ψ(t) ds dt for the piecewise-linear interpolant ψ.
///
/// Inner integral in closed form per cell (antiderivatives of ln|u| and
/// u·ln|u| are continuous through u = 0), outer integral by per-cell Gauss
/// nodes, which never coincide with the kinks at cell boundaries.
fn log_energy(grid: &DensityGrid) -> f64 {
    let xs = grid.xs();
    let ys = grid.values();
    let n = xs.len();
    // ψ(t) = α_i + β_i t on cell i.
    let mut alphas = Vec::with_capacity(n - 1);
    let mut betas = Vec::with_capacity(n - 1);
    for i in 1..n {
        let beta = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]);
        alphas.push(ys[i - 1] - beta * xs[i - 1]);
        betas.push(beta);
    }
    fn f0(u: f64) -> f64 {
        if u == 0.0 {
            0.0
        } else {
            u * u.abs().ln() - u
        }
    }
    fn f1(u: f64) -> f64 {
        if u == 0.0 {
            0.0
        } else {
            0.5 * u * u * u.abs().ln() - 0.25 * u * u
        }
    }
    let inner = |s: f64| -> f64 {
        let mut acc = 0.0;
        for i in 0..n - 1 {
            let (u0, u1) = (xs[i] - s, xs[i + 1] - s);
            let coeff = alphas[i] + betas[i] * s;
            acc += coeff * (f0(u1) - f0(u0)) + betas[i] * (f1(u1) - f1(u0));
        }
        acc
    };
    let rule = GaussLegendre::new(8);
    let mut total = 0.0;
    for i in 1..n {
        let (x0, x1) = (xs[i - 1], xs[i]);
        let (y0, y1) = (ys[i - 1], ys[i]);
        total += rule.integrate(x0, x1, |s| {
            let t = (s - x0) / (x1 - x0);
            (y0 * (1.0 - t) + y1 * t) * inner(s)
        });
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibrium::solve;
    use crate::grid::DensityGrid;
    use crate::model::{ModelKind, ModelSpec};
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn spec(g: f64) -> ModelSpec {
        ModelSpec::new(ModelKind::TypeOneZero, g).unwrap()
    }

    #[test]
    fn residue_table_rows() {
        let (a, b) = (1.3, 0.7);
        let (a2, b2) = (a * a, b * b);
        let rows: [(u32, [f64; 6]); 7] = [
            (1, [0.0; 6]),
            (2, [1.0, 0.0, 0.0, 0.0, 0.0, 0.0]),
            (3, [0.0, 1.0, 0.0, 0.0, 0.0, 0.0]),
            (4, [0.5 * (a2 + b2), 0.0, 1.0, 0.0, 0.0, 0.0]),
            (5, [0.0, 0.5 * (a2 + b2), 0.0, 1.0, 0.0, 0.0]),
            (
                6,
                [
                    0.375 * (a2 * a2 + b2 * b2) + 0.25 * a2 * b2,
                    0.0,
                    0.5 * (a2 + b2),
                    0.0,
                    1.0,
                    0.0,
                ],
            ),
            (
                7,
                [
                    0.0,
                    0.25 * a2 * b2 + 0.375 * (a2 * a2 + b2 * b2),
                    0.0,
                    0.5 * (a2 + b2),
                    0.0,
                    1.0,
                ],
            ),
        ];
        for (alpha, expected) in rows {
            let poly = residue_at_infinity(alpha, a, b).unwrap();
            for q in 0..6 {
                assert_abs_diff_eq!(poly.coeff(q), expected[q], epsilon = 1e-15);
            }
        }
        // The rational constants are dyadic: exact equality at a = b = 1.
        let poly = residue_at_infinity(6, 1.0, 1.0).unwrap();
        assert_eq!(poly.coeff(0), 1.0);
        assert_eq!(poly.coeff(2), 1.0);
        assert_eq!(residue_at_infinity(4, 1.0, 1.0).unwrap().coeff(0), 1.0);
        assert!(residue_at_infinity(0, 1.0, 0.5).is_err());
        assert!(residue_at_infinity(8, 1.0, 0.5).is_err());
    }

    /// (1/2πi) ∮ s^α / (√((s²−a²)(s²−b²)) (s−z)) ds on a circle of radius r,
    /// by the trapezoid rule (spectrally accurate for periodic integrands).
    fn contour_residue(
        alpha: u32,
        a: f64,
        b: f64,
        z: Complex64,
        r: f64,
        nodes: usize,
    ) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..nodes {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / nodes as f64;
            let s = Complex64::from_polar(r, theta);
            sum += s.powu(alpha) / (sqrt_two_cut(s, a, b) * (s - z)) * s;
        }
        sum / nodes as f64
    }

    #[test]
    fn residues_match_contour_integrals() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..20 {
            let b = 0.05 + 1.2 * rng.random::<f64>();
            let a = b + 0.1 + (1.9 - b) * 0.9 * rng.random::<f64>();
            let z = Complex64::new(
                0.6 * a * (rng.random::<f64>() - 0.5),
                0.6 * a * (rng.random::<f64>() - 0.5),
            );
            for alpha in 1..=7u32 {
                let poly = residue_at_infinity(alpha, a, b).unwrap();
                let numeric = contour_residue(alpha, a, b, z, 3.0 * a, 2048);
                let exact = poly.eval(z);
                let scale = exact.norm().max(1.0);
                assert!(
                    (numeric - exact).norm() <= 1e-9 * scale,
                    "alpha={alpha} a={a} b={b} z={z}: contour {numeric} vs series {exact}"
                );
            }
        }
    }

    #[test]
    fn stieltjes_matches_quadrature_and_asymptotics() {
        for g in [2.0, 0.0, -5.0] {
            let mu = solve(g).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(5);
            for _ in 0..40 {
                let z = Complex64::new(
                    4.0 * (rng.random::<f64>() - 0.5),
                    0.1 + 3.0 * rng.random::<f64>(),
                );
                let closed = stieltjes(&mu, z).unwrap();
                let quad = stieltjes_quadrature(&mu, z);
                assert!(
                    (closed - quad).norm() <= 1e-8,
                    "g={g}, z={z}: closed {closed} vs quadrature {quad}"
                );
                // Schwarz reflection.
                let reflected = stieltjes(&mu, z.conj()).unwrap();
                assert!((reflected - closed.conj()).norm() <= 1e-12);
            }
            // z·W(z) → −1 with the O(m₂/z²) correction; the direct closed
            // form cancels catastrophically at huge |z|, so verify the rate
            // at moderate radii instead.
            let m2 = mu.m2();
            for r in [30.0, 120.0] {
                let z = Complex64::new(r, 1.0);
                let w = stieltjes(&mu, z).unwrap();
                let err = (z * w + 1.0).norm();
                assert!(
                    err <= 1.5 * m2 / (r * r) + 1e-9,
                    "g={g}, |z|={r}: |zW + 1| = {err:e}"
                );
            }
        }
        // Frozen value at g = 0, z = 10 (independent high-precision quadrature).
        let mu = solve(0.0).unwrap();
        let w10 = stieltjes(&mu, Complex64::new(10.0, 0.0)).unwrap();
        assert_abs_diff_eq!(w10.re, -0.10019535848413018, epsilon = 1e-12);
        assert_abs_diff_eq!(w10.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn stieltjes_rejects_points_on_the_support() {
        let mu = solve(0.0).unwrap();
        assert!(matches!(
            stieltjes(&mu, Complex64::new(0.1, 0.0)),
            Err(SaddleError::BranchAmbiguity { .. })
        ));
        assert!(stieltjes(&mu, Complex64::new(0.1, 1e-3)).is_ok());
    }

    #[test]
    fn boundary_values_satisfy_plemelj() {
        for g in [0.0, -5.0] {
            let mu = solve(g).unwrap();
            for (lo, hi) in mu.support() {
                for i in 1..10 {
                    let x = lo + (hi - lo) * i as f64 / 10.0;
                    let above = stieltjes_boundary(&mu, x, Side::Above);
                    let below = stieltjes_boundary(&mu, x, Side::Below);
                    assert_abs_diff_eq!(
                        above.im,
                        std::f64::consts::PI * mu.density(x),
                        epsilon = 1e-10
                    );
                    assert_abs_diff_eq!(above.re, below.re, epsilon = 1e-12);
                    assert_abs_diff_eq!(above.im, -below.im, epsilon = 1e-12);
                    // Boundary value continues the off-axis closed form.
                    let off = stieltjes(&mu, Complex64::new(x, 1e-9)).unwrap();
                    assert!((off - above).norm() <= 1e-6);
                }
            }
        }
    }

    #[test]
    fn principal_value_semicircle_oracle() {
        let a = 0.9;
        let mu = EquilibriumMeasure::semicircle(a).unwrap();
        for x in [-1.5, -0.6, 0.33, 1.1, 1.7] {
            let pv = principal_value_transform(&mu, x).unwrap();
            assert_abs_diff_eq!(pv, -x / (2.0 * a * a), epsilon = 1e-10);
        }
        assert_eq!(principal_value_transform(&mu, 0.0).unwrap(), 0.0);
        assert!(principal_value_transform(&mu, 2.5).is_err());
    }

    #[test]
    fn principal_value_matches_resolvent_boundary() {
        for g in [1.0, 0.0, -5.0] {
            let mu = solve(g).unwrap();
            for (lo, hi) in mu.support() {
                for i in 1..8 {
                    let x = lo + (hi - lo) * i as f64 / 8.0;
                    let pv = principal_value_transform(&mu, x).unwrap();
                    let re_w = stieltjes_boundary(&mu, x, Side::Above).re;
                    assert_abs_diff_eq!(pv, re_w, epsilon = 1e-8);
                }
            }
        }
        // Two-cut gap points are outside the support interior.
        let mu = solve(-5.0).unwrap();
        assert!(matches!(
            principal_value_transform(&mu, 0.0),
            Err(SaddleError::OutsideSupport { .. })
        ));
    }

    #[test]
    fn saddle_residual_vanishes_on_solved_measures() {
        let (g_c, _) = crate::equilibrium::critical_constants();
        for g in [2.0, 0.0, -2.0, g_c, -4.0, -5.0, -8.0] {
            let mu = solve(g).unwrap();
            let sp = spec(g);
            for (lo, hi) in mu.support() {
                for i in 0..10 {
                    let x = lo + (hi - lo) * (i as f64 + 0.5) / 10.0;
                    let r = saddle_residual(&mu, &sp, x).unwrap();
                    assert!(r.abs() <= 1e-8, "residual {r:e} at g={g}, x={x}");
                }
            }
        }
        // x = 0 is exact for one-cut measures.
        let mu = solve(0.0).unwrap();
        assert_eq!(saddle_residual(&mu, &spec(0.0), 0.0).unwrap(), 0.0);
        // The symmetrized variant does not annihilate the default solution.
        let sym = spec(0.0).with_variant(SaddleVariant::Symmetrized);
        let r = saddle_residual(&mu, &sym, 0.5).unwrap();
        assert!(r.abs() > 1e-3, "symmetrized residual unexpectedly small: {r}");
    }

    #[test]
    fn condition_residuals_vanish_at_two_cut_endpoints() {
        let g = -5.0;
        let mu = solve(g).unwrap();
        let coeffs = SaddleCoefficients::for_measure(&mu, &spec(g));
        assert_abs_diff_eq!(coeffs.lin, -4.0, epsilon = 1e-12);
        let (r0, r1, r2) = condition_residuals(mu.a(), mu.b(), &coeffs);
        assert_eq!(r0, 0.0);
        assert_abs_diff_eq!(r1, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r2, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn predicted_m2_by_variant() {
        assert_abs_diff_eq!(
            predicted_m2(-5.0, SaddleVariant::Paper).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // The symmetrized variant is still one-cut at g = −5, close to −g/8.
        let m2 = predicted_m2(-5.0, SaddleVariant::Symmetrized).unwrap();
        assert!((m2 - 0.625).abs() < 0.01, "m2 = {m2}");
        assert_abs_diff_eq!(
            predicted_m2(-8.0, SaddleVariant::Symmetrized).unwrap(),
            1.0,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            critical_coupling(SaddleVariant::Symmetrized),
            -4.0 * std::f64::consts::SQRT_2,
            epsilon = 1e-14
        );
    }

    fn semicircle_grid(points: usize) -> DensityGrid {
        let r = std::f64::consts::SQRT_2;
        let xs: Vec<f64> = (0..points)
            .map(|i| -r + 2.0 * r * i as f64 / (points - 1) as f64)
            .collect();
        let values: Vec<f64> = xs
            .iter()
            .map(|&x| (2.0 - x * x).max(0.0).sqrt() / std::f64::consts::PI)
            .collect();
        let meta = crate::grid::GridMeta {
            g: f64::NAN,
            phase: Phase::OneCut,
            points,
            normalized: false,
        };
        DensityGrid::new(xs, values, meta)
            .unwrap()
            .renormalized()
            .unwrap()
    }

    #[test]
    fn energy_semicircle_self_convergence_and_value() {
        // V = x², U ≡ 0: the equilibrium is the semicircle on [−√2, √2]
        // with energy 3/4 + ln(2)/2.
        let e256 = energy_with_potential(&semicircle_grid(256), |x| x * x).unwrap();
        let e512 = energy_with_potential(&semicircle_grid(512), |x| x * x).unwrap();
        assert!(
            (e256 - e512).abs() <= 1e-6,
            "grid self-convergence: {e256} vs {e512}"
        );
        let exact = 0.75 + 0.5 * 2.0f64.ln();
        assert_abs_diff_eq!(e512, exact, epsilon = 1e-6);
    }

    fn measure_grid(g: f64, points: usize) -> DensityGrid {
        let mu = solve(g).unwrap();
        let edge = mu.outer_edge() * 1.02;
        DensityGrid::from_measure(&mu, -edge, edge, points)
            .unwrap()
            .renormalized()
            .unwrap()
    }

    fn trial_grid(xs: Vec<f64>, values: Vec<f64>, meta: crate::grid::GridMeta) -> DensityGrid {
        let meta = crate::grid::GridMeta {
            normalized: false,
            ..meta
        };
        DensityGrid::new(xs, values, meta)
            .unwrap()
            .renormalized()
            .unwrap()
    }

    #[test]
    fn equilibrium_minimizes_energy() {
        for g in [0.0, -5.0] {
            let sp = spec(g);
            let base = measure_grid(g, 601);
            let e0 = energy(&base, &sp).unwrap();

            // Shifted by +0.1 (renormalized on the shifted support).
            let shifted = trial_grid(
                base.xs().iter().map(|x| x + 0.1).collect(),
                base.values().to_vec(),
                *base.meta(),
            );
            let e_shift = energy(&shifted, &sp).unwrap();
            assert!(e0 < e_shift, "g={g}: {e0} !< shifted {e_shift}");

            // Uniform density over the same span.
            let span = base.xs()[base.len() - 1] - base.xs()[0];
            let uniform = trial_grid(
                base.xs().to_vec(),
                vec![1.0 / span; base.len()],
                *base.meta(),
            );
            let e_uni = energy(&uniform, &sp).unwrap();
            assert!(e0 < e_uni, "g={g}: {e0} !< uniform {e_uni}");

            // Bump-reweighted perturbations.
            for k in 0..10 {
                let center = -1.0 + 0.2 * k as f64;
                let eps = 0.15 + 0.02 * k as f64;
                let values: Vec<f64> = base
                    .xs()
                    .iter()
                    .zip(base.values())
                    .map(|(&x, &y)| y * (1.0 + eps * (-((x - center) / 0.3).powi(2)).exp()))
                    .collect();
                let pert = trial_grid(base.xs().to_vec(), values, *base.meta());
                let e_pert = energy(&pert, &sp).unwrap();
                assert!(e0 < e_pert, "g={g}, bump {k}: {e0} !< perturbed {e_pert}");
            }
        }
    }

    #[test]
    fn energy_rejects_unnormalized_grids() {
        let base = measure_grid(0.0, 101);
        let doubled = DensityGrid::new(
            base.xs().to_vec(),
            base.values().iter().map(|v| 2.0 * v).collect(),
            crate::grid::GridMeta {
                normalized: false,
                ..*base.meta()
            },
        )
        .unwrap();
        assert!(matches!(
            energy(&doubled, &spec(0.0)),
            Err(SaddleError::Unnormalized { .. })
        ));
    }
}
