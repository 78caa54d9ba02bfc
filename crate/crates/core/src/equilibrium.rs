//! Closed-form large-N equilibrium measures of the quartic bitracial
//! ensembles: phase classification, support endpoints, densities, moments.
//!
//! One-cut phase (g > g_c): support [-2a, 2a] with
//! `Ψ(x) = (1/π)(1/(2a²) − Ba² + Bx²)√(4a² − x²)` and B = 4, where the
//! endpoint solves `g = −24a⁶ − 9a² + 1/(4a²)`.
//!
//! Two-cut phase (g < g_c): support [−a,−b] ∪ [b,a] with
//! `a² = −g/5 + √2/2`, `b² = −g/5 − √2/2` and
//! `Ψ(x) = norm_coeff · |x| √((a²−x²)(x²−b²))`. The prefactor is fixed by
//! unit total mass, which evaluates to 4/π at these endpoints.
//!
//! The transition sits at `g_c = −5√2/2`, `a_c = 8^{−1/4}`, where both
//! branches degenerate to the same density `(4/π) x² √(√2 − x²)`.

use crate::model::ModelSpec;
use crate::quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Cubic saddle coefficient shared by both models.
pub const CUBIC_COEFF: f64 = 4.0;

/// Interaction coefficient multiplying m₂ in the linear saddle coefficient
/// for the default convention.
pub(crate) const PAPER_C_SYM: f64 = 6.0;

/// Width of the window around g_c classified as critical.
const CRITICAL_TOL: f64 = 1e-14;

/// Default number of Gauss-Legendre nodes for density quadrature.
const QUAD_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Phase {
    OneCut,
    TwoCut,
    Critical,
}

impl std::fmt::Display for Phase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Phase::OneCut => write!(f, "OneCut"),
            Phase::TwoCut => write!(f, "TwoCut"),
            Phase::Critical => write!(f, "Critical"),
        }
    }
}

#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error("endpoint parameter must be positive, got {0}")]
    DomainEndpoint(f64),
    #[error("two-cut endpoints require g <= g_c = {g_c}; got g = {g} (use the one-cut branch)")]
    PhaseDomain { g: f64, g_c: f64 },
    #[error("endpoint solve did not converge: residual {residual:e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },
    #[error(
        "one-cut density dips negative for g below g_c (coefficient {alpha:e}); \
         use the two-cut branch or the forced constructor"
    )]
    NegativeDensity { alpha: f64 },
    #[error("invalid density parameters: {0}")]
    InvalidParameters(String),
}

/// (g_c, a_c) = (−5√2/2, 8^{−1/4}).
pub fn critical_constants() -> (f64, f64) {
    let g_c = -2.5 * std::f64::consts::SQRT_2;
    let a_c = 1.0 / 8.0_f64.sqrt().sqrt();
    (g_c, a_c)
}

/// The coupling that puts the one-cut endpoint at `a`:
/// `g = −24a⁶ − 9a² + 1/(4a²)`.
pub fn coupling_from_endpoint(a: f64) -> Result<f64, EquilibriumError> {
    coupling_from_endpoint_general(a, PAPER_C_SYM)
}

/// Same map for a general interaction coefficient c:
/// `g = −4c a⁶ − ((c+12)/2) a² + 1/(4a²)`; c = 6 recovers the default.
pub(crate) fn coupling_from_endpoint_general(a: f64, c_sym: f64) -> Result<f64, EquilibriumError> {
    if !(a > 0.0) {
        return Err(EquilibriumError::DomainEndpoint(a));
    }
    let a2 = a * a;
    let a6 = a2 * a2 * a2;
    Ok(-4.0 * c_sym * a6 - 0.5 * (c_sym + 12.0) * a2 + 1.0 / (4.0 * a2))
}

fn coupling_derivative_general(a: f64, c_sym: f64) -> f64 {
    let a2 = a * a;
    -24.0 * c_sym * a2 * a2 * a - (c_sym + 12.0) * a - 1.0 / (2.0 * a2 * a)
}

/// Positive root of `coupling_from_endpoint(a) = g`.
///
/// The map is strictly decreasing on a > 0, so the root is unique; a
/// bisection bracket on [1e-6, 10] is refined by Newton until the residual
/// in g drops below `tol`.
pub fn solve_endpoint_one_cut(g: f64, tol: f64) -> Result<f64, EquilibriumError> {
    solve_endpoint_one_cut_general(g, PAPER_C_SYM, tol)
}

pub(crate) fn solve_endpoint_one_cut_general(
    g: f64,
    c_sym: f64,
    tol: f64,
) -> Result<f64, EquilibriumError> {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut lo = 1e-6;
    let mut hi = 10.0;
    let residual_at = |a: f64| coupling_from_endpoint_general(a, c_sym).unwrap() - g;
    if residual_at(lo) < 0.0 || residual_at(hi) > 0.0 {
        return Err(EquilibriumError::NonConvergence {
            residual: residual_at(lo).min(-residual_at(hi)),
            iterations: 0,
        });
    }
    // Bisection until the bracket is tight enough for Newton.
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if residual_at(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut a = 0.5 * (lo + hi);
    for iteration in 0..64 {
        let r = residual_at(a);
        if r.abs() <= tol {
            return Ok(a);
        }
        let next = a - r / coupling_derivative_general(a, c_sym);
        if next.is_finite() && next > 0.0 {
            a = next;
        } else {
            return Err(EquilibriumError::NonConvergence {
                residual: r,
                iterations: iteration,
            });
        }
    }
    let r = residual_at(a);
    if r.abs() <= tol {
        Ok(a)
    } else {
        Err(EquilibriumError::NonConvergence {
            residual: r,
            iterations: 64,
        })
    }
}

/// Two-cut support edges (a, b) with `a² = −g/5 + √2/2`, `b² = −g/5 − √2/2`.
pub fn endpoints_two_cut(g: f64) -> Result<(f64, f64), EquilibriumError> {
    endpoints_two_cut_general(g, PAPER_C_SYM)
}

pub(crate) fn endpoints_two_cut_general(
    g: f64,
    c_sym: f64,
) -> Result<(f64, f64), EquilibriumError> {
    let g_c = critical_coupling_general(c_sym);
    if g > g_c + CRITICAL_TOL {
        return Err(EquilibriumError::PhaseDomain { g, g_c });
    }
    let m2 = -2.0 * g / (4.0 + c_sym);
    let half_gap = 0.5 * std::f64::consts::SQRT_2;
    let a2 = m2 + half_gap;
    let mut b2 = m2 - half_gap;
    // Exactly at criticality b² vanishes; absorb the last-ulp negative.
    if b2 < 0.0 && b2 > -1e-13 {
        b2 = 0.0;
    }
    if b2 < 0.0 {
        return Err(EquilibriumError::PhaseDomain { g, g_c });
    }
    Ok((a2.sqrt(), b2.sqrt()))
}

/// Critical coupling for a general interaction coefficient: −√2 (c+4)/4.
pub(crate) fn critical_coupling_general(c_sym: f64) -> f64 {
    -std::f64::consts::SQRT_2 * (c_sym + 4.0) / 4.0
}

/// OneCut for g > g_c, TwoCut for g < g_c, Critical within 1e-14 of g_c.
pub fn classify_phase(g: f64) -> Phase {
    let (g_c, _) = critical_constants();
    if (g - g_c).abs() <= CRITICAL_TOL {
        Phase::Critical
    } else if g > g_c {
        Phase::OneCut
    } else {
        Phase::TwoCut
    }
}

/// The large-N equilibrium measure: phase tag, support endpoints and density
/// coefficients. Everything downstream (density, moments, resolvent) is a
/// closed-form function of these fields.
#[derive(Debug, Clone, PartialEq)]
pub struct EquilibriumMeasure {
    phase: Phase,
    /// One-cut support is [−2a, 2a]; two-cut outer edge is a.
    a: f64,
    /// Two-cut inner edge; 0 and unused in the one-cut phase.
    b: f64,
    /// Linear saddle coefficient A, fixed by the endpoint condition
    /// 1/a = 2Aa + 6Ba³.
    lin_coeff: f64,
    /// Cubic saddle coefficient B (4 for the models in scope).
    cubic_coeff: f64,
    /// Two-cut density prefactor, fixed by unit mass; 0 in the one-cut phase.
    norm_coeff: f64,
    /// Coupling that produced the measure; NaN for hand-built diagnostics.
    g: f64,
}

impl EquilibriumMeasure {
    /// One-cut measure at endpoint `a` with the standard cubic coefficient.
    pub fn one_cut(a: f64, g: f64) -> Result<Self, EquilibriumError> {
        Self::one_cut_with_cubic(a, CUBIC_COEFF, g)
    }

    /// One-cut measure with an arbitrary cubic coefficient (B = 0 gives the
    /// semicircle). The linear coefficient comes from the endpoint condition.
    pub fn one_cut_with_cubic(a: f64, cubic: f64, g: f64) -> Result<Self, EquilibriumError> {
        if !(a > 0.0) {
            return Err(EquilibriumError::DomainEndpoint(a));
        }
        let alpha = 0.5 / (a * a) - cubic * a * a;
        if alpha < -1e-12 {
            return Err(EquilibriumError::NegativeDensity { alpha });
        }
        Ok(Self::one_cut_unchecked(a, cubic, g))
    }

    /// One-cut measure without the positivity check, for plotting the
    /// negative dip of the formal one-cut solution below g_c.
    pub fn one_cut_forced(a: f64, g: f64) -> Result<Self, EquilibriumError> {
        if !(a > 0.0) {
            return Err(EquilibriumError::DomainEndpoint(a));
        }
        Ok(Self::one_cut_unchecked(a, CUBIC_COEFF, g))
    }

    fn one_cut_unchecked(a: f64, cubic: f64, g: f64) -> Self {
        let lin = 0.5 / (a * a) - 3.0 * cubic * a * a;
        Self {
            phase: Phase::OneCut,
            a,
            b: 0.0,
            lin_coeff: lin,
            cubic_coeff: cubic,
            norm_coeff: 0.0,
            g,
        }
    }

    /// Unit-mass semicircle on [−2a, 2a] (diagnostic oracle measure).
    pub fn semicircle(a: f64) -> Result<Self, EquilibriumError> {
        Self::one_cut_with_cubic(a, 0.0, f64::NAN)
    }

    /// Two-cut measure on [−a,−b] ∪ [b,a]; the prefactor is computed by
    /// enforcing unit total mass through quadrature.
    pub fn two_cut(a: f64, b: f64, g: f64) -> Result<Self, EquilibriumError> {
        if !(a > 0.0) {
            return Err(EquilibriumError::DomainEndpoint(a));
        }
        if !(0.0..a).contains(&b) {
            return Err(EquilibriumError::InvalidParameters(format!(
                "two-cut edges need 0 <= b < a, got b = {b}, a = {a}"
            )));
        }
        let cubic = CUBIC_COEFF;
        let lin = -0.5 * cubic * (a * a + b * b);
        let raw_mass = two_cut_mass_integral(a, b, 1.0);
        if !(raw_mass > 0.0) {
            return Err(EquilibriumError::InvalidParameters(format!(
                "degenerate two-cut support: raw mass {raw_mass}"
            )));
        }
        Ok(Self {
            phase: Phase::TwoCut,
            a,
            b,
            lin_coeff: lin,
            cubic_coeff: cubic,
            norm_coeff: 1.0 / raw_mass,
            g,
        })
    }

    /// Equilibrium measure at coupling `g`; identical for both model kinds.
    pub fn solve(g: f64, _spec: &ModelSpec) -> Result<Self, EquilibriumError> {
        solve(g)
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn lin_coeff(&self) -> f64 {
        self.lin_coeff
    }

    pub fn cubic_coeff(&self) -> f64 {
        self.cubic_coeff
    }

    pub fn norm_coeff(&self) -> f64 {
        self.norm_coeff
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    /// Support intervals in increasing order.
    pub fn support(&self) -> Vec<(f64, f64)> {
        match self.phase {
            Phase::OneCut | Phase::Critical => vec![(-2.0 * self.a, 2.0 * self.a)],
            Phase::TwoCut => {
                if self.b == 0.0 {
                    vec![(-self.a, self.a)]
                } else {
                    vec![(-self.a, -self.b), (self.b, self.a)]
                }
            }
        }
    }

    /// Outer support edge (2a one-cut, a two-cut).
    pub fn outer_edge(&self) -> f64 {
        match self.phase {
            Phase::OneCut | Phase::Critical => 2.0 * self.a,
            Phase::TwoCut => self.a,
        }
    }

    /// Density Ψ(x); zero off the support.
    pub fn density(&self, x: f64) -> f64 {
        match self.phase {
            Phase::OneCut | Phase::Critical => {
                let a = self.a;
                let rad = 4.0 * a * a - x * x;
                if rad <= 0.0 {
                    return 0.0;
                }
                let alpha = 0.5 / (a * a) - self.cubic_coeff * a * a;
                (alpha + self.cubic_coeff * x * x) * rad.sqrt() / std::f64::consts::PI
            }
            Phase::TwoCut => {
                let x2 = x * x;
                let rad = (self.a * self.a - x2) * (x2 - self.b * self.b);
                if rad <= 0.0 {
                    return 0.0;
                }
                self.norm_coeff * x.abs() * rad.sqrt()
            }
        }
    }

    /// k-th moment of the measure. Odd moments vanish identically; even
    /// one-cut moments use the Catalan closed form
    /// `m_k = C_{k/2}(6k/(k+4) B a^{k+4} + a^k)`, even two-cut moments are
    /// computed by quadrature with the square-root edges substituted away.
    pub fn moment(&self, k: u32) -> f64 {
        if k % 2 == 1 {
            return 0.0;
        }
        match self.phase {
            Phase::OneCut | Phase::Critical => {
                let half = k / 2;
                let kf = k as f64;
                let coeff = if k == 0 { 0.0 } else { 6.0 * kf / (kf + 4.0) };
                catalan(half) * (coeff * self.cubic_coeff * self.a.powi(k as i32 + 4)
                    + self.a.powi(k as i32))
            }
            Phase::TwoCut => {
                let rule = GaussLegendre::new(QUAD_NODES);
                let half = k / 2;
                let (b2, a2) = (self.b * self.b, self.a * self.a);
                self.norm_coeff
                    * rule.integrate_sqrt_edges(b2, a2, |u| {
                        u.powi(half as i32) * ((a2 - u) * (u - b2)).max(0.0).sqrt()
                    })
            }
        }
    }

    /// Second moment: `2Ba⁶ + a²` one-cut, `−A/B` two-cut.
    pub fn m2(&self) -> f64 {
        match self.phase {
            Phase::OneCut | Phase::Critical => {
                let a2 = self.a * self.a;
                2.0 * self.cubic_coeff * a2 * a2 * a2 + a2
            }
            Phase::TwoCut => -self.lin_coeff / self.cubic_coeff,
        }
    }

    /// Total mass by quadrature (unit for valid measures; diagnostic).
    pub fn mass_quadrature(&self) -> f64 {
        match self.phase {
            Phase::OneCut | Phase::Critical => {
                let rule = GaussLegendre::new(QUAD_NODES);
                rule.integrate_sqrt_edges(-2.0 * self.a, 2.0 * self.a, |x| self.density(x))
            }
            Phase::TwoCut => two_cut_mass_integral(self.a, self.b, self.norm_coeff),
        }
    }
}

/// ∫ c·|x|√((a²−x²)(x²−b²)) dx over both cuts, via u = x² which removes both
/// the odd weight and the square-root edges.
fn two_cut_mass_integral(a: f64, b: f64, c: f64) -> f64 {
    let rule = GaussLegendre::new(QUAD_NODES);
    let (b2, a2) = (b * b, a * a);
    c * rule.integrate_sqrt_edges(b2, a2, |u| ((a2 - u) * (u - b2)).max(0.0).sqrt())
}

/// Equilibrium measure at coupling `g` (both model kinds coincide).
pub fn solve(g: f64) -> Result<EquilibriumMeasure, EquilibriumError> {
    solve_with_interaction_coeff(g, PAPER_C_SYM)
}

/// Equilibrium measure under a general interaction coefficient; c = 6 is the
/// default convention, c = 12 the symmetrized variant used as a cross-check
/// by the sampler experiments.
pub fn solve_with_interaction_coeff(
    g: f64,
    c_sym: f64,
) -> Result<EquilibriumMeasure, EquilibriumError> {
    let g_c = critical_coupling_general(c_sym);
    if g >= g_c - CRITICAL_TOL {
        let a = solve_endpoint_one_cut_general(g, c_sym, 1e-12)?;
        EquilibriumMeasure::one_cut(a, g)
    } else {
        let (a, b) = endpoints_two_cut_general(g, c_sym)?;
        EquilibriumMeasure::two_cut(a, b, g)
    }
}

/// Formal one-cut solution at any coupling, negative dip allowed; this is the
/// diagnostic curve showing the density crossing zero below g_c.
pub fn solve_one_cut_forced(g: f64) -> Result<EquilibriumMeasure, EquilibriumError> {
    let a = solve_endpoint_one_cut(g, 1e-12)?;
    EquilibriumMeasure::one_cut_forced(a, g)
}

/// Density of the general one-cut integral-equation solution
/// `Ψ(x) = (1/π)(A + 2Ba² + Bx²)√(4a² − x²)₊`.
///
/// Errors when the coefficient polynomial is negative somewhere on [−2a, 2a].
pub fn general_one_cut_density(
    lin: f64,
    cubic: f64,
    a: f64,
    x: f64,
) -> Result<f64, EquilibriumError> {
    if !(a > 0.0) {
        return Err(EquilibriumError::DomainEndpoint(a));
    }
    let at_center = lin + 2.0 * cubic * a * a;
    let at_edge = lin + 6.0 * cubic * a * a;
    if at_center.min(at_edge) < -1e-12 {
        return Err(EquilibriumError::InvalidParameters(format!(
            "density coefficient negative on support: min {:e}",
            at_center.min(at_edge)
        )));
    }
    let rad = 4.0 * a * a - x * x;
    if rad <= 0.0 {
        return Ok(0.0);
    }
    Ok((lin + 2.0 * cubic * a * a + cubic * x * x) * rad.sqrt() / std::f64::consts::PI)
}

/// Residual of the one-cut endpoint condition `1/a = 2Aa + 6Ba³`.
pub fn one_cut_side_condition_residual(lin: f64, cubic: f64, a: f64) -> f64 {
    1.0 / a - 2.0 * lin * a - 6.0 * cubic * a * a * a
}

/// C_n with C_0 = 1, C_{n+1} = C_n · 2(2n+1)/(n+2).
fn catalan(n: u32) -> f64 {
    let mut c = 1.0;
    for i in 0..n {
        c *= 2.0 * (2.0 * i as f64 + 1.0) / (i as f64 + 2.0);
    }
    c
}
