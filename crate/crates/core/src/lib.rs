//! Spectral analysis of the quartic type (1,0) and (0,1) random matrix
//! geometries: closed-form large-N equilibrium measures, the one-cut/two-cut
//! phase transition at g_c = −5√2/2, the Dirac-operator density of states,
//! and an independent finite-N Metropolis Coulomb-gas sampler that
//! cross-checks every analytic formula.
//!
//! Modules:
//! - [`model`]: the quartic actions in matrix-trace and eigenvalue form.
//! - [`equilibrium`]: phase classification, endpoints, densities, moments.
//! - [`saddle`]: resolvent, principal-value transform, residues at infinity,
//!   moment/normalization conditions and the energy functional.
//! - [`dos`]: density of states of the Dirac operator by self-convolution.
//! - [`mcmc`]: finite-N Metropolis sampler of the eigenvalue ensemble.
//! - [`cli`]: command-line surface with reproducible run manifests.

pub mod cli;
pub mod dos;
pub mod equilibrium;
pub mod grid;
pub mod mcmc;
pub mod model;
pub mod quad;
pub mod saddle;
pub mod stats;

pub use equilibrium::{EquilibriumMeasure, Phase};
pub use grid::DensityGrid;
pub use model::{ModelKind, ModelSpec, SaddleVariant};
