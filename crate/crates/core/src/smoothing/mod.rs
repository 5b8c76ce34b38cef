//! Smooth interpolation and subharmonic weights built from a dyadic
//! partition of unity.

mod cutoff;
mod grid;
mod interpolant;
mod potential;

pub use cutoff::{active_rho, chi_eval, cutoff, dbar_cutoff, dbar_rho, partition_rho, ChiValue};
pub use grid::{default_radius, GridSpec};
pub use interpolant::SmoothInterpolant;
pub use potential::{
    correction_g, eval_correction, fit_alpha, AlphaFit, Band, Potential, ALPHA_CAP, LAPLACIAN_TOL,
};
