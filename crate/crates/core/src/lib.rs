//! Spectral viscosity solver for the two-dimensional incompressible Euler
//! equations on the periodic unit torus.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] — Fourier fields, FFTs, alias-free products, Biot–Savart.
//! * [`sv`] — the spectral viscosity right-hand side in velocity and
//!   vorticity form, its error decomposition and the parameter-regime check.
//! * [`initial`] — vortex sheets, confined eddies, Taylor–Green, mollifiers.
//! * [`integrator`] — SSP-RK3 with an adaptive CFL step.
//! * [`diagnostics`] — spectra, norms, dissipation rates.
//! * [`experiment`] — run configuration, snapshots, presets and studies.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod error;
pub mod experiment;
pub mod initial;
pub mod integrator;
pub mod spectral;
pub mod sv;

#[cfg(test)]
pub(crate) mod test_util;

pub use error::{Error, Result};
pub use spectral::{GridSpec, PhysicalField, SpectralField, VelocityField};
