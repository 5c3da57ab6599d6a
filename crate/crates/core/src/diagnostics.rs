//! Measured quantities: spectra, errors, norms and dissipation sums.

use crate::error::{Error, Result};
use crate::spectral::{self, SpectralField, VelocityField};
use crate::sv::{FieldNorms, SvOperator};

/// Shell sums `E(kappa) = sum_{|k|_inf = kappa} |w_k|^2` for `kappa = 0..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSeries {
    pub time: f64,
    pub e_kappa: Vec<f64>,
}

impl SpectrumSeries {
    pub fn total(&self) -> f64 {
        self.e_kappa.iter().sum()
    }
}

pub fn energy_spectrum(omega: &SpectralField, time: f64) -> SpectrumSeries {
    let g = omega.grid();
    let mut e_kappa = vec![0.0; g.n_modes() + 1];
    for ((k1, k2), c) in g.modes().zip(omega.coeffs()) {
        let shell = k1.unsigned_abs().max(k2.unsigned_abs()) as usize;
        e_kappa[shell] += c.norm_sqr();
    }
    SpectrumSeries { time, e_kappa }
}

/// `||u_coarse - u_ref||_{L^2}` after zero-filling the coarse field into the
/// reference band.
pub fn l2_error(coarse: &VelocityField, reference: &VelocityField) -> Result<f64> {
    let (gc, gr) = (coarse.grid(), reference.grid());
    if gc.n_grid() > gr.n_grid() || gr.n_grid() % gc.n_grid() != 0 {
        return Err(Error::GridIncompatible {
            coarse: gc.n_grid(),
            reference: gr.n_grid(),
        });
    }
    let embedded = coarse.resample(gr);
    let d1 = embedded.u1.sub(&reference.u1)?;
    let d2 = embedded.u2.sub(&reference.u2)?;
    Ok((d1.norm_sq() + d2.norm_sq()).sqrt())
}

/// Grid-quadrature `L^p` norm on the padded grid; `p = inf` gives the maximum.
pub fn lp_norm(f: &SpectralField, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::Config(format!("L^p norm needs p >= 1, got {p}")));
    }
    let vals = spectral::sample(f, f.grid().n_padded());
    Ok(spectral::grid_lp_norm(&vals, p))
}

/// `int [w + c]_-  dx` by padded-grid quadrature.
pub fn negative_part_integral(omega: &SpectralField, c: f64) -> f64 {
    let vals = spectral::sample(omega, omega.grid().n_padded());
    let neg: Vec<f64> = vals.iter().map(|w| (-(w + c)).max(0.0)).collect();
    spectral::grid_lp_norm(&neg, 1.0)
}

/// `max |w_k|` over the Euclidean annulus `N/2 <= |k| <= N`.
pub fn high_mode_mass(omega: &SpectralField) -> f64 {
    let g = omega.grid();
    let n = g.n_modes() as f64;
    g.modes()
        .zip(omega.coeffs())
        .filter(|((k1, k2), _)| {
            let r = ((k1 * k1 + k2 * k2) as f64).sqrt();
            r >= n / 2.0 && r <= n
        })
        .map(|(_, c)| c.norm())
        .fold(0.0, f64::max)
}

/// Semi-discrete dissipation sums and the truncation-error norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DissipationRates {
    /// `d/dt (||u||^2 / 2)`.
    pub energy_rate: f64,
    /// `d/dt (||w||^2 / 2)`.
    pub enstrophy_rate: f64,
    pub err1_norms: FieldNorms,
    pub err2_norms: FieldNorms,
}

pub fn dissipation_rates(omega: &SpectralField, u: &VelocityField, op: &SvOperator) -> Result<DissipationRates> {
    omega.ensure_same_grid(&u.u1)?;
    if omega.grid() != op.grid() {
        return Err(Error::GridMismatch {
            left: omega.grid().n_modes(),
            right: op.grid().n_modes(),
        });
    }
    let d = op.damping();
    let energy_rate = -u
        .u1
        .coeffs()
        .iter()
        .zip(u.u2.coeffs())
        .zip(d)
        .map(|((a, b), d)| d * (a.norm_sqr() + b.norm_sqr()))
        .sum::<f64>();
    let enstrophy_rate = -omega.coeffs().iter().zip(d).map(|(w, d)| d * w.norm_sqr()).sum::<f64>();
    let terms = op.error_terms(omega)?;
    Ok(DissipationRates {
        energy_rate,
        enstrophy_rate,
        err1_norms: terms.err1_norms,
        err2_norms: terms.err2_norms,
    })
}
