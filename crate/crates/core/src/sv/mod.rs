//! Spectral viscosity right-hand sides.
//!
//! Velocity form:
//! `du_k/dt = -(I - k k^T/|k|^2) F_k[P_N(u . grad u)] - eps_N (2 pi |k|)^2 Q_k u_k`
//!
//! Vorticity form:
//! `dw/dt = -P_N(u . grad w) + eps_N Lap(Q_N * w)`, `u = biot_savart(w)`.

mod regime;

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::spectral::{
    self, biot_savart, gradient, project_leray, smooth_size, transport_terms, GridSpec, SpectralField, VelocityField,
};

pub use regime::{evaluate_regime, evaluate_regime_ln, validate_regime, Integrability, RegimeParams, RegimeReport};

/// Viscosity amplitude and smooth cutoff `Q_k = 1 - exp(-(|k|/k0)^alpha)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvConfig {
    /// Amplitude `eps`; the applied viscosity is `eps_N = eps / N_G`.
    pub epsilon: f64,
    /// `k0 / N`. Zero selects plain vanishing viscosity, `Q_k = 1` for all
    /// `k != 0`, which is the `k0 -> 0` limit of the cutoff.
    pub k0_fraction: f64,
    /// Cutoff sharpness `alpha`.
    pub cutoff_alpha: f64,
}

impl Default for SvConfig {
    fn default() -> Self {
        SvConfig {
            epsilon: 0.05,
            k0_fraction: 1.0 / 3.0,
            cutoff_alpha: 18.0,
        }
    }
}

impl SvConfig {
    /// Pure spectral method.
    pub fn inviscid() -> Self {
        SvConfig {
            epsilon: 0.0,
            ..Default::default()
        }
    }

    /// Viscous damping applied to every non-constant mode.
    pub fn vanishing_viscosity(epsilon: f64) -> Self {
        SvConfig {
            epsilon,
            k0_fraction: 0.0,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(Error::Config(format!("epsilon must be >= 0, got {}", self.epsilon)));
        }
        if !(0.0..=1.0).contains(&self.k0_fraction) {
            return Err(Error::Config(format!(
                "k0_fraction must lie in [0, 1], got {}",
                self.k0_fraction
            )));
        }
        if !(self.cutoff_alpha >= 2.0 && self.cutoff_alpha.is_finite()) {
            return Err(Error::Config(format!(
                "cutoff_alpha must be >= 2, got {}",
                self.cutoff_alpha
            )));
        }
        Ok(())
    }

    pub fn eps_n(&self, grid: GridSpec) -> f64 {
        self.epsilon / grid.n_grid() as f64
    }

    pub fn k0(&self, grid: GridSpec) -> f64 {
        self.k0_fraction * grid.n_modes() as f64
    }

    /// Cutoff value at Euclidean wavenumber `k_abs`.
    pub fn q_hat(&self, grid: GridSpec, k_abs: f64) -> f64 {
        q_hat(k_abs, self.k0(grid), self.cutoff_alpha)
    }

    /// Wavenumber below which `Q_k < threshold`.
    pub fn effective_cutoff(&self, grid: GridSpec, threshold: f64) -> f64 {
        self.k0(grid) * (-(-threshold).ln_1p()).powf(1.0 / self.cutoff_alpha)
    }
}

/// `1 - exp(-(k_abs/k0)^alpha)` with `Q_0 = 0`; `k0 = 0` gives 1 off the origin.
pub fn q_hat(k_abs: f64, k0: f64, alpha: f64) -> f64 {
    if k_abs == 0.0 {
        return 0.0;
    }
    if k0 == 0.0 {
        return 1.0;
    }
    -(-(k_abs / k0).powf(alpha)).exp_m1()
}

/// Multiplier table `Q_k` over the closed band, in storage order.
pub fn build_q_multiplier(grid: GridSpec, cfg: &SvConfig) -> Vec<f64> {
    grid.modes()
        .map(|(k1, k2)| cfg.q_hat(grid, ((k1 * k1 + k2 * k2) as f64).sqrt()))
        .collect()
}

/// Precomputed spectral viscosity operator for one grid.
#[derive(Debug, Clone)]
pub struct SvOperator {
    grid: GridSpec,
    cfg: SvConfig,
    q: Vec<f64>,
    damping: Vec<f64>,
}

impl SvOperator {
    pub fn new(grid: GridSpec, cfg: SvConfig) -> Result<Self> {
        cfg.validate()?;
        let q = build_q_multiplier(grid, &cfg);
        let eps_n = cfg.eps_n(grid);
        let damping = grid
            .modes()
            .zip(&q)
            .map(|((k1, k2), &q)| {
                let k2pi = 4.0 * PI * PI * (k1 * k1 + k2 * k2) as f64;
                eps_n * k2pi * q
            })
            .collect();
        Ok(SvOperator { grid, cfg, q, damping })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn config(&self) -> &SvConfig {
        &self.cfg
    }

    pub fn eps_n(&self) -> f64 {
        self.cfg.eps_n(self.grid)
    }

    pub fn multiplier(&self) -> &[f64] {
        &self.q
    }

    /// `eps_N (2 pi |k|)^2 Q_k` per mode.
    pub fn damping(&self) -> &[f64] {
        &self.damping
    }

    fn check(&self, f: &SpectralField) -> Result<()> {
        if f.grid() != self.grid {
            return Err(Error::GridMismatch {
                left: f.grid().n_modes(),
                right: self.grid.n_modes(),
            });
        }
        Ok(())
    }

    /// Velocity-form tendency.
    pub fn rhs(&self, u: &VelocityField) -> Result<VelocityField> {
        self.check(&u.u1)?;
        self.check(&u.u2)?;
        let (a1, a2) = gradient(&u.u1);
        let (b1, b2) = gradient(&u.u2);
        let nl = transport_terms(u, &[(&a1, &a2), (&b1, &b2)], self.grid.n_padded(), self.grid);
        let mut t = project_leray(&nl[0], &nl[1])?;
        t.scale(-1.0);
        for (i, &d) in self.damping.iter().enumerate() {
            t.u1.coeffs_mut()[i] -= u.u1.coeffs()[i] * d;
            t.u2.coeffs_mut()[i] -= u.u2.coeffs()[i] * d;
        }
        t.u1.symmetrize();
        t.u2.symmetrize();
        Ok(t)
    }

    /// Vorticity-form tendency. The mean mode of the result is exactly zero.
    pub fn rhs_vorticity(&self, omega: &SpectralField) -> Result<SpectralField> {
        self.check(omega)?;
        let u = biot_savart(omega)?;
        self.rhs_vorticity_with(omega, &u)
    }

    pub(crate) fn rhs_vorticity_with(&self, omega: &SpectralField, u: &VelocityField) -> Result<SpectralField> {
        let (w1, w2) = gradient(omega);
        let mut t = transport_terms(u, &[(&w1, &w2)], self.grid.n_padded(), self.grid)
            .pop()
            .expect("one transport term");
        t.scale(-1.0);
        for (i, &d) in self.damping.iter().enumerate() {
            t.coeffs_mut()[i] -= omega.coeffs()[i] * d;
        }
        t.set(0, 0, Default::default());
        t.symmetrize();
        Ok(t)
    }

    /// Projection error `(I - P_N)(u . grad w)` on `N < |k|_inf <= 2N` and
    /// viscosity error `eps_N Lap(R * w)`, `R_k = 1 - Q_k`.
    pub fn error_terms(&self, omega: &SpectralField) -> Result<ErrorTerms> {
        self.check(omega)?;
        let u = biot_savart(omega)?;
        let n = self.grid.n_modes() as i64;
        let wide = GridSpec::new(2 * self.grid.n_modes())?;
        let m = smooth_size(4 * self.grid.n_modes() + 1);
        let (w1, w2) = gradient(omega);
        let mut err1 = transport_terms(&u, &[(&w1, &w2)], m, wide).pop().expect("one term");
        for (idx, (k1, k2)) in wide.modes().enumerate() {
            if k1.abs() <= n && k2.abs() <= n {
                err1.coeffs_mut()[idx] = Default::default();
            }
        }
        err1.symmetrize();
        let eps_n = self.eps_n();
        let err2 = omega.map_modes(|k1, k2, c| {
            let q = self.q[self.grid.index(k1, k2)];
            c * (-eps_n * 4.0 * PI * PI * (k1 * k1 + k2 * k2) as f64 * (1.0 - q))
        });
        let err1_norms = FieldNorms::of(&err1);
        let err2_norms = FieldNorms::of(&err2);
        Ok(ErrorTerms {
            err1,
            err2,
            err1_norms,
            err2_norms,
        })
    }

    /// Grid L1 norm of the kernel `R` with `R_k = 1 - Q_k`.
    pub fn cutoff_kernel_l1(&self) -> f64 {
        let r = SpectralField::from_fn(self.grid, |k1, k2| {
            let q = self.q[self.grid.index(k1, k2)];
            num_complex::Complex64::new(1.0 - q, 0.0)
        });
        spectral::grid_lp_norm(&spectral::sample(&r, self.grid.n_padded()), 1.0)
    }
}

/// Grid-quadrature norms on the padded grid of the field's band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

impl FieldNorms {
    pub fn of(f: &SpectralField) -> Self {
        let vals = spectral::sample(f, f.grid().n_padded());
        FieldNorms {
            l1: spectral::grid_lp_norm(&vals, 1.0),
            l2: spectral::grid_lp_norm(&vals, 2.0),
            linf: spectral::grid_lp_norm(&vals, f64::INFINITY),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ErrorTerms {
    pub err1: SpectralField,
    pub err2: SpectralField,
    pub err1_norms: FieldNorms,
    pub err2_norms: FieldNorms,
}
