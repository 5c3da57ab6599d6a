//! Field containers: Fourier coefficients, grid samples and velocity pairs.

use num_complex::Complex64;

use super::grid::GridSpec;
use crate::error::{Error, Result};

/// Fourier coefficients `f_k`, `|k|_inf <= N`, of a real field on the unit
/// torus, `f(x) = sum_k f_k exp(2 pi i k.x)`.
///
/// Storage covers the closed band, so both members of every conjugate pair
/// are present and `f_{-k} = conj(f_k)` holds element-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: GridSpec,
    coeffs: Vec<Complex64>,
}

impl SpectralField {
    pub fn zeros(grid: GridSpec) -> Self {
        SpectralField {
            grid,
            coeffs: vec![Complex64::default(); grid.band_len()],
        }
    }

    /// Builds a field from a per-mode function. The caller is responsible
    /// for returning Hermitian-symmetric values.
    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(i64, i64) -> Complex64) -> Self {
        let coeffs = grid.modes().map(|(k1, k2)| f(k1, k2)).collect();
        SpectralField { grid, coeffs }
    }

    pub fn from_coeffs(grid: GridSpec, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.band_len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.band_len(),
                coeffs.len()
            )));
        }
        Ok(SpectralField { grid, coeffs })
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn get(&self, k1: i64, k2: i64) -> Complex64 {
        self.coeffs[self.grid.index(k1, k2)]
    }

    pub fn set(&mut self, k1: i64, k2: i64, value: Complex64) {
        let i = self.grid.index(k1, k2);
        self.coeffs[i] = value;
    }

    /// Sets `f_k = value` and `f_{-k} = conj(value)`.
    pub fn set_pair(&mut self, k1: i64, k2: i64, value: Complex64) {
        self.set(k1, k2, value);
        self.set(-k1, -k2, value.conj());
    }

    pub fn mean(&self) -> Complex64 {
        self.get(0, 0)
    }

    pub(crate) fn ensure_same_grid(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch {
                left: self.grid.n_modes(),
                right: other.grid.n_modes(),
            });
        }
        Ok(())
    }

    /// Per-mode multiplication by `m(k)`.
    pub fn map_modes(&self, mut m: impl FnMut(i64, i64, Complex64) -> Complex64) -> Self {
        let coeffs = self
            .grid
            .modes()
            .zip(&self.coeffs)
            .map(|((k1, k2), &c)| m(k1, k2, c))
            .collect();
        SpectralField {
            grid: self.grid,
            coeffs,
        }
    }

    pub fn scale(&mut self, a: f64) {
        for c in &mut self.coeffs {
            *c *= a;
        }
    }

    /// `self += a * x`.
    pub fn axpy(&mut self, a: f64, x: &SpectralField) {
        assert_eq!(self.grid, x.grid, "axpy on mismatched grids");
        for (c, &y) in self.coeffs.iter_mut().zip(&x.coeffs) {
            *c += y * a;
        }
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.ensure_same_grid(other)?;
        let mut out = self.clone();
        out.axpy(-1.0, other);
        Ok(out)
    }

    /// `sum_k |f_k|^2`, equal to the squared L2 norm on the unit torus.
    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Real part of `sum_k conj(f_k) g_k`, the L2 inner product.
    pub fn inner(&self, other: &SpectralField) -> f64 {
        assert_eq!(self.grid, other.grid);
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a.conj() * b).re)
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of `f_{-k} = conj(f_k)`.
    pub fn hermitian_defect(&self) -> f64 {
        self.grid
            .modes()
            .map(|(k1, k2)| (self.get(k1, k2) - self.get(-k1, -k2).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// Replaces every pair by its Hermitian average.
    pub fn symmetrize(&mut self) {
        let g = self.grid;
        for (k1, k2) in g.modes() {
            let (i, j) = (g.index(k1, k2), g.index(-k1, -k2));
            if i < j {
                let avg = (self.coeffs[i] + self.coeffs[j].conj()) * 0.5;
                self.coeffs[i] = avg;
                self.coeffs[j] = avg.conj();
            } else if i == j {
                self.coeffs[i].im = 0.0;
            }
        }
    }

    /// Copies the field into a band of a different size, truncating or
    /// zero-filling as needed.
    pub fn resample(&self, target: GridSpec) -> SpectralField {
        let mut out = SpectralField::zeros(target);
        for (idx, (k1, k2)) in self.grid.modes().enumerate() {
            if target.contains(k1, k2) {
                out.set(k1, k2, self.coeffs[idx]);
            }
        }
        out
    }
}

/// Real samples on the `N_G x N_G` collocation grid, row-major, with
/// `values[i * N_G + j]` at `x = (i / N_G, j / N_G)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalField {
    grid: GridSpec,
    values: Vec<f64>,
}

impl PhysicalField {
    pub fn new(grid: GridSpec, values: Vec<f64>) -> Result<Self> {
        let n = grid.n_grid();
        if values.len() != n * n {
            return Err(Error::InvalidGrid(format!(
                "expected {} grid values, got {}",
                n * n,
                values.len()
            )));
        }
        Ok(PhysicalField { grid, values })
    }

    pub fn from_fn(grid: GridSpec, mut f: impl FnMut(f64, f64) -> f64) -> Self {
        let n = grid.n_grid();
        let h = grid.dx();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(f(i as f64 * h, j as f64 * h));
            }
        }
        PhysicalField { grid, values }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.n_grid() + j]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Velocity `(u1, u2)` as two spectral fields on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField {
    pub u1: SpectralField,
    pub u2: SpectralField,
}

impl VelocityField {
    pub fn new(u1: SpectralField, u2: SpectralField) -> Result<Self> {
        u1.ensure_same_grid(&u2)?;
        Ok(VelocityField { u1, u2 })
    }

    pub fn zeros(grid: GridSpec) -> Self {
        VelocityField {
            u1: SpectralField::zeros(grid),
            u2: SpectralField::zeros(grid),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.u1.grid()
    }

    pub fn norm_sq(&self) -> f64 {
        self.u1.norm_sq() + self.u2.norm_sq()
    }

    pub fn l2_norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn inner(&self, other: &VelocityField) -> f64 {
        self.u1.inner(&other.u1) + self.u2.inner(&other.u2)
    }

    pub fn scale(&mut self, a: f64) {
        self.u1.scale(a);
        self.u2.scale(a);
    }

    pub fn axpy(&mut self, a: f64, x: &VelocityField) {
        self.u1.axpy(a, &x.u1);
        self.u2.axpy(a, &x.u2);
    }

    pub fn is_finite(&self) -> bool {
        self.u1.is_finite() && self.u2.is_finite()
    }

    /// `max_k |k . u_k|`.
    pub fn max_divergence(&self) -> f64 {
        self.grid()
            .modes()
            .zip(self.u1.coeffs().iter().zip(self.u2.coeffs()))
            .map(|((k1, k2), (a, b))| (*a * k1 as f64 + *b * k2 as f64).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.u1.max_abs().max(self.u2.max_abs())
    }

    pub fn resample(&self, target: GridSpec) -> VelocityField {
        VelocityField {
            u1: self.u1.resample(target),
            u2: self.u2.resample(target),
        }
    }
}
