//! Initial vorticity for the experiments: mollified vortex sheets, kissing
//! confined eddies, Taylor–Green, and the good kernel used to smooth rough
//! data.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::spectral::{curl, periodic_delta, project_leray, to_spectral, GridSpec, PhysicalField, SpectralField};

/// Radial cubic B-spline, supported on `[0, 1]`, normalised so that
/// `2 pi int_0^1 psi(r) r dr = 1`.
pub fn bspline_mollifier(r: f64) -> f64 {
    let c = |x: f64| if x > 0.0 { x * x * x } else { 0.0 };
    if r >= 1.0 {
        return 0.0;
    }
    80.0 / (7.0 * PI) * (c(r + 1.0) - 4.0 * c(r + 0.5) + 6.0 * c(r) - 4.0 * c(r - 0.5) + c(r - 1.0))
}

/// `psi_s(x) = s^-2 psi(|x| / s)`, unit mass on the plane.
pub fn scaled_mollifier(r: f64, s: f64) -> f64 {
    bspline_mollifier(r / s) / (s * s)
}

/// Mollification width of a sheet or eddy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Width {
    /// `rho_N = rho`, independent of resolution.
    Fixed(f64),
    /// `rho_N = rho / N_G`, thinning with resolution.
    GridScaled(f64),
}

impl Width {
    pub fn rho_n(&self, grid: GridSpec) -> f64 {
        match *self {
            Width::Fixed(r) => r,
            Width::GridScaled(r) => r / grid.n_grid() as f64,
        }
    }
}

/// Sinusoidal sheet `x2 = d sin(2 pi x1)` with uniform unit strength.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetSpec {
    pub amplitude: f64,
    pub width: Width,
    pub quadrature_m: usize,
}

impl SheetSpec {
    pub fn fat(rho: f64) -> Self {
        SheetSpec {
            amplitude: 0.2,
            width: Width::Fixed(rho),
            quadrature_m: 400,
        }
    }

    pub fn thin(rho: f64) -> Self {
        SheetSpec {
            amplitude: 0.2,
            width: Width::GridScaled(rho),
            quadrature_m: 400,
        }
    }

    /// True when the mollifier is wider than one padded-grid cell. Thin
    /// sheets are allowed to violate this; callers may warn.
    pub fn resolvable(&self, grid: GridSpec) -> bool {
        self.width.rho_n(grid) > 1.0 / grid.n_padded() as f64
    }
}

/// Mollified sheet sampled on the collocation grid, before mean removal.
pub fn sheet_samples(grid: GridSpec, spec: &SheetSpec) -> Result<PhysicalField> {
    let rho = spec.width.rho_n(grid);
    if !(rho > 0.0) || spec.quadrature_m == 0 {
        return Err(Error::Config(format!(
            "sheet needs rho_N > 0 and M > 0, got rho_N = {rho}, M = {}",
            spec.quadrature_m
        )));
    }
    let m = spec.quadrature_m as i64;
    let d = spec.amplitude;
    let n = grid.n_grid();
    let h = grid.dx();
    let weight = rho / m as f64;
    let mut values = vec![0.0; n * n];
    let mut curve = Vec::with_capacity(2 * m as usize + 1);
    for i in 0..n {
        let x1 = i as f64 * h;
        curve.clear();
        for q in -m..=m {
            let xi = x1 + q as f64 * rho / m as f64;
            let slope = 2.0 * PI * d * (2.0 * PI * xi).cos();
            curve.push((xi, d * (2.0 * PI * xi).sin(), (1.0 + slope * slope).sqrt()));
        }
        for j in 0..n {
            let x2 = j as f64 * h;
            let mut acc = 0.0;
            for &(xi, yi, ds) in &curve {
                let dy = periodic_delta(x2, yi);
                if dy.abs() >= rho {
                    continue;
                }
                let dx = periodic_delta(x1, xi);
                let r = (dx * dx + dy * dy).sqrt();
                if r < rho {
                    acc += scaled_mollifier(r, rho) * ds;
                }
            }
            values[i * n + j] = weight * acc;
        }
    }
    PhysicalField::new(grid, values)
}

/// Sheet vorticity with zero mean, together with the subtracted background
/// `int omega_sheet dx` (approximately the arc length of the curve).
pub fn sheet_vorticity_with_offset(grid: GridSpec, spec: &SheetSpec) -> Result<(SpectralField, f64)> {
    let mut p = sheet_samples(grid, spec)?;
    let mean = p.mean();
    for v in p.values_mut() {
        *v -= mean;
    }
    let mut w = to_spectral(&p);
    w.set(0, 0, Complex64::default());
    Ok((w, mean))
}

pub fn sheet_vorticity(grid: GridSpec, spec: &SheetSpec) -> Result<SpectralField> {
    Ok(sheet_vorticity_with_offset(grid, spec)?.0)
}

/// Tangential speed of a confined eddy at scaled radius `r`.
pub fn confined_eddy_velocity(r: f64, rho_n: f64) -> f64 {
    if r < 0.25 {
        0.0
    } else if r <= 0.5 {
        2.0 * PI * (r - 0.25)
    } else {
        PI * (((1.0 - r) / rho_n).tanh() + 1.0) / 4.0
    }
}

/// Superposition of confined eddies of radius `R`.
#[derive(Debug, Clone, PartialEq)]
pub struct EddySpec {
    pub centers: Vec<(f64, f64)>,
    pub radius: f64,
    pub width: Width,
}

impl Default for EddySpec {
    /// Two eddies tangent at `(1/2, 0)`.
    fn default() -> Self {
        EddySpec {
            centers: vec![(1.0 / 3.0, 0.0), (2.0 / 3.0, 0.0)],
            radius: 1.0 / 6.0,
            width: Width::GridScaled(10.0),
        }
    }
}

impl EddySpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.radius > 0.0) {
            return Err(Error::Config(format!(
                "eddy radius must be positive, got {}",
                self.radius
            )));
        }
        for (a, p) in self.centers.iter().enumerate() {
            for q in &self.centers[a + 1..] {
                let dx = periodic_delta(p.0, q.0);
                let dy = periodic_delta(p.1, q.1);
                let distance = (dx * dx + dy * dy).sqrt();
                // tangency is allowed; tolerate rounding in the centre coordinates
                if distance < 2.0 * self.radius * (1.0 - 1e-12) {
                    return Err(Error::OverlappingEddies {
                        distance,
                        min: 2.0 * self.radius,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Vorticity of the eddy superposition: velocities are sampled on the grid,
/// Leray-projected, and the curl is returned.
pub fn kissing_vortices(grid: GridSpec, spec: &EddySpec) -> Result<SpectralField> {
    spec.validate()?;
    let rho = spec.width.rho_n(grid);
    if !(rho > 0.0) {
        return Err(Error::Config(format!("eddy width must be positive, got {rho}")));
    }
    let mut u1 = PhysicalField::from_fn(grid, |_, _| 0.0);
    let mut u2 = u1.clone();
    let n = grid.n_grid();
    let h = grid.dx();
    for &(c1, c2) in &spec.centers {
        for i in 0..n {
            for j in 0..n {
                let dx = periodic_delta(i as f64 * h, c1);
                let dy = periodic_delta(j as f64 * h, c2);
                let dist = (dx * dx + dy * dy).sqrt();
                if dist == 0.0 {
                    continue;
                }
                let v = confined_eddy_velocity(dist / spec.radius, rho) / dist;
                u1.values_mut()[i * n + j] += -v * dy;
                u2.values_mut()[i * n + j] += v * dx;
            }
        }
    }
    let u = project_leray(&to_spectral(&u1), &to_spectral(&u2))?;
    let mut w = curl(&u);
    w.symmetrize();
    Ok(w)
}

/// `omega = amplitude cos(2 pi x1) cos(2 pi x2)`, an exact steady state of
/// the inviscid equations. Amplitude `4 pi` gives `max |u| = 1`.
pub fn taylor_green(grid: GridSpec, amplitude: f64) -> SpectralField {
    let mut w = SpectralField::zeros(grid);
    for (k1, k2) in [(1, 1), (1, -1)] {
        w.set_pair(k1, k2, Complex64::new(amplitude / 4.0, 0.0));
    }
    w
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let step = p1 / dp;
            x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Fourier transform of the unit mollifier, `int psi(|y|) exp(-2 pi i q.y) dy`
/// at `|q| = q`: `2 pi int_0^1 psi(r) J0(2 pi q r) r dr`.
pub fn mollifier_fourier(q: f64) -> f64 {
    let nodes = gauss_legendre(16);
    let panels = ((2.0 * q).ceil() as usize).max(2);
    let mut total = 0.0;
    // psi is a cubic on [0, 1/2] and on [1/2, 1]; keep panel edges aligned
    for (a, b) in [(0.0, 0.5), (0.5, 1.0)] {
        let width = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + p as f64 * width;
            for &(x, w) in &nodes {
                let r = lo + 0.5 * width * (x + 1.0);
                total += 0.5 * width * w * bspline_mollifier(r) * puruspe::Jn(0, 2.0 * PI * q * r) * r;
            }
        }
    }
    2.0 * PI * total
}

/// `K_N = D_N * psi_rho`: Dirichlet truncation of the periodised mollifier,
/// `K_k = psi_rho^(k)` for `|k|_inf <= N`.
pub fn good_kernel(grid: GridSpec, rho_n: f64) -> Result<SpectralField> {
    if !(rho_n > 0.0) {
        return Err(Error::Config(format!("kernel width must be positive, got {rho_n}")));
    }
    // the transform is radial; evaluate once per distinct |k|^2
    let n = grid.n_modes() as i64;
    let mut by_radius = vec![f64::NAN; (2 * n * n + 1) as usize];
    Ok(SpectralField::from_fn(grid, |k1, k2| {
        let r2 = (k1 * k1 + k2 * k2) as usize;
        if by_radius[r2].is_nan() {
            by_radius[r2] = mollifier_fourier(rho_n * (r2 as f64).sqrt());
        }
        Complex64::new(by_radius[r2], 0.0)
    }))
}

/// Per-mode multiplication, i.e. convolution on the torus.
pub fn apply_kernel(field: &SpectralField, kernel: &SpectralField) -> Result<SpectralField> {
    if field.grid() != kernel.grid() {
        return Err(Error::GridMismatch {
            left: field.grid().n_modes(),
            right: kernel.grid().n_modes(),
        });
    }
    Ok(field.map_modes(|k1, k2, c| c * kernel.get(k1, k2)))
}
