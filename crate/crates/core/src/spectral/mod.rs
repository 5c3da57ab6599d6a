//! Fourier representation on the unit torus: transforms, alias-free
//! products, derivatives, Leray projection and Biot–Savart inversion.
//!
//! Conventions: basis `exp(2 pi i k.x)` on `[0,1)^2`, so every derivative
//! multiplier carries a factor `2 pi`, and forward transforms divide by the
//! number of grid points so stored values are Fourier-series coefficients.

mod fft;
mod field;
mod grid;

use std::f64::consts::PI;

use num_complex::Complex64;

pub use field::{PhysicalField, SpectralField, VelocityField};
pub use grid::{periodic_delta, GridSpec};

pub(crate) use grid::smooth_size;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Relative tolerance on the mean mode accepted by [`biot_savart`].
pub const MEAN_TOLERANCE: f64 = 1e-12;

pub fn to_physical(f: &SpectralField) -> PhysicalField {
    let grid = f.grid();
    PhysicalField::new(grid, fft::to_grid(f, grid.n_grid())).expect("grid sized by construction")
}

/// Exact DFT of grid samples, normalised to Fourier-series coefficients.
///
/// The `N_G` grid sees the `+-N` pair as a single frequency; its content is
/// split evenly between the two so the result stays Hermitian and
/// `to_physical` reproduces the samples.
pub fn to_spectral(p: &PhysicalField) -> SpectralField {
    let grid = p.grid();
    fft::real_grid_to_band(p.values(), grid.n_grid(), grid)
}

/// Values of `f` on an `m x m` grid, `m >= N_G`, row-major.
pub fn sample(f: &SpectralField, m: usize) -> Vec<f64> {
    fft::to_grid(f, m)
}

/// Grid-quadrature `L^p` norm on the unit torus; `p = inf` gives the max.
/// Uses a fixed sequential reduction order.
pub fn grid_lp_norm(values: &[f64], p: f64) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    if p.is_infinite() {
        return values.iter().fold(0.0, |a, v| a.max(v.abs()));
    }
    let area = 1.0 / values.len() as f64;
    if p == 1.0 {
        return values.iter().map(|v| v.abs()).sum::<f64>() * area;
    }
    if p == 2.0 {
        return (values.iter().map(|v| v * v).sum::<f64>() * area).sqrt();
    }
    (values.iter().map(|v| v.abs().powf(p)).sum::<f64>() * area).powf(1.0 / p)
}

/// Values of two fields on an `m x m` grid from one complex transform.
pub fn sample_pair(a: &SpectralField, b: &SpectralField, m: usize) -> (Vec<f64>, Vec<f64>) {
    let buf = fft::pair_to_grid(a, Some(b), m);
    let values = buf.iter().map(|z| (z.re, z.im)).unzip();
    fft::recycle(buf);
    values
}

/// Truncation to the band of the exact convolution `sum_l f_l g_{k-l}`.
///
/// Works on arbitrary coefficients; Hermitian inputs give a Hermitian
/// result up to rounding.
pub fn dealiased_product(f: &SpectralField, g: &SpectralField) -> Result<SpectralField> {
    f.ensure_same_grid(g)?;
    let grid = f.grid();
    let m = grid.n_padded();
    let a = fft::pair_to_grid(f, None, m);
    let b = fft::pair_to_grid(g, None, m);
    let mut prod = a;
    for (x, y) in prod.iter_mut().zip(&b) {
        *x *= y;
    }
    fft::recycle(b);
    Ok(fft::complex_grid_to_band(prod, m, grid))
}

/// Truncated transport terms `P(u . g)` for each gradient pair `g`, formed
/// on an `m`-point grid and returned on `out`. The result is alias-free as
/// long as `m > |k|_inf(out) + 2 N`.
pub(crate) fn transport_terms(
    u: &VelocityField,
    grads: &[(&SpectralField, &SpectralField)],
    m: usize,
    out: GridSpec,
) -> Vec<SpectralField> {
    // u1 + i u2 and ga + i gb on the grid; two products share one transform
    let uu = fft::pair_to_grid(&u.u1, Some(&u.u2), m);
    let mut fields = Vec::with_capacity(grads.len());
    for chunk in grads.chunks(2) {
        let mut prod = fft::take_buffer(m * m);
        for (slot, (a, b)) in chunk.iter().enumerate() {
            let g = fft::pair_to_grid(a, Some(b), m);
            for ((p, w), v) in prod.iter_mut().zip(&g).zip(&uu) {
                let dot = v.re * w.re + v.im * w.im;
                if slot == 0 {
                    *p = Complex64::new(dot, 0.0);
                } else {
                    p.im = dot;
                }
            }
            fft::recycle(g);
        }
        let (a, b) = fft::grid_to_pair(prod, m, out);
        fields.push(a);
        if chunk.len() == 2 {
            fields.push(b);
        }
    }
    fft::recycle(uu);
    fields
}

/// `(d/dx1 f, d/dx2 f)`: multipliers `2 pi i k_j`.
pub fn gradient(f: &SpectralField) -> (SpectralField, SpectralField) {
    let d1 = f.map_modes(|k1, _, c| c * Complex64::new(0.0, TWO_PI * k1 as f64));
    let d2 = f.map_modes(|_, k2, c| c * Complex64::new(0.0, TWO_PI * k2 as f64));
    (d1, d2)
}

/// `-(2 pi |k|)^2 f_k`.
pub fn laplacian(f: &SpectralField) -> SpectralField {
    f.map_modes(|k1, k2, c| c * -(TWO_PI * TWO_PI * (k1 * k1 + k2 * k2) as f64))
}

/// Scalar vorticity `d1 u2 - d2 u1`.
pub fn curl(u: &VelocityField) -> SpectralField {
    let g = u.grid();
    let mut out = SpectralField::zeros(g);
    for (idx, (k1, k2)) in g.modes().enumerate() {
        let a = u.u1.coeffs()[idx];
        let b = u.u2.coeffs()[idx];
        out.coeffs_mut()[idx] = Complex64::new(0.0, TWO_PI) * (b * k1 as f64 - a * k2 as f64);
    }
    out
}

/// `d1 u1 + d2 u2`.
pub fn divergence(u: &VelocityField) -> SpectralField {
    let g = u.grid();
    let mut out = SpectralField::zeros(g);
    for (idx, (k1, k2)) in g.modes().enumerate() {
        let a = u.u1.coeffs()[idx];
        let b = u.u2.coeffs()[idx];
        out.coeffs_mut()[idx] = Complex64::new(0.0, TWO_PI) * (a * k1 as f64 + b * k2 as f64);
    }
    out
}

/// Velocity with `curl(u) = omega`, `div(u) = 0` and zero mean:
/// `u_k = i (k2, -k1) omega_k / (2 pi |k|^2)`.
pub fn biot_savart(omega: &SpectralField) -> Result<VelocityField> {
    let mean = omega.mean().norm();
    let norm = omega.l2_norm();
    if mean > MEAN_TOLERANCE * norm {
        return Err(Error::NonZeroMean { mean, norm });
    }
    let g = omega.grid();
    let mut u1 = SpectralField::zeros(g);
    let mut u2 = SpectralField::zeros(g);
    for (idx, (k1, k2)) in g.modes().enumerate() {
        if k1 == 0 && k2 == 0 {
            continue;
        }
        let w = omega.coeffs()[idx] * Complex64::new(0.0, 1.0 / (TWO_PI * (k1 * k1 + k2 * k2) as f64));
        u1.coeffs_mut()[idx] = w * k2 as f64;
        u2.coeffs_mut()[idx] = w * -(k1 as f64);
    }
    Ok(VelocityField { u1, u2 })
}

/// Per-mode projection `(I - k k^T / |k|^2)` onto divergence-free fields;
/// the mean mode is removed.
pub fn project_leray(u1: &SpectralField, u2: &SpectralField) -> Result<VelocityField> {
    u1.ensure_same_grid(u2)?;
    let g = u1.grid();
    let mut p1 = SpectralField::zeros(g);
    let mut p2 = SpectralField::zeros(g);
    for (idx, (k1, k2)) in g.modes().enumerate() {
        if k1 == 0 && k2 == 0 {
            continue;
        }
        let (kx, ky) = (k1 as f64, k2 as f64);
        let a = u1.coeffs()[idx];
        let b = u2.coeffs()[idx];
        let s = (a * kx + b * ky) / (kx * kx + ky * ky);
        p1.coeffs_mut()[idx] = a - s * kx;
        p2.coeffs_mut()[idx] = b - s * ky;
    }
    Ok(VelocityField { u1: p1, u2: p2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_util::*;

    fn naive_dft(values: &[f64], grid: GridSpec, k1: i64, k2: i64) -> Complex64 {
        let n = grid.n_grid();
        let mut acc = Complex64::default();
        for i in 0..n {
            for j in 0..n {
                let phase = -TWO_PI * (k1 as f64 * i as f64 + k2 as f64 * j as f64) / n as f64;
                acc += Complex64::from_polar(values[i * n + j], phase);
            }
        }
        acc / (n * n) as f64
    }

    fn brute_convolution(f: &SpectralField, g: &SpectralField) -> SpectralField {
        let grid = f.grid();
        let n = grid.n_modes() as i64;
        SpectralField::from_fn(grid, |k1, k2| {
            let mut acc = Complex64::default();
            for l1 in -n..=n {
                for l2 in -n..=n {
                    let (m1, m2) = (k1 - l1, k2 - l2);
                    if grid.contains(m1, m2) {
                        acc += f.get(l1, l2) * g.get(m1, m2);
                    }
                }
            }
            acc
        })
    }

    fn rel_diff(a: &SpectralField, b: &SpectralField) -> f64 {
        a.sub(b).unwrap().max_abs() / b.max_abs().max(1e-300)
    }

    #[test]
    fn zero_field_to_physical() {
        let g = GridSpec::new(8).unwrap();
        let p = to_physical(&SpectralField::zeros(g));
        assert!(p.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_cosine_mode() {
        let g = GridSpec::new(8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_pair(1, 0, Complex64::new(0.5, 0.0));
        let p = to_physical(&f);
        let n = g.n_grid();
        for i in 0..n {
            for j in 0..n {
                let expect = (TWO_PI * i as f64 / n as f64).cos();
                assert!((p.at(i, j) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn round_trip_random() {
        let g = GridSpec::new(8).unwrap();
        let mut rng = rng(1);
        for _ in 0..10 {
            let f = zero_nyquist(random_field(g, &mut rng));
            let back = to_spectral(&to_physical(&f));
            assert!(rel_diff(&back, &f) < 1e-12);
        }
    }

    #[test]
    fn constant_and_sine_to_spectral() {
        let g = GridSpec::new(8).unwrap();
        let c = to_spectral(&PhysicalField::from_fn(g, |_, _| 3.5));
        assert!((c.get(0, 0) - Complex64::new(3.5, 0.0)).norm() < 1e-14);
        assert!(c
            .coeffs()
            .iter()
            .enumerate()
            .all(|(i, z)| i == g.index(0, 0) || z.norm() < 1e-14));

        let s = to_spectral(&PhysicalField::from_fn(g, |_, y| (TWO_PI * y).sin()));
        assert!((s.get(0, 1) - Complex64::new(0.0, -0.5)).norm() < 1e-14);
        assert!((s.get(0, -1) - Complex64::new(0.0, 0.5)).norm() < 1e-14);
    }

    #[test]
    fn to_spectral_matches_naive_dft() {
        let g = GridSpec::new(8).unwrap();
        let mut rng = rng(2);
        let p = random_grid(g, &mut rng);
        let f = to_spectral(&p);
        let n = g.n_modes() as i64;
        for (k1, k2) in g.modes() {
            let mut expect = naive_dft(p.values(), g, k1, k2);
            if k1.abs() == n {
                expect *= 0.5;
            }
            if k2.abs() == n {
                expect *= 0.5;
            }
            assert!((f.get(k1, k2) - expect).norm() < 1e-12, "mode ({k1},{k2})");
        }
    }

    #[test]
    fn parseval() {
        let g = GridSpec::new(8).unwrap();
        let mut rng = rng(3);
        let f = zero_nyquist(random_field(g, &mut rng));
        let p = to_physical(&f);
        let quad = p.values().iter().map(|v| v * v).sum::<f64>() / p.values().len() as f64;
        assert!((quad - f.norm_sq()).abs() < 1e-10 * f.norm_sq());
    }

    #[test]
    fn product_of_constants() {
        let g = GridSpec::new(8).unwrap();
        let mut one = SpectralField::zeros(g);
        one.set(0, 0, Complex64::new(1.0, 0.0));
        let p = dealiased_product(&one, &one).unwrap();
        assert!((p.get(0, 0) - Complex64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(p.sub(&one).unwrap().max_abs() < 1e-14);
    }

    #[test]
    fn out_of_band_product_vanishes() {
        let g = GridSpec::new(8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set(8, 0, Complex64::new(1.0, 0.0));
        let mut h = SpectralField::zeros(g);
        h.set(1, 0, Complex64::new(1.0, 0.0));
        let p = dealiased_product(&f, &h).unwrap();
        assert!(p.max_abs() < 1e-15);
    }

    #[test]
    fn product_matches_brute_convolution() {
        let g = GridSpec::new(8).unwrap();
        let mut rng = rng(4);
        for _ in 0..5 {
            let f = random_field(g, &mut rng);
            let h = random_field(g, &mut rng);
            let p = dealiased_product(&f, &h).unwrap();
            assert!(rel_diff(&p, &brute_convolution(&f, &h)) < 1e-12);
            assert!(p.hermitian_defect() < 1e-13);
        }
    }

    #[test]
    fn product_grid_mismatch() {
        let a = SpectralField::zeros(GridSpec::new(8).unwrap());
        let b = SpectralField::zeros(GridSpec::new(4).unwrap());
        assert!(matches!(dealiased_product(&a, &b), Err(Error::GridMismatch { .. })));
    }

    #[test]
    fn gradient_of_cosine() {
        let g = GridSpec::new(8).unwrap();
        let mut f = SpectralField::zeros(g);
        f.set_pair(1, 0, Complex64::new(0.5, 0.0));
        let (d1, d2) = gradient(&f);
        let p = to_physical(&d1);
        let n = g.n_grid();
        for i in 0..n {
            let x = i as f64 / n as f64;
            assert!((p.at(i, 0) + TWO_PI * (TWO_PI * x).sin()).abs() < 1e-12);
        }
        assert!(d2.max_abs() == 0.0);
    }

    #[test]
    fn gradient_matches_finite_difference() {
        // centred differences on an 8x refined grid; error O(h^2)
        let g = GridSpec::new(16).unwrap();
        let mut rng = rng(5);
        let f = random_field(g, &mut rng);
        let (d1, _) = gradient(&f);
        let fine = 8 * g.n_grid();
        let vals = sample(&f, fine);
        let exact = sample(&d1, fine);
        let h = 1.0 / fine as f64;
        let mut err: f64 = 0.0;
        for i in 0..fine {
            for j in 0..fine {
                let ip = (i + 1) % fine;
                let im = (i + fine - 1) % fine;
                let fd = (vals[ip * fine + j] - vals[im * fine + j]) / (2.0 * h);
                err = err.max((fd - exact[i * fine + j]).abs());
            }
        }
        let scale = exact.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        // third derivative bound: (2 pi N sqrt 2)^2 / 6 * h^2 relative
        let bound = (TWO_PI * 16.0 * 2f64.sqrt()).powi(2) / 6.0 * h * h;
        assert!(err / scale < bound, "{} vs {}", err / scale, bound);
    }

    #[test]
    fn biot_savart_single_mode() {
        let g = GridSpec::new(8).unwrap();
        let mut w = SpectralField::zeros(g);
        w.set_pair(1, 0, Complex64::new(1.0, 0.0));
        let u = biot_savart(&w).unwrap();
        assert!(u.u1.get(1, 0).norm() < 1e-16);
        assert!((u.u2.get(1, 0) - Complex64::new(0.0, -1.0 / TWO_PI)).norm() < 1e-16);
        assert!(biot_savart(&SpectralField::zeros(g)).unwrap().max_abs() == 0.0);
    }

    #[test]
    fn biot_savart_inverts_curl() {
        for n in [4, 8, 16] {
            let g = GridSpec::new(n).unwrap();
            let mut rng = rng(6 + n as u64);
            let w = mean_free(random_field(g, &mut rng));
            let u = biot_savart(&w).unwrap();
            assert!(rel_diff(&curl(&u), &w) < 1e-12);
            assert!(divergence(&u).max_abs() < 1e-12 * w.max_abs());
            assert!(u.max_divergence() <= 1e-12 * u.max_abs());
        }
    }

    #[test]
    fn biot_savart_rejects_mean() {
        let g = GridSpec::new(4).unwrap();
        let mut w = SpectralField::zeros(g);
        w.set(0, 0, Complex64::new(1.0, 0.0));
        assert!(matches!(biot_savart(&w), Err(Error::NonZeroMean { .. })));
    }

    #[test]
    fn leray_fixes_range_and_kills_gradients() {
        let g = GridSpec::new(8).unwrap();
        let mut rng = rng(7);
        let w = mean_free(random_field(g, &mut rng));
        let u = biot_savart(&w).unwrap();
        let p = project_leray(&u.u1, &u.u2).unwrap();
        assert!(p.u1.sub(&u.u1).unwrap().max_abs() < 1e-14 * u.max_abs());
        assert!(p.u2.sub(&u.u2).unwrap().max_abs() < 1e-14 * u.max_abs());

        let mut a = SpectralField::zeros(g);
        let mut b = SpectralField::zeros(g);
        a.set_pair(1, 1, Complex64::new(1.0, 0.0));
        b.set_pair(1, 1, Complex64::new(1.0, 0.0));
        let q = project_leray(&a, &b).unwrap();
        assert!(q.max_abs() < 1e-16);
    }

    #[test]
    fn leray_is_idempotent() {
        let g = GridSpec::new(8).unwrap();
        let mut rng = rng(8);
        let a = random_field(g, &mut rng);
        let b = random_field(g, &mut rng);
        let p = project_leray(&a, &b).unwrap();
        let pp = project_leray(&p.u1, &p.u2).unwrap();
        assert!(pp.u1.sub(&p.u1).unwrap().max_abs() < 1e-14 * p.max_abs());
        assert!(pp.u2.sub(&p.u2).unwrap().max_abs() < 1e-14 * p.max_abs());
        assert!(p.max_divergence() < 1e-13 * p.max_abs());
    }
}
