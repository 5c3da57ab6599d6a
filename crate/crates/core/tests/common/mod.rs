//! Helpers shared by the integration tests.
#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sveuler::spectral::sample;
use sveuler::{GridSpec, SpectralField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random real field on the closed band `|k|_inf <= N`.
pub fn random_field(g: GridSpec, rng: &mut ChaCha8Rng) -> SpectralField {
    let mut f = SpectralField::zeros(g);
    for (k1, k2) in g.modes() {
        if (k1, k2) >= (0, 0) {
            let re = rng.gen_range(-1.0..1.0);
            let im = if (k1, k2) == (0, 0) {
                0.0
            } else {
                rng.gen_range(-1.0..1.0)
            };
            f.set_pair(k1, k2, Complex64::new(re, im));
        }
    }
    f
}

pub fn mean_free(mut f: SpectralField) -> SpectralField {
    f.set(0, 0, Complex64::default());
    f
}

/// Removes the `|k|_inf = N` shell, which the `N_G` grid does not resolve
/// independently.
pub fn zero_nyquist(mut f: SpectralField) -> SpectralField {
    let n = f.grid().n_modes() as i64;
    for (k1, k2) in f.grid().modes() {
        if k1.abs() == n || k2.abs() == n {
            f.set(k1, k2, Complex64::default());
        }
    }
    f
}

/// Random field with a random spectral slope, so that tests see both
/// smooth and rough polynomials.
pub fn random_polynomial(g: GridSpec, rng: &mut ChaCha8Rng) -> SpectralField {
    let slope: f64 = rng.gen_range(0.0..3.0);
    let f = random_field(g, rng);
    f.map_modes(|k1, k2, c| c / (1.0 + ((k1 * k1 + k2 * k2) as f64).sqrt()).powf(slope))
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Largest pointwise difference of two fields on the `N_G` grid.
pub fn grid_drift(a: &SpectralField, b: &SpectralField) -> f64 {
    let m = a.grid().n_grid();
    max_abs_diff(&sample(a, m), &sample(b, m))
}
