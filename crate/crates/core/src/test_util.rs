use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::spectral::{biot_savart, GridSpec, PhysicalField, SpectralField, VelocityField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random Hermitian field on the closed band, coefficients in the unit square.
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

/// Removes the `|k|_inf = N` shell, which the `N_G` grid cannot represent
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

pub fn mean_free(mut f: SpectralField) -> SpectralField {
    f.set(0, 0, Complex64::default());
    f
}

pub fn random_grid(g: GridSpec, rng: &mut ChaCha8Rng) -> PhysicalField {
    PhysicalField::from_fn(g, |_, _| rng.gen_range(-1.0..1.0))
}

pub fn random_velocity(g: GridSpec, rng: &mut ChaCha8Rng) -> VelocityField {
    biot_savart(&mean_free(random_field(g, rng))).unwrap()
}
