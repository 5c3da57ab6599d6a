//! Mode band and collocation grid sizes.

use crate::error::{Error, Result};

/// Resolution of a spectral field on the unit torus.
///
/// A field keeps every Fourier mode with `|k|_inf <= n_modes`. Its physical
/// representation lives on an `n_grid = 2 * n_modes` collocation grid, and
/// quadratic products are formed on an `n_padded` grid that is large enough
/// for the product of two band-limited fields to come back alias-free.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridSpec {
    n_modes: usize,
    n_grid: usize,
    n_padded: usize,
}

impl GridSpec {
    pub fn new(n_modes: usize) -> Result<Self> {
        if n_modes < 4 {
            return Err(Error::InvalidGrid(format!("n_modes must be at least 4, got {n_modes}")));
        }
        if !n_modes.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n_modes must be even, got {n_modes}")));
        }
        Ok(GridSpec {
            n_modes,
            n_grid: 2 * n_modes,
            n_padded: padded_size(n_modes),
        })
    }

    /// Grid with `n_grid` collocation points per direction.
    pub fn from_n_grid(n_grid: usize) -> Result<Self> {
        if !n_grid.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!("n_grid must be even, got {n_grid}")));
        }
        Self::new(n_grid / 2)
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn n_grid(&self) -> usize {
        self.n_grid
    }

    pub fn n_padded(&self) -> usize {
        self.n_padded
    }

    /// Number of retained modes per direction, `2N + 1`.
    pub fn band_width(&self) -> usize {
        2 * self.n_modes + 1
    }

    /// Number of stored coefficients, `(2N + 1)^2`.
    pub fn band_len(&self) -> usize {
        self.band_width() * self.band_width()
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.n_grid as f64
    }

    #[inline]
    pub fn index(&self, k1: i64, k2: i64) -> usize {
        let n = self.n_modes as i64;
        debug_assert!(k1.abs() <= n && k2.abs() <= n);
        ((k1 + n) as usize) * self.band_width() + (k2 + n) as usize
    }

    #[inline]
    pub fn wavevector(&self, idx: usize) -> (i64, i64) {
        let w = self.band_width();
        let n = self.n_modes as i64;
        ((idx / w) as i64 - n, (idx % w) as i64 - n)
    }

    pub fn contains(&self, k1: i64, k2: i64) -> bool {
        let n = self.n_modes as i64;
        k1.abs() <= n && k2.abs() <= n
    }

    /// All retained wavevectors in storage order.
    pub fn modes(&self) -> impl Iterator<Item = (i64, i64)> {
        let n = self.n_modes as i64;
        (-n..=n).flat_map(move |k1| (-n..=n).map(move |k2| (k1, k2)))
    }
}

/// Smallest 5-smooth integer `>= 3N + 1`.
///
/// Products of two fields with `|k|_inf <= N` reach `|k|_inf = 2N`; on an
/// `M`-point grid mode `2N` wraps to `2N - M`, which stays outside the band
/// only when `M > 3N`.
fn padded_size(n_modes: usize) -> usize {
    smooth_size(3 * n_modes + 1)
}

/// Smallest 5-smooth integer `>= min`.
pub(crate) fn smooth_size(min: usize) -> usize {
    let mut m = min;
    while !is_5_smooth(m) {
        m += 1;
    }
    m
}

fn is_5_smooth(mut m: usize) -> bool {
    for p in [2, 3, 5] {
        while m.is_multiple_of(p) {
            m /= p;
        }
    }
    m == 1
}

/// Minimum-image signed distance on the unit circle.
#[inline]
pub fn periodic_delta(a: f64, b: f64) -> f64 {
    let d = a - b;
    d - d.round()
}
