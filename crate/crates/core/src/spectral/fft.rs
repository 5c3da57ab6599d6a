//! Two-dimensional FFTs between a mode band and square collocation grids.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::field::SpectralField;
use super::grid::GridSpec;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plans(m: usize) -> (Arc<dyn Fft<f64>>, Arc<dyn Fft<f64>>) {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        (p.plan_fft_forward(m), p.plan_fft_inverse(m))
    })
}

thread_local! {
    // Large buffers are recycled: fresh allocations of grid-sized arrays cost
    // more in page faults than the transforms themselves.
    static POOL: RefCell<Vec<Vec<Complex64>>> = const { RefCell::new(Vec::new()) };
}

const POOL_CAPACITY: usize = 8;

/// A buffer of length `len` with unspecified contents.
pub(crate) fn take_buffer(len: usize) -> Vec<Complex64> {
    let mut buf = POOL.with(|p| p.borrow_mut().pop()).unwrap_or_default();
    buf.resize(len, Complex64::default());
    buf
}

pub(crate) fn take_zeroed(len: usize) -> Vec<Complex64> {
    let mut buf = take_buffer(len);
    buf.fill(Complex64::default());
    buf
}

pub(crate) fn recycle(buf: Vec<Complex64>) {
    POOL.with(|p| {
        let mut p = p.borrow_mut();
        if p.len() < POOL_CAPACITY {
            p.push(buf);
        }
    });
}

/// Unnormalised in-place 2D transform of a row-major `m x m` array. Rows that
/// are identically zero skip the first pass, which prunes the padding rows of
/// a scattered mode band.
fn fft2(data: &mut [Complex64], m: usize, inverse: bool) {
    debug_assert_eq!(data.len(), m * m);
    let (fwd, inv) = plans(m);
    let fft = if inverse { inv } else { fwd };
    let mut scratch = vec![Complex64::default(); fft.get_inplace_scratch_len()];
    for row in data.chunks_exact_mut(m) {
        if row.iter().any(|z| *z != Complex64::default()) {
            fft.process_with_scratch(row, &mut scratch);
        }
    }
    let mut t = take_buffer(m * m);
    transpose::transpose(data, &mut t, m, m);
    fft.process_with_scratch(&mut t, &mut scratch);
    transpose::transpose(&t, data, m, m);
    recycle(t);
}

#[inline]
fn wrap(k: i64, m: usize) -> usize {
    k.rem_euclid(m as i64) as usize
}

/// Scatters band coefficients onto an `m x m` spectrum. Modes that coincide
/// on the grid (the `+-N` Nyquist pair when `m = 2N`) are summed.
fn scatter(f: &SpectralField, m: usize, scale: Complex64, out: &mut [Complex64]) {
    let grid = f.grid();
    for (idx, (k1, k2)) in grid.modes().enumerate() {
        let c = f.coeffs()[idx];
        if c == Complex64::default() {
            continue;
        }
        out[wrap(k1, m) * m + wrap(k2, m)] += scale * c;
    }
}

/// Evaluates `a + i b` on an `m x m` grid and returns the real and imaginary
/// parts, i.e. the physical values of two real fields from one transform.
pub(crate) fn pair_to_grid(a: &SpectralField, b: Option<&SpectralField>, m: usize) -> Vec<Complex64> {
    assert!(m >= a.grid().n_grid(), "grid too coarse for the mode band");
    let mut buf = take_zeroed(m * m);
    scatter(a, m, Complex64::new(1.0, 0.0), &mut buf);
    if let Some(b) = b {
        assert_eq!(a.grid(), b.grid());
        scatter(b, m, Complex64::new(0.0, 1.0), &mut buf);
    }
    fft2(&mut buf, m, true);
    buf
}

pub(crate) fn to_grid(f: &SpectralField, m: usize) -> Vec<f64> {
    let buf = pair_to_grid(f, None, m);
    let values = buf.iter().map(|z| z.re).collect();
    recycle(buf);
    values
}

/// Forward transforms `p + i q` given on an `m x m` grid and splits the result
/// into the band coefficients of the two real fields.
pub(crate) fn grid_to_pair(mut buf: Vec<Complex64>, m: usize, grid: GridSpec) -> (SpectralField, SpectralField) {
    assert!(m >= grid.n_grid(), "grid too coarse for the mode band");
    fft2(&mut buf, m, false);
    let norm = 1.0 / (m * m) as f64;
    let n = grid.n_modes() as i64;
    let nyquist = m == grid.n_grid();
    let mut p = SpectralField::zeros(grid);
    let mut q = SpectralField::zeros(grid);
    for (idx, (k1, k2)) in grid.modes().enumerate() {
        let z = buf[wrap(k1, m) * m + wrap(k2, m)];
        let zc = buf[wrap(-k1, m) * m + wrap(-k2, m)].conj();
        let mut w = norm;
        if nyquist {
            // the +-N pair shares one grid frequency; split it evenly
            if k1.abs() == n {
                w *= 0.5;
            }
            if k2.abs() == n {
                w *= 0.5;
            }
        }
        p.coeffs_mut()[idx] = (z + zc) * (0.5 * w);
        q.coeffs_mut()[idx] = (z - zc) * Complex64::new(0.0, -0.5 * w);
    }
    recycle(buf);
    (p, q)
}

/// Forward transform without assuming a real field.
pub(crate) fn complex_grid_to_band(mut buf: Vec<Complex64>, m: usize, grid: GridSpec) -> SpectralField {
    assert!(m > grid.n_grid(), "complex extraction needs a grid finer than the band");
    fft2(&mut buf, m, false);
    let norm = 1.0 / (m * m) as f64;
    let f = SpectralField::from_fn(grid, |k1, k2| buf[wrap(k1, m) * m + wrap(k2, m)] * norm);
    recycle(buf);
    f
}

pub(crate) fn real_grid_to_band(values: &[f64], m: usize, grid: GridSpec) -> SpectralField {
    assert_eq!(values.len(), m * m);
    let mut buf = take_buffer(m * m);
    for (z, &v) in buf.iter_mut().zip(values) {
        *z = Complex64::new(v, 0.0);
    }
    grid_to_pair(buf, m, grid).0
}
