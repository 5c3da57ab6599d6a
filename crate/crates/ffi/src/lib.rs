//! C ABI for the sveuler solver.
//!
//! A simulation is an opaque [`SvSimulation`] handle created from
//! configuration text (`key = value` lines) and released with
//! [`sv_simulation_free`]. Every fallible call returns an [`SvStatus`]; on
//! failure a message is available from [`sv_last_error_message`] on the
//! same thread. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use sveuler::experiment::{RunConfig, Simulation};
use sveuler::spectral::to_physical;
use sveuler::sv::{evaluate_regime, Integrability, RegimeParams};
use sveuler::Error;

/// Result codes. `INVALID_CONFIG`, `BLOW_UP` and `IO` share their values
/// with the command line exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvStatus {
    Ok = 0,
    InvalidConfig = 2,
    BlowUp = 3,
    Io = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    BufferTooSmall = 7,
    Panic = 8,
}

/// Opaque simulation handle.
pub struct SvSimulation {
    inner: Simulation,
}

/// Diagnostics of the current state; see the `diagnostics.csv` columns.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvDiagnostics {
    pub step: u64,
    pub time: f64,
    pub dt: f64,
    pub energy: f64,
    pub enstrophy: f64,
    pub omega_l1: f64,
    pub omega_l2: f64,
    pub omega_linf: f64,
    pub omega_lp: f64,
    pub omega_mean: f64,
    pub negative_part: f64,
    pub high_mode_mass: f64,
    pub max_speed: f64,
    pub max_divergence: f64,
    pub energy_rate: f64,
    pub enstrophy_rate: f64,
    pub err1_l2: f64,
    pub err2_l2: f64,
}

/// Spectral-decay parameter sequences at a given `N`.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SvRegimeReport {
    /// 1 when every regime inequality holds.
    pub valid: u8,
    pub nu: f64,
    pub theta_bound: f64,
    pub m_n: f64,
    pub a_n: f64,
    pub eps_n: f64,
    pub decay_alpha: f64,
    pub beta_n: f64,
    pub t_star: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

enum Failure {
    Core(Error),
    Null(&'static str),
    Argument(String),
    Buffer { needed: usize, given: usize },
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn set_last_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SvStatus {
    let (status, msg) = match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => (SvStatus::Ok, String::new()),
        Ok(Err(Failure::Core(e))) => {
            let status = match e.exit_code() {
                3 => SvStatus::BlowUp,
                4 => SvStatus::Io,
                _ => SvStatus::InvalidConfig,
            };
            (status, e.to_string())
        }
        Ok(Err(Failure::Null(what))) => (SvStatus::NullPointer, format!("null pointer: {what}")),
        Ok(Err(Failure::Argument(msg))) => (SvStatus::InvalidArgument, msg),
        Ok(Err(Failure::Buffer { needed, given })) => (
            SvStatus::BufferTooSmall,
            format!("buffer holds {given} values, {needed} needed"),
        ),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            (SvStatus::Panic, format!("internal panic: {msg}"))
        }
    };
    set_last_error(msg);
    status
}

unsafe fn str_arg<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure::Argument(format!("{what} is not valid UTF-8")))
}

unsafe fn sim_ref<'a>(sim: *const SvSimulation) -> Result<&'a SvSimulation, Failure> {
    sim.as_ref().ok_or(Failure::Null("simulation"))
}

unsafe fn sim_mut<'a>(sim: *mut SvSimulation) -> Result<&'a mut SvSimulation, Failure> {
    sim.as_mut().ok_or(Failure::Null("simulation"))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn fill(buf: *mut f64, len: usize, values: &[f64]) -> Result<(), Failure> {
    if buf.is_null() {
        return Err(Failure::Null("buffer"));
    }
    if len < values.len() {
        return Err(Failure::Buffer {
            needed: values.len(),
            given: len,
        });
    }
    ptr::copy_nonoverlapping(values.as_ptr(), buf, values.len());
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sv_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf` (truncated,
/// always NUL-terminated when `len > 0`) and returns the full message
/// length excluding the terminator. An empty message means the last call
/// succeeded.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn sv_last_error_message(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let msg = e.borrow();
        if !buf.is_null() && len > 0 {
            let n = msg.len().min(len - 1);
            ptr::copy_nonoverlapping(msg.as_ptr().cast::<c_char>(), buf, n);
            *buf.add(n) = 0;
        }
        msg.len()
    })
}

/// Builds a simulation from configuration text and stores the handle in
/// `*out`. On failure `*out` is set to null.
///
/// # Safety
/// `config` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_new(config: *const c_char, out: *mut *mut SvSimulation) -> SvStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure::Null("out"));
        }
        out.write(ptr::null_mut());
        let cfg = RunConfig::parse(str_arg(config, "config")?)?;
        let sim = Box::new(SvSimulation {
            inner: Simulation::new(cfg)?,
        });
        out.write(Box::into_raw(sim));
        Ok(())
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `sim` must be null or a handle from [`sv_simulation_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_free(sim: *mut SvSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Takes one time step; the step size is stored in `*dt` when `dt` is not
/// null.
///
/// # Safety
/// `sim` must be a live handle; `dt` null or writable.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_step(sim: *mut SvSimulation, dt: *mut f64) -> SvStatus {
    guard(|| {
        let taken = sim_mut(sim)?.inner.step()?;
        if !dt.is_null() {
            dt.write(taken);
        }
        Ok(())
    })
}

/// Integrates until the simulation time equals `t` exactly.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_advance(sim: *mut SvSimulation, t: f64) -> SvStatus {
    guard(|| {
        let s = sim_mut(sim)?;
        if !t.is_finite() || t < s.inner.time() {
            return Err(Failure::Argument(format!(
                "target time {t} is not a finite time at or after {}",
                s.inner.time()
            )));
        }
        s.inner.advance_to(t)?;
        Ok(())
    })
}

/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_time(sim: *const SvSimulation, out: *mut f64) -> SvStatus {
    guard(|| write_out(out, sim_ref(sim)?.inner.time(), "out"))
}

/// Number of steps taken so far.
///
/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_steps(sim: *const SvSimulation, out: *mut u64) -> SvStatus {
    guard(|| write_out(out, sim_ref(sim)?.inner.steps() as u64, "out"))
}

/// Physical grid size `N_G`; vorticity buffers hold `N_G * N_G` values and
/// spectra `N_G / 2 + 1`.
///
/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_n_grid(sim: *const SvSimulation, out: *mut usize) -> SvStatus {
    guard(|| write_out(out, sim_ref(sim)?.inner.grid().n_grid(), "out"))
}

/// Copies the vorticity on the `N_G x N_G` grid, row-major with the `x1`
/// index outer, into `buf`.
///
/// # Safety
/// `sim` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_vorticity(sim: *const SvSimulation, buf: *mut f64, len: usize) -> SvStatus {
    guard(|| {
        let field = to_physical(&sim_ref(sim)?.inner.vorticity());
        fill(buf, len, field.values())
    })
}

/// Copies the shell spectrum `E(kappa)`, `kappa = 0..=N`, into `buf`.
///
/// # Safety
/// `sim` must be a live handle; `buf` must hold `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_spectrum(sim: *const SvSimulation, buf: *mut f64, len: usize) -> SvStatus {
    guard(|| fill(buf, len, &sim_ref(sim)?.inner.spectrum().e_kappa))
}

/// # Safety
/// `sim` must be a live handle; `out` writable.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_diagnostics(sim: *const SvSimulation, out: *mut SvDiagnostics) -> SvStatus {
    guard(|| {
        let r = sim_ref(sim)?.inner.diagnostics()?;
        let d = SvDiagnostics {
            step: r.step as u64,
            time: r.time,
            dt: r.dt,
            energy: r.energy,
            enstrophy: r.enstrophy,
            omega_l1: r.omega_l1,
            omega_l2: r.omega_l2,
            omega_linf: r.omega_linf,
            omega_lp: r.omega_lp,
            omega_mean: r.omega_mean,
            negative_part: r.negative_part,
            high_mode_mass: r.high_mode_mass,
            max_speed: r.max_speed,
            max_divergence: r.max_divergence,
            energy_rate: r.energy_rate,
            enstrophy_rate: r.enstrophy_rate,
            err1_l2: r.err1_l2,
            err2_l2: r.err2_l2,
        };
        write_out(out, d, "out")
    })
}

/// Writes the current vorticity as a snapshot file.
///
/// # Safety
/// `sim` must be a live handle; `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn sv_simulation_write_snapshot(sim: *const SvSimulation, path: *const c_char) -> SvStatus {
    guard(|| {
        let s = sim_ref(sim)?;
        s.inner.write_snapshot(Path::new(str_arg(path, "path")?))?;
        Ok(())
    })
}

/// Evaluates the spectral-decay regime at `n` for `L^p` data, or for
/// measure data when `measure` is non-zero (`p` is then ignored). An
/// invalid parameter choice is reported through `valid`, not the status.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn sv_regime_evaluate(
    n: u64,
    theta: f64,
    s: f64,
    p: f64,
    measure: u8,
    b: f64,
    out: *mut SvRegimeReport,
) -> SvStatus {
    guard(|| {
        let params = RegimeParams {
            integrability: if measure != 0 {
                Integrability::Measure
            } else {
                Integrability::Lp(p)
            },
            theta,
            s,
            b,
        };
        let r = evaluate_regime(&params, n)?;
        let report = SvRegimeReport {
            valid: r.valid as u8,
            nu: r.nu,
            theta_bound: r.theta_bound,
            m_n: r.m_n,
            a_n: r.a_n,
            eps_n: r.eps_n,
            decay_alpha: r.decay_alpha,
            beta_n: r.beta_n,
            t_star: r.t_star,
        };
        write_out(out, report, "out")
    })
}
