//! Convergence studies, spectrum reports, parameter checks and snapshot
//! differences.

use std::path::{Path, PathBuf};
use std::thread;

use super::{simulate, RunConfig, Snapshot};
use crate::diagnostics::{energy_spectrum, l2_error, SpectrumSeries};
use crate::error::{Error, Result};
use crate::spectral::{biot_savart, GridSpec, SpectralField};
use crate::sv::{evaluate_regime, RegimeReport};

/// `E_{N_G}(t) = ||u_{N_G}(t) - u_ref(t)||_{L^2}` for every level and time.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    /// Physical grid sizes, ascending; the last one is the reference.
    pub levels: Vec<usize>,
    pub times: Vec<f64>,
    /// `errors[level][time]`.
    pub errors: Vec<Vec<f64>>,
}

impl ConvergenceTable {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_grid,time,l2_error\n");
        for (level, row) in self.levels.iter().zip(&self.errors) {
            for (t, e) in self.times.iter().zip(row) {
                s.push_str(&format!("{level},{t},{e:e}\n"));
            }
        }
        s
    }

    /// Errors of all levels at time index `i`.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.errors.iter().map(|r| r[i]).collect()
    }
}

/// Runs `base` at every physical grid size in `levels` (ascending, last is
/// the reference) and compares velocities at `times`. Levels run on
/// separate threads.
pub fn convergence_study(base: &RunConfig, levels: &[usize], times: &[f64]) -> Result<ConvergenceTable> {
    if levels.is_empty() {
        return Err(Error::Config("convergence study needs at least one level".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config(format!(
            "levels must be strictly ascending, got {levels:?}"
        )));
    }
    if times.is_empty() {
        return Err(Error::Config("convergence study needs at least one time".into()));
    }
    let reference = *levels.last().expect("non-empty");
    for &l in levels {
        GridSpec::from_n_grid(l)?;
        if !reference.is_multiple_of(l) {
            return Err(Error::GridIncompatible { coarse: l, reference });
        }
    }
    let t_end = times.iter().copied().fold(0.0, f64::max);
    let configs: Vec<RunConfig> = levels
        .iter()
        .map(|&l| {
            let mut c = base.clone();
            c.n_modes = l / 2;
            c.t_end = t_end;
            c.snapshot_times = times.to_vec();
            // only the snapshots are compared; per-step rows are never read
            c.diagnostics_every = usize::MAX;
            c.validate().map(|_| c)
        })
        .collect::<Result<_>>()?;

    let results: Vec<Result<Vec<(f64, SpectralField)>>> = thread::scope(|s| {
        let handles: Vec<_> = configs
            .iter()
            .map(|c| s.spawn(move || simulate(c).map(|r| r.outputs)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("level thread panicked"))
            .collect()
    });
    let outputs: Vec<Vec<(f64, SpectralField)>> = results.into_iter().collect::<Result<_>>()?;

    let lookup = |out: &[(f64, SpectralField)], t: f64| -> Result<SpectralField> {
        out.iter()
            .find(|(s, _)| *s == t)
            .map(|(_, w)| w.clone())
            .ok_or_else(|| Error::Config(format!("no output recorded at t = {t}")))
    };
    let reference_out = outputs.last().expect("non-empty");
    let mut errors = Vec::with_capacity(levels.len());
    for out in &outputs {
        let mut row = Vec::with_capacity(times.len());
        for &t in times {
            let u = biot_savart(&lookup(out, t)?)?;
            let u_ref = biot_savart(&lookup(reference_out, t)?)?;
            row.push(l2_error(&u, &u_ref)?);
        }
        errors.push(row);
    }
    Ok(ConvergenceTable {
        levels: levels.to_vec(),
        times: times.to_vec(),
        errors,
    })
}

/// CSV of `E(kappa)` rows, optionally labelled by source file.
pub(crate) fn spectra_csv(spectra: &[SpectrumSeries], files: Option<&[PathBuf]>) -> String {
    let width = spectra.iter().map(|s| s.e_kappa.len()).max().unwrap_or(0);
    let mut out = String::new();
    if files.is_some() {
        out.push_str("file,");
    }
    out.push_str("time");
    for k in 0..width {
        out.push_str(&format!(",e_{k}"));
    }
    out.push('\n');
    for (i, s) in spectra.iter().enumerate() {
        if let Some(f) = files {
            out.push_str(&format!("{},", f[i].display()));
        }
        out.push_str(&format!("{}", s.time));
        for k in 0..width {
            out.push_str(&format!(",{:e}", s.e_kappa.get(k).copied().unwrap_or(0.0)));
        }
        out.push('\n');
    }
    out
}

/// One `E(kappa)` row per snapshot file. Files of different resolutions
/// are padded with zeros to the widest spectrum.
pub fn spectrum_report(paths: &[PathBuf]) -> Result<String> {
    let spectra = paths
        .iter()
        .map(|p| {
            let snap = Snapshot::read(p)?;
            Ok(energy_spectrum(&snap.to_spectral(), snap.time))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(spectra_csv(&spectra, Some(paths)))
}

/// `||u_a - u_b||_{L^2}` between two snapshots; the coarser one is embedded
/// into the finer band.
pub fn diff_snapshots(a: &Path, b: &Path) -> Result<f64> {
    let wa = Snapshot::read(a)?.to_spectral();
    let wb = Snapshot::read(b)?.to_spectral();
    let (ua, ub) = (biot_savart(&wa)?, biot_savart(&wb)?);
    if ua.grid().n_grid() <= ub.grid().n_grid() {
        l2_error(&ua, &ub)
    } else {
        l2_error(&ub, &ua)
    }
}

/// Regime report for the configured `(N, theta, s, p, B)` plus warnings
/// where the run's practical choices leave the proven regime.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub regime: Option<RegimeReport>,
    pub warnings: Vec<String>,
}

impl ValidationReport {
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        if let Some(r) = &self.regime {
            for (k, v) in r.key_values() {
                s.push_str(&format!("{k} = {v}\n"));
            }
        }
        for w in &self.warnings {
            s.push_str(&format!("warning: {w}\n"));
        }
        s
    }
}

/// Never fails on parameter choices: problems become warnings.
pub fn validate_config(cfg: &RunConfig) -> ValidationReport {
    let mut warnings = Vec::new();
    if let Err(e) = cfg.validate() {
        warnings.push(format!("configuration: {e}"));
    }
    let regime = match evaluate_regime(&cfg.regime, cfg.n_modes as u64) {
        Ok(r) => Some(r),
        Err(e) => {
            warnings.push(e.to_string());
            None
        }
    };
    if let Some(r) = &regime {
        for v in &r.violations {
            warnings.push(format!("regime inequality violated: {v}"));
        }
        if let Ok(grid) = cfg.grid() {
            let sv = cfg.sv_config();
            let practical_eps = sv.eps_n(grid);
            if practical_eps < r.eps_n {
                warnings.push(format!(
                    "practical viscosity epsilon/N_G = {practical_eps:e} is below the regime's eps_N = {:e}",
                    r.eps_n
                ));
            }
            let k0 = sv.k0(grid);
            if k0 > r.m_n {
                warnings.push(format!(
                    "cutoff k0 = {k0} exceeds the regime's m_N = floor(N^theta) = {}",
                    r.m_n
                ));
            }
            if matches!(
                cfg.experiment,
                super::Experiment::FatSheet | super::Experiment::ThinSheet
            ) && !cfg.sheet().resolvable(grid)
            {
                warnings.push(format!(
                    "sheet width rho_N = {:e} is below one padded cell 1/{}",
                    cfg.sheet().width.rho_n(grid),
                    grid.n_padded()
                ));
            }
        }
    }
    ValidationReport { regime, warnings }
}
