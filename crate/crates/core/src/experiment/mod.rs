//! Experiment driver: configuration, initial data, runs with diagnostics and
//! snapshots, and the studies built on top of them.

mod config;
mod simulation;
mod snapshot;
mod study;

pub use config::{parse_pairs, Experiment, RunConfig};
pub use simulation::Simulation;
pub use snapshot::{write_atomic, Snapshot, HEADER_LEN, MAGIC, VERSION};
pub use study::{
    convergence_study, diff_snapshots, spectrum_report, validate_config, ConvergenceTable, ValidationReport,
};

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::diagnostics::{self, SpectrumSeries};
use crate::error::{Error, Result};
use crate::initial::{kissing_vortices, sheet_vorticity_with_offset, taylor_green};
use crate::integrator::{max_speed, Flow, FlowState, Observer};
use crate::spectral::SpectralField;
use crate::sv::SvOperator;

/// Column names of `diagnostics.csv`, in order.
pub const DIAGNOSTICS_HEADER: [&str; 18] = [
    "step",
    "time",
    "dt",
    "energy",
    "enstrophy",
    "omega_l1",
    "omega_l2",
    "omega_linf",
    "omega_lp",
    "omega_mean",
    "negative_part",
    "high_mode_mass",
    "max_speed",
    "max_divergence",
    "energy_rate",
    "enstrophy_rate",
    "err1_l2",
    "err2_l2",
];

/// One diagnostics record. `energy = ||u||^2 / 2`, `enstrophy = ||w||^2 / 2`;
/// the rates are their exact semi-discrete time derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub step: usize,
    pub time: f64,
    /// Size of the step that produced this state; 0 for the initial state.
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

impl DiagnosticsRow {
    pub fn values(&self) -> [f64; 18] {
        [
            self.step as f64,
            self.time,
            self.dt,
            self.energy,
            self.enstrophy,
            self.omega_l1,
            self.omega_l2,
            self.omega_linf,
            self.omega_lp,
            self.omega_mean,
            self.negative_part,
            self.high_mode_mass,
            self.max_speed,
            self.max_divergence,
            self.energy_rate,
            self.enstrophy_rate,
            self.err1_l2,
            self.err2_l2,
        ]
    }

    pub fn csv_line(&self) -> String {
        let v = self.values();
        let mut s = self.step.to_string();
        for x in &v[1..] {
            s.push(',');
            s.push_str(&format!("{x:e}"));
        }
        s
    }
}

/// Evaluates every diagnostic of `state`.
pub fn measure(
    state: &FlowState,
    op: &SvOperator,
    norm_p: f64,
    negative_offset: f64,
    step: usize,
    time: f64,
    dt: f64,
) -> Result<DiagnosticsRow> {
    let omega = state.vorticity();
    let u = state.velocity()?;
    let norms = crate::sv::FieldNorms::of(&omega);
    let rates = diagnostics::dissipation_rates(&omega, &u, op)?;
    Ok(DiagnosticsRow {
        step,
        time,
        dt,
        energy: 0.5 * u.norm_sq(),
        enstrophy: 0.5 * omega.norm_sq(),
        omega_l1: norms.l1,
        omega_l2: norms.l2,
        omega_linf: norms.linf,
        omega_lp: diagnostics::lp_norm(&omega, norm_p)?,
        omega_mean: omega.mean().re,
        negative_part: diagnostics::negative_part_integral(&omega, negative_offset),
        high_mode_mass: diagnostics::high_mode_mass(&omega),
        max_speed: max_speed(&u),
        max_divergence: u.max_divergence(),
        energy_rate: rates.energy_rate,
        enstrophy_rate: rates.enstrophy_rate,
        err1_l2: rates.err1_norms.l2,
        err2_l2: rates.err2_norms.l2,
    })
}

/// Mean-free initial vorticity of the configured experiment together with
/// the background level that was subtracted (non-zero only for sheets).
pub fn initial_vorticity(cfg: &RunConfig) -> Result<(SpectralField, f64)> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    Ok(match cfg.experiment {
        config::Experiment::FatSheet | config::Experiment::ThinSheet => {
            sheet_vorticity_with_offset(grid, &cfg.sheet())?
        }
        config::Experiment::KissingVortices => (kissing_vortices(grid, &cfg.eddies())?, 0.0),
        config::Experiment::TaylorGreen => (taylor_green(grid, cfg.amplitude), 0.0),
        config::Experiment::Custom => {
            let path = cfg.input.as_ref().expect("validated");
            let snap = Snapshot::read(path)?;
            let mean = snap.vorticity.mean();
            (snap.to_spectral().resample(grid), mean)
        }
    })
}

/// Everything a finished run produced.
#[derive(Debug, Clone)]
pub struct RunSummary {
    pub state: FlowState,
    pub time: f64,
    pub steps: usize,
    pub initial: SpectralField,
    /// Background subtracted from the initial data.
    pub background: f64,
    pub negative_offset: f64,
    pub rows: Vec<DiagnosticsRow>,
    /// Vorticity at each snapshot time.
    pub outputs: Vec<(f64, SpectralField)>,
    pub spectra: Vec<SpectrumSeries>,
    pub snapshot_paths: Vec<PathBuf>,
}

struct Recorder<'a> {
    op: &'a SvOperator,
    cfg: &'a RunConfig,
    offset: f64,
    rows: Vec<DiagnosticsRow>,
    outputs: Vec<(f64, SpectralField)>,
    spectra: Vec<SpectrumSeries>,
    paths: Vec<PathBuf>,
    out_dir: Option<&'a Path>,
    csv: Option<BufWriter<File>>,
    csv_path: PathBuf,
    last_recorded: usize,
    last_dt: f64,
}

impl Recorder<'_> {
    fn record(&mut self, state: &FlowState, step: usize, time: f64, dt: f64) -> Result<()> {
        let row = measure(state, self.op, self.cfg.norm_p, self.offset, step, time, dt)?;
        if let Some(w) = self.csv.as_mut() {
            writeln!(w, "{}", row.csv_line())
                .and_then(|_| w.flush())
                .map_err(|e| Error::io(&self.csv_path, e))?;
        }
        self.rows.push(row);
        self.last_recorded = step;
        Ok(())
    }
}

impl Observer<FlowState> for Recorder<'_> {
    fn on_step(&mut self, time: f64, step: usize, dt: f64, state: &FlowState) -> Result<()> {
        self.last_dt = dt;
        if step.is_multiple_of(self.cfg.diagnostics_every) {
            self.record(state, step, time, dt)?;
        }
        Ok(())
    }

    fn on_output(&mut self, time: f64, state: &FlowState) -> Result<()> {
        let omega = state.vorticity();
        if let Some(dir) = self.out_dir {
            let path = dir.join(format!("snapshot_{:04}.svf", self.outputs.len()));
            Snapshot::from_spectral(&omega, time).write(&path)?;
            self.paths.push(path);
        }
        self.spectra.push(diagnostics::energy_spectrum(&omega, time));
        self.outputs.push((time, omega));
        Ok(())
    }
}

/// Runs `cfg` entirely in memory.
pub fn simulate(cfg: &RunConfig) -> Result<RunSummary> {
    execute(cfg, None)
}

/// Runs `cfg`, writing `config.txt`, `diagnostics.csv`, `spectrum.csv` and
/// one `snapshot_NNNN.svf` per snapshot time into `cfg.output_dir`.
pub fn run(cfg: &RunConfig) -> Result<RunSummary> {
    execute(cfg, Some(&cfg.output_dir))
}

fn execute(cfg: &RunConfig, out_dir: Option<&Path>) -> Result<RunSummary> {
    cfg.validate()?;
    let grid = cfg.grid()?;
    let op = SvOperator::new(grid, cfg.sv_config())?;
    let (omega0, background) = initial_vorticity(cfg)?;
    let offset = cfg.negative_offset.unwrap_or(1.1 * background.max(0.0));

    let csv_path = out_dir.map(|d| d.join("diagnostics.csv")).unwrap_or_default();
    let csv = match out_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            write_atomic(&dir.join("config.txt"), cfg.to_text().as_bytes())?;
            let file = File::create(&csv_path).map_err(|e| Error::io(&csv_path, e))?;
            let mut w = BufWriter::new(file);
            writeln!(w, "{}", DIAGNOSTICS_HEADER.join(",")).map_err(|e| Error::io(&csv_path, e))?;
            Some(w)
        }
        None => None,
    };

    let state0 = FlowState::from_vorticity(omega0.clone(), cfg.formulation)?;
    let mut rec = Recorder {
        op: &op,
        cfg,
        offset,
        rows: Vec::new(),
        outputs: Vec::new(),
        spectra: Vec::new(),
        paths: Vec::new(),
        out_dir,
        csv,
        csv_path,
        last_recorded: 0,
        last_dt: 0.0,
    };
    rec.record(&state0, 0, 0.0, 0.0)?;
    let flow = Flow::new(&op);
    let traj = flow.run(state0, &cfg.stepper(), &cfg.snapshot_times, &mut rec)?;
    if rec.last_recorded != traj.steps {
        rec.record(&traj.state, traj.steps, traj.time, rec.last_dt)?;
    }
    if let Some(dir) = out_dir {
        write_atomic(
            &dir.join("spectrum.csv"),
            study::spectra_csv(&rec.spectra, None).as_bytes(),
        )?;
    }
    Ok(RunSummary {
        state: traj.state,
        time: traj.time,
        steps: traj.steps,
        initial: omega0,
        background,
        negative_offset: offset,
        rows: rec.rows,
        outputs: rec.outputs,
        spectra: rec.spectra,
        snapshot_paths: rec.paths,
    })
}
