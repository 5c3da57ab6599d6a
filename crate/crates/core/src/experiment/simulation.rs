//! A run that is advanced incrementally by its owner.

use std::path::Path;

use super::{initial_vorticity, measure, DiagnosticsRow, RunConfig, Snapshot};
use crate::diagnostics::{energy_spectrum, SpectrumSeries};
use crate::error::{Error, Result};
use crate::integrator::{self, integrate_from, Flow, FlowState, Observer};
use crate::spectral::{GridSpec, SpectralField};
use crate::sv::SvOperator;

struct LastDt(f64);

impl Observer<FlowState> for LastDt {
    fn on_step(&mut self, _: f64, _: usize, dt: f64, _: &FlowState) -> Result<()> {
        self.0 = dt;
        Ok(())
    }
}

pub struct Simulation {
    cfg: RunConfig,
    op: SvOperator,
    state: FlowState,
    time: f64,
    steps: usize,
    last_dt: f64,
    negative_offset: f64,
}

impl Simulation {
    pub fn new(cfg: RunConfig) -> Result<Self> {
        cfg.validate()?;
        let op = SvOperator::new(cfg.grid()?, cfg.sv_config())?;
        let (omega, background) = initial_vorticity(&cfg)?;
        let state = FlowState::from_vorticity(omega, cfg.formulation)?;
        let negative_offset = cfg.negative_offset.unwrap_or(1.1 * background.max(0.0));
        Ok(Simulation {
            cfg,
            op,
            state,
            time: 0.0,
            steps: 0,
            last_dt: 0.0,
            negative_offset,
        })
    }

    pub fn config(&self) -> &RunConfig {
        &self.cfg
    }

    pub fn grid(&self) -> GridSpec {
        self.op.grid()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn state(&self) -> &FlowState {
        &self.state
    }

    pub fn vorticity(&self) -> SpectralField {
        self.state.vorticity()
    }

    /// One step of the configured size rule; returns the step taken.
    pub fn step(&mut self) -> Result<f64> {
        let flow = Flow::new(&self.op);
        let stepper = self.cfg.stepper();
        let wrap = |time: f64| {
            move |e: Error| Error::AtTime {
                time,
                source: Box::new(e),
            }
        };
        let dt = flow.dt(&self.state, &stepper).map_err(wrap(self.time))?;
        self.state = integrator::step(&flow, &self.state, dt).map_err(wrap(self.time))?;
        self.time += dt;
        self.steps += 1;
        self.last_dt = dt;
        Ok(dt)
    }

    /// Steps until exactly `target`; a target in the past is an error.
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        if !(target >= self.time) {
            return Err(Error::Config(format!(
                "cannot advance to t = {target}, already at t = {}",
                self.time
            )));
        }
        let flow = Flow::new(&self.op);
        let stepper = self.cfg.stepper();
        let mut last = LastDt(self.last_dt);
        let rule = |s: &FlowState| flow.dt(s, &stepper);
        let traj = integrate_from(&flow, self.state.clone(), self.time, target, &[], rule, &mut last)?;
        self.state = traj.state;
        self.time = traj.time;
        self.steps += traj.steps;
        self.last_dt = last.0;
        Ok(())
    }

    pub fn diagnostics(&self) -> Result<DiagnosticsRow> {
        measure(
            &self.state,
            &self.op,
            self.cfg.norm_p,
            self.negative_offset,
            self.steps,
            self.time,
            self.last_dt,
        )
    }

    pub fn spectrum(&self) -> SpectrumSeries {
        energy_spectrum(&self.vorticity(), self.time)
    }

    pub fn snapshot(&self) -> Snapshot {
        Snapshot::from_spectral(&self.vorticity(), self.time)
    }

    pub fn write_snapshot(&self, path: &Path) -> Result<()> {
        self.snapshot().write(path)
    }
}
