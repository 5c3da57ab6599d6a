//! The SV system as an ODE in either formulation.

use std::f64::consts::PI;
use std::str::FromStr;

use super::{integrate, Dynamics, Observer, OdeState, Trajectory};
use crate::error::{Error, Result};
use crate::spectral::{self, biot_savart, curl, project_leray, SpectralField, VelocityField};
use crate::sv::SvOperator;

impl OdeState for SpectralField {
    fn scale(&mut self, a: f64) {
        SpectralField::scale(self, a);
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        SpectralField::axpy(self, a, x);
    }
    fn is_finite(&self) -> bool {
        SpectralField::is_finite(self)
    }
}

impl OdeState for VelocityField {
    fn scale(&mut self, a: f64) {
        VelocityField::scale(self, a);
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        VelocityField::axpy(self, a, x);
    }
    fn is_finite(&self) -> bool {
        VelocityField::is_finite(self)
    }
}

/// Which unknown is advanced in time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Formulation {
    /// Velocity with Leray projection of the transport term.
    Primitive,
    /// Scalar vorticity; cheaper per step.
    #[default]
    Vorticity,
}

impl FromStr for Formulation {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primitive" | "velocity" => Ok(Formulation::Primitive),
            "vorticity" => Ok(Formulation::Vorticity),
            other => Err(Error::Config(format!(
                "unknown formulation `{other}` (expected primitive or vorticity)"
            ))),
        }
    }
}

impl std::fmt::Display for Formulation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Formulation::Primitive => "primitive",
            Formulation::Vorticity => "vorticity",
        })
    }
}

/// State of either formulation. Both variants carry the same information.
#[derive(Debug, Clone)]
pub enum FlowState {
    Velocity(VelocityField),
    Vorticity(SpectralField),
}

impl FlowState {
    /// Builds the state for `formulation` from a mean-free vorticity.
    pub fn from_vorticity(omega: SpectralField, formulation: Formulation) -> Result<Self> {
        Ok(match formulation {
            Formulation::Vorticity => {
                biot_savart(&omega)?;
                FlowState::Vorticity(omega)
            }
            Formulation::Primitive => FlowState::Velocity(biot_savart(&omega)?),
        })
    }

    pub fn formulation(&self) -> Formulation {
        match self {
            FlowState::Velocity(_) => Formulation::Primitive,
            FlowState::Vorticity(_) => Formulation::Vorticity,
        }
    }

    pub fn vorticity(&self) -> SpectralField {
        match self {
            FlowState::Velocity(u) => curl(u),
            FlowState::Vorticity(w) => w.clone(),
        }
    }

    pub fn velocity(&self) -> Result<VelocityField> {
        match self {
            FlowState::Velocity(u) => Ok(u.clone()),
            FlowState::Vorticity(w) => biot_savart(w),
        }
    }
}

impl OdeState for FlowState {
    fn scale(&mut self, a: f64) {
        match self {
            FlowState::Velocity(u) => u.scale(a),
            FlowState::Vorticity(w) => w.scale(a),
        }
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        match (self, x) {
            (FlowState::Velocity(u), FlowState::Velocity(v)) => u.axpy(a, v),
            (FlowState::Vorticity(w), FlowState::Vorticity(v)) => w.axpy(a, v),
            _ => panic!("cannot combine states of different formulations"),
        }
    }
    fn is_finite(&self) -> bool {
        match self {
            FlowState::Velocity(u) => u.is_finite(),
            FlowState::Vorticity(w) => w.is_finite(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepperConfig {
    /// Courant number, `0 < cfl <= 1`.
    pub cfl: f64,
    pub t_end: f64,
    pub dt_max: f64,
    pub dt_min: f64,
    pub formulation: Formulation,
    /// Overrides the adaptive rule with a constant step.
    pub dt_fixed: Option<f64>,
    /// `max |u|` above which a run is declared blown up.
    pub speed_ceiling: f64,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            cfl: 0.5,
            t_end: 1.0,
            dt_max: 1e-2,
            dt_min: 1e-9,
            formulation: Formulation::default(),
            dt_fixed: None,
            speed_ceiling: 1e6,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::Config(format!("cfl must lie in (0, 1], got {}", self.cfl)));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::Config(format!(
                "t_end must be finite and >= 0, got {}",
                self.t_end
            )));
        }
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt_max && self.dt_max.is_finite()) {
            return Err(Error::Config(format!(
                "need 0 < dt_min <= dt_max, got dt_min = {}, dt_max = {}",
                self.dt_min, self.dt_max
            )));
        }
        if let Some(dt) = self.dt_fixed {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(Error::Config(format!("dt must be positive, got {dt}")));
            }
        }
        if !(self.speed_ceiling > 0.0) {
            return Err(Error::Config(format!(
                "speed_ceiling must be positive, got {}",
                self.speed_ceiling
            )));
        }
        Ok(())
    }
}

/// Largest `|u|` over the `N_G x N_G` physical grid.
pub fn max_speed(u: &VelocityField) -> f64 {
    let m = u.grid().n_grid();
    let (a, b) = spectral::sample_pair(&u.u1, &u.u2, m);
    a.iter()
        .zip(&b)
        .map(|(x, y)| x.hypot(*y))
        .fold(0.0, |acc: f64, s| if s.is_nan() { f64::NAN } else { acc.max(s) })
}

/// `min(cfl dx / max|u|, cfl dx^2 / (4 pi^2 eps_N), dt_max)`, clamped below
/// by `dt_min`, with `dx = 1 / N_G`.
pub fn adaptive_dt(u: &VelocityField, eps_n: f64, cfg: &StepperConfig) -> Result<f64> {
    let speed = max_speed(u);
    if !speed.is_finite() {
        return Err(Error::NonFinite);
    }
    if speed > cfg.speed_ceiling {
        return Err(Error::VelocityBlowup {
            max_speed: speed,
            ceiling: cfg.speed_ceiling,
        });
    }
    let dx = u.grid().dx();
    let mut dt = cfg.dt_max;
    if speed > 0.0 {
        dt = dt.min(cfg.cfl * dx / speed);
    }
    if eps_n > 0.0 {
        dt = dt.min(cfg.cfl * dx * dx / (4.0 * PI * PI * eps_n));
    }
    Ok(dt.max(cfg.dt_min))
}

/// The SV semi-discrete system driven by [`super::step`].
pub struct Flow<'a> {
    op: &'a SvOperator,
}

impl<'a> Flow<'a> {
    pub fn new(op: &'a SvOperator) -> Self {
        Flow { op }
    }

    pub fn operator(&self) -> &SvOperator {
        self.op
    }

    /// Step size the configuration asks for from `state`.
    pub fn dt(&self, state: &FlowState, cfg: &StepperConfig) -> Result<f64> {
        let u = state.velocity()?;
        match cfg.dt_fixed {
            Some(dt) => {
                let speed = max_speed(&u);
                if !speed.is_finite() {
                    return Err(Error::NonFinite);
                }
                if speed > cfg.speed_ceiling {
                    return Err(Error::VelocityBlowup {
                        max_speed: speed,
                        ceiling: cfg.speed_ceiling,
                    });
                }
                Ok(dt)
            }
            None => adaptive_dt(&u, self.op.eps_n(), cfg),
        }
    }

    /// Integrates to `cfg.t_end`, landing exactly on every `output_times`.
    pub fn run(
        &self,
        initial: FlowState,
        cfg: &StepperConfig,
        output_times: &[f64],
        observer: &mut dyn Observer<FlowState>,
    ) -> Result<Trajectory<FlowState>> {
        cfg.validate()?;
        integrate(self, initial, cfg.t_end, output_times, |s| self.dt(s, cfg), observer)
    }
}

impl Dynamics for Flow<'_> {
    type State = FlowState;

    fn rhs(&self, state: &FlowState) -> Result<FlowState> {
        match state {
            FlowState::Velocity(u) => Ok(FlowState::Velocity(self.op.rhs(u)?)),
            FlowState::Vorticity(w) => {
                if !w.is_finite() {
                    return Err(Error::NonFinite);
                }
                Ok(FlowState::Vorticity(self.op.rhs_vorticity(w)?))
            }
        }
    }

    fn project(&self, state: &mut FlowState) -> Result<()> {
        match state {
            FlowState::Velocity(u) => {
                let mut p = project_leray(&u.u1, &u.u2)?;
                p.u1.symmetrize();
                p.u2.symmetrize();
                *u = p;
            }
            FlowState::Vorticity(w) => w.symmetrize(),
        }
        Ok(())
    }
}
