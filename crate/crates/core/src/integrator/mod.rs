//! Explicit SSP-RK3 (Shu–Osher) time stepping with an adaptive CFL step.

mod flow;

pub use flow::{adaptive_dt, max_speed, Flow, FlowState, Formulation, StepperConfig};

use crate::error::{Error, Result};

/// Vector-space operations the Runge–Kutta stages need.
pub trait OdeState: Clone {
    fn scale(&mut self, a: f64);
    /// `self += a * x`
    fn axpy(&mut self, a: f64, x: &Self);
    fn is_finite(&self) -> bool;
}

impl OdeState for f64 {
    fn scale(&mut self, a: f64) {
        *self *= a;
    }
    fn axpy(&mut self, a: f64, x: &Self) {
        *self += a * x;
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

/// Right-hand side of `ds/dt = R(s)` plus an optional constraint projection
/// applied after every stage.
pub trait Dynamics {
    type State: OdeState;
    fn rhs(&self, state: &Self::State) -> Result<Self::State>;
    fn project(&self, _state: &mut Self::State) -> Result<()> {
        Ok(())
    }
}

/// One Shu–Osher SSP-RK3 step:
/// `s1 = u + dt R(u)`, `s2 = 3/4 u + 1/4 (s1 + dt R(s1))`,
/// `u+ = 1/3 u + 2/3 (s2 + dt R(s2))`.
pub fn step<D: Dynamics>(dynamics: &D, state: &D::State, dt: f64) -> Result<D::State> {
    let mut s1 = state.clone();
    s1.axpy(dt, &dynamics.rhs(state)?);
    dynamics.project(&mut s1)?;

    let r1 = dynamics.rhs(&s1)?;
    let mut s2 = s1;
    s2.axpy(dt, &r1);
    s2.scale(0.25);
    s2.axpy(0.75, state);
    dynamics.project(&mut s2)?;

    let r2 = dynamics.rhs(&s2)?;
    let mut out = s2;
    out.axpy(dt, &r2);
    out.scale(2.0 / 3.0);
    out.axpy(1.0 / 3.0, state);
    dynamics.project(&mut out)?;

    if !out.is_finite() {
        return Err(Error::NonFinite);
    }
    Ok(out)
}

/// Callbacks driven by [`integrate`].
pub trait Observer<S> {
    /// After every accepted step.
    fn on_step(&mut self, _time: f64, _step: usize, _dt: f64, _state: &S) -> Result<()> {
        Ok(())
    }
    /// At each requested output time, hit exactly.
    fn on_output(&mut self, _time: f64, _state: &S) -> Result<()> {
        Ok(())
    }
}

/// Observer that ignores everything.
pub struct NoObserver;

impl<S> Observer<S> for NoObserver {}

#[derive(Debug, Clone)]
pub struct Trajectory<S> {
    pub state: S,
    pub time: f64,
    pub steps: usize,
}

/// Steps from `t = 0` to `t_end`, shortening steps so that every output
/// time in `[0, t_end]` and `t_end` itself are reached exactly.
pub fn integrate<D: Dynamics>(
    dynamics: &D,
    initial: D::State,
    t_end: f64,
    output_times: &[f64],
    dt_rule: impl FnMut(&D::State) -> Result<f64>,
    observer: &mut dyn Observer<D::State>,
) -> Result<Trajectory<D::State>> {
    integrate_from(dynamics, initial, 0.0, t_end, output_times, dt_rule, observer)
}

/// [`integrate`] starting at `t0`; output times before `t0` are ignored.
/// Step counts restart at 0.
pub fn integrate_from<D: Dynamics>(
    dynamics: &D,
    initial: D::State,
    t0: f64,
    t_end: f64,
    output_times: &[f64],
    mut dt_rule: impl FnMut(&D::State) -> Result<f64>,
    observer: &mut dyn Observer<D::State>,
) -> Result<Trajectory<D::State>> {
    if !(t_end >= t0 && t0.is_finite() && t_end.is_finite()) {
        return Err(Error::Config(format!(
            "need finite t_end >= t0, got t0 = {t0}, t_end = {t_end}"
        )));
    }
    let mut targets: Vec<f64> = output_times
        .iter()
        .copied()
        .filter(|t| (t0..=t_end).contains(t))
        .collect();
    targets.sort_by(f64::total_cmp);
    targets.dedup();

    let mut state = initial;
    let mut time = t0;
    let mut steps = 0;
    let mut next = 0;
    while next < targets.len() && targets[next] == t0 {
        observer.on_output(t0, &state)?;
        next += 1;
    }
    let wrap = |time: f64| {
        move |e: Error| Error::AtTime {
            time,
            source: Box::new(e),
        }
    };

    while time < t_end {
        let target = targets.get(next).copied().unwrap_or(t_end);
        let mut dt = dt_rule(&state).map_err(wrap(time))?;
        let landing = time + dt * 1.001 >= target;
        if landing {
            dt = target - time;
        }
        state = step(dynamics, &state, dt).map_err(wrap(time))?;
        time = if landing { target } else { time + dt };
        steps += 1;
        observer.on_step(time, steps, dt, &state).map_err(wrap(time))?;
        if landing && next < targets.len() {
            observer.on_output(time, &state).map_err(wrap(time))?;
            next += 1;
        }
    }
    Ok(Trajectory { state, time, steps })
}
