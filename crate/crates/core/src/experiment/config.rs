//! Flat `key = value` run configuration with experiment presets.

use std::f64::consts::PI;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::initial::{EddySpec, SheetSpec, Width};
use crate::integrator::{Formulation, StepperConfig};
use crate::spectral::GridSpec;
use crate::sv::{Integrability, RegimeParams, SvConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    FatSheet,
    ThinSheet,
    KissingVortices,
    TaylorGreen,
    /// Vorticity read from a snapshot file.
    Custom,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::FatSheet,
        Experiment::ThinSheet,
        Experiment::KissingVortices,
        Experiment::TaylorGreen,
        Experiment::Custom,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Experiment::FatSheet => "fat_sheet",
            Experiment::ThinSheet => "thin_sheet",
            Experiment::KissingVortices => "kissing_vortices",
            Experiment::TaylorGreen => "taylor_green",
            Experiment::Custom => "custom",
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown experiment `{s}`")))
    }
}

/// Every quantity a run needs. Build with [`RunConfig::preset`] or parse
/// with [`RunConfig::parse`]; both apply the experiment's defaults first.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub experiment: Experiment,
    /// Retained modes per direction, `N`; the physical grid has `2N` points.
    pub n_modes: usize,
    pub epsilon: f64,
    pub k0_fraction: f64,
    pub cutoff_alpha: f64,
    /// Sheet or eddy width control; fixed for the fat sheet, divided by
    /// `N_G` for the thin sheet and the eddies.
    pub rho: f64,
    /// Sheet amplitude.
    pub d: f64,
    pub quadrature_m: usize,
    pub eddy_radius: f64,
    /// Taylor–Green vorticity amplitude.
    pub amplitude: f64,
    pub input: Option<PathBuf>,
    pub t_end: f64,
    pub cfl: f64,
    pub dt_max: f64,
    pub dt_min: f64,
    pub dt: Option<f64>,
    pub speed_ceiling: f64,
    pub formulation: Formulation,
    pub snapshot_times: Vec<f64>,
    /// Steps between diagnostics rows; the first and last state are
    /// always recorded.
    pub diagnostics_every: usize,
    /// Exponent of the extra `L^p` column.
    pub norm_p: f64,
    /// Shift `c` in `int [w + c]_-`; defaults to 1.1 times the subtracted
    /// sheet background, 0 otherwise.
    pub negative_offset: Option<f64>,
    pub regime: RegimeParams,
    pub output_dir: PathBuf,
}

const KEYS: &[&str] = &[
    "experiment",
    "n_modes",
    "n_grid",
    "epsilon",
    "k0_fraction",
    "cutoff_alpha",
    "rho",
    "d",
    "quadrature_m",
    "eddy_radius",
    "amplitude",
    "input",
    "t_end",
    "cfl",
    "dt_max",
    "dt_min",
    "dt",
    "speed_ceiling",
    "formulation",
    "snapshot_times",
    "diagnostics_every",
    "norm_p",
    "negative_offset",
    "theta",
    "s",
    "p",
    "b",
    "output_dir",
];

impl RunConfig {
    pub fn preset(experiment: Experiment) -> Self {
        let base = RunConfig {
            experiment,
            n_modes: 64,
            epsilon: 0.05,
            k0_fraction: 1.0 / 3.0,
            cutoff_alpha: 18.0,
            rho: 10.0,
            d: 0.2,
            quadrature_m: 400,
            eddy_radius: 1.0 / 6.0,
            amplitude: 4.0 * PI,
            input: None,
            t_end: 1.0,
            cfl: 0.5,
            dt_max: 1e-2,
            dt_min: 1e-9,
            dt: None,
            speed_ceiling: 1e6,
            formulation: Formulation::default(),
            snapshot_times: vec![0.0, 1.0],
            diagnostics_every: 10,
            norm_p: 4.0,
            negative_offset: None,
            regime: RegimeParams::default(),
            output_dir: PathBuf::from("out"),
        };
        match experiment {
            Experiment::FatSheet => RunConfig { rho: 0.05, ..base },
            Experiment::ThinSheet => RunConfig {
                k0_fraction: 0.0,
                ..base
            },
            Experiment::KissingVortices => RunConfig {
                epsilon: 0.01,
                k0_fraction: 0.0,
                ..base
            },
            Experiment::TaylorGreen => RunConfig { epsilon: 0.0, ..base },
            Experiment::Custom => base,
        }
    }

    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_pairs(text)?)
    }

    /// Applies `pairs` on top of the preset named by the last `experiment`
    /// entry (default `fat_sheet`), in order, then validates.
    pub fn from_pairs(pairs: &[(String, String)]) -> Result<Self> {
        let experiment = match pairs.iter().rev().find(|(k, _)| k == "experiment") {
            Some((_, v)) => v.parse()?,
            None => Experiment::FatSheet,
        };
        let mut cfg = Self::preset(experiment);
        let mut t_end_set = false;
        let mut snaps_set = false;
        for (k, v) in pairs {
            cfg.set(k, v)?;
            t_end_set |= k == "t_end";
            snaps_set |= k == "snapshot_times";
        }
        if t_end_set && !snaps_set {
            cfg.snapshot_times = vec![0.0, cfg.t_end];
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Sets one key. Unknown keys and malformed values are errors.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "experiment" => self.experiment = v.parse()?,
            "n_modes" => self.n_modes = parse_num(key, v)?,
            "n_grid" => {
                let g: usize = parse_num(key, v)?;
                self.n_modes = GridSpec::from_n_grid(g)?.n_modes();
            }
            "epsilon" => self.epsilon = parse_num(key, v)?,
            "k0_fraction" => self.k0_fraction = parse_num(key, v)?,
            "cutoff_alpha" => self.cutoff_alpha = parse_num(key, v)?,
            "rho" => self.rho = parse_num(key, v)?,
            "d" => self.d = parse_num(key, v)?,
            "quadrature_m" => self.quadrature_m = parse_num(key, v)?,
            "eddy_radius" => self.eddy_radius = parse_num(key, v)?,
            "amplitude" => self.amplitude = parse_num(key, v)?,
            "input" => self.input = Some(PathBuf::from(v)),
            "t_end" => self.t_end = parse_num(key, v)?,
            "cfl" => self.cfl = parse_num(key, v)?,
            "dt_max" => self.dt_max = parse_num(key, v)?,
            "dt_min" => self.dt_min = parse_num(key, v)?,
            "dt" => {
                self.dt = match v {
                    "" | "auto" => None,
                    _ => Some(parse_num(key, v)?),
                }
            }
            "speed_ceiling" => self.speed_ceiling = parse_num(key, v)?,
            "formulation" => self.formulation = v.parse()?,
            "snapshot_times" => {
                self.snapshot_times = v
                    .split(',')
                    .map(str::trim)
                    .filter(|s| !s.is_empty())
                    .map(|s| parse_num(key, s))
                    .collect::<Result<_>>()?
            }
            "diagnostics_every" => self.diagnostics_every = parse_num(key, v)?,
            "norm_p" => {
                self.norm_p = match v {
                    "inf" | "infinity" => f64::INFINITY,
                    _ => parse_num(key, v)?,
                }
            }
            "negative_offset" => {
                self.negative_offset = match v {
                    "" | "auto" => None,
                    _ => Some(parse_num(key, v)?),
                }
            }
            "theta" => self.regime.theta = parse_num(key, v)?,
            "s" => self.regime.s = parse_num(key, v)?,
            "p" => {
                self.regime.integrability = match v {
                    "measure" => Integrability::Measure,
                    _ => Integrability::Lp(parse_num(key, v)?),
                }
            }
            "b" => self.regime.b = parse_num(key, v)?,
            "output_dir" => self.output_dir = PathBuf::from(v),
            _ => {
                return Err(Error::Config(format!(
                    "unknown key `{key}` (known keys: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Checks every parameter; nothing is allocated before this passes.
    pub fn validate(&self) -> Result<()> {
        self.grid()?;
        self.sv_config().validate()?;
        self.stepper().validate()?;
        let positive = [
            ("rho", self.rho),
            ("eddy_radius", self.eddy_radius),
            ("norm_p", self.norm_p),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if self.norm_p < 1.0 {
            return Err(Error::Config(format!("norm_p must be >= 1, got {}", self.norm_p)));
        }
        if !self.d.is_finite() || !self.amplitude.is_finite() {
            return Err(Error::Config("d and amplitude must be finite".into()));
        }
        if self.quadrature_m == 0 {
            return Err(Error::Config("quadrature_m must be positive".into()));
        }
        if self.diagnostics_every == 0 {
            return Err(Error::Config("diagnostics_every must be positive".into()));
        }
        if let Some(c) = self.negative_offset {
            if !(c >= 0.0) {
                return Err(Error::Config(format!("negative_offset must be >= 0, got {c}")));
            }
        }
        for &t in &self.snapshot_times {
            if !(0.0..=self.t_end).contains(&t) {
                return Err(Error::Config(format!(
                    "snapshot time {t} outside [0, t_end = {}]",
                    self.t_end
                )));
            }
        }
        if self.experiment == Experiment::Custom && self.input.is_none() {
            return Err(Error::Config("experiment `custom` needs `input = <snapshot>`".into()));
        }
        if self.experiment == Experiment::KissingVortices {
            self.eddies().validate()?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<GridSpec> {
        GridSpec::new(self.n_modes)
    }

    pub fn sv_config(&self) -> SvConfig {
        SvConfig {
            epsilon: self.epsilon,
            k0_fraction: self.k0_fraction,
            cutoff_alpha: self.cutoff_alpha,
        }
    }

    pub fn stepper(&self) -> StepperConfig {
        StepperConfig {
            cfl: self.cfl,
            t_end: self.t_end,
            dt_max: self.dt_max,
            dt_min: self.dt_min,
            formulation: self.formulation,
            dt_fixed: self.dt,
            speed_ceiling: self.speed_ceiling,
        }
    }

    pub fn sheet(&self) -> SheetSpec {
        let mut s = match self.experiment {
            Experiment::ThinSheet => SheetSpec::thin(self.rho),
            _ => SheetSpec::fat(self.rho),
        };
        s.amplitude = self.d;
        s.quadrature_m = self.quadrature_m;
        s
    }

    pub fn eddies(&self) -> EddySpec {
        EddySpec {
            radius: self.eddy_radius,
            width: Width::GridScaled(self.rho),
            ..EddySpec::default()
        }
    }

    /// The configuration as parseable text.
    pub fn to_text(&self) -> String {
        let opt = |o: Option<f64>| o.map_or("auto".to_string(), |v| v.to_string());
        let times: Vec<String> = self.snapshot_times.iter().map(|t| t.to_string()).collect();
        let p = match self.regime.integrability {
            Integrability::Lp(p) => p.to_string(),
            Integrability::Measure => "measure".to_string(),
        };
        let norm_p = if self.norm_p.is_infinite() {
            "inf".to_string()
        } else {
            self.norm_p.to_string()
        };
        let mut lines = vec![
            format!("experiment = {}", self.experiment),
            format!("n_modes = {}", self.n_modes),
            format!("epsilon = {}", self.epsilon),
            format!("k0_fraction = {}", self.k0_fraction),
            format!("cutoff_alpha = {}", self.cutoff_alpha),
            format!("rho = {}", self.rho),
            format!("d = {}", self.d),
            format!("quadrature_m = {}", self.quadrature_m),
            format!("eddy_radius = {}", self.eddy_radius),
            format!("amplitude = {}", self.amplitude),
        ];
        if let Some(input) = &self.input {
            lines.push(format!("input = {}", input.display()));
        }
        lines.extend([
            format!("t_end = {}", self.t_end),
            format!("cfl = {}", self.cfl),
            format!("dt_max = {}", self.dt_max),
            format!("dt_min = {}", self.dt_min),
            format!("dt = {}", opt(self.dt)),
            format!("speed_ceiling = {}", self.speed_ceiling),
            format!("formulation = {}", self.formulation),
            format!("snapshot_times = {}", times.join(", ")),
            format!("diagnostics_every = {}", self.diagnostics_every),
            format!("norm_p = {norm_p}"),
            format!("negative_offset = {}", opt(self.negative_offset)),
            format!("theta = {}", self.regime.theta),
            format!("s = {}", self.regime.s),
            format!("p = {p}"),
            format!("b = {}", self.regime.b),
            format!("output_dir = {}", self.output_dir.display()),
        ]);
        lines.join("\n") + "\n"
    }
}

/// Splits config text into `(key, value)` pairs, rejecting unknown keys.
pub fn parse_pairs(text: &str) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`, got `{line}`", lineno + 1)))?;
        let k = k.trim();
        if !KEYS.contains(&k) {
            return Err(Error::Config(format!("line {}: unknown key `{k}`", lineno + 1)));
        }
        out.push((k.to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("invalid value `{v}` for `{key}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_match_reference_parameters() {
        let fat = RunConfig::preset(Experiment::FatSheet);
        assert_eq!((fat.epsilon, fat.rho, fat.k0_fraction), (0.05, 0.05, 1.0 / 3.0));
        assert_eq!(fat.sheet().width, Width::Fixed(0.05));
        let thin = RunConfig::preset(Experiment::ThinSheet);
        assert_eq!((thin.epsilon, thin.rho), (0.05, 10.0));
        assert_eq!(thin.sheet().width, Width::GridScaled(10.0));
        let kiss = RunConfig::preset(Experiment::KissingVortices);
        assert_eq!((kiss.epsilon, kiss.rho), (0.01, 10.0));
        assert_eq!(RunConfig::preset(Experiment::TaylorGreen).epsilon, 0.0);
        for e in Experiment::ALL {
            if e != Experiment::Custom {
                RunConfig::preset(e).validate().unwrap();
            }
        }
    }

    #[test]
    fn parses_comments_and_overrides() {
        let text = "# thin sheet study\nexperiment = thin_sheet\nn_grid = 128  # N_G\nt_end=0.5\nsnapshot_times = 0, 0.25,0.5\np = measure\n";
        let cfg = RunConfig::parse(text).unwrap();
        assert_eq!(cfg.experiment, Experiment::ThinSheet);
        assert_eq!(cfg.n_modes, 64);
        assert_eq!(cfg.t_end, 0.5);
        assert_eq!(cfg.snapshot_times, vec![0.0, 0.25, 0.5]);
        assert_eq!(cfg.regime.integrability, Integrability::Measure);
        assert_eq!(cfg.epsilon, 0.05);
    }

    #[test]
    fn t_end_moves_default_snapshots() {
        let cfg = RunConfig::parse("t_end = 0.3").unwrap();
        assert_eq!(cfg.snapshot_times, vec![0.0, 0.3]);
    }

    #[test]
    fn rejects_bad_input() {
        for text in [
            "colour = red",
            "n_modes = many",
            "experiment = jet",
            "n_modes",
            "cfl = 2",
            "n_modes = 7",
            "t_end = 1\nsnapshot_times = 2",
            "experiment = custom",
            "epsilon = -1",
            "eddy_radius = 0.3\nexperiment = kissing_vortices",
        ] {
            let err = RunConfig::parse(text).unwrap_err();
            assert_eq!(err.exit_code(), 2, "{text}: {err}");
        }
    }

    #[test]
    fn text_round_trip() {
        let mut cfg = RunConfig::preset(Experiment::KissingVortices);
        cfg.dt = Some(1e-3);
        cfg.norm_p = f64::INFINITY;
        cfg.snapshot_times = vec![0.0, 0.5, 1.0];
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
    }
}
