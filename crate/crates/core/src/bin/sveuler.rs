use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sveuler::experiment::{
    self, convergence_study, diff_snapshots, parse_pairs, spectrum_report, validate_config, RunConfig,
};
use sveuler::{Error, Result};

/// Spectral viscosity solver for 2D incompressible Euler on the unit torus.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one configuration, writing diagnostics and snapshots.
    Run(ConfigArgs),
    /// Run several resolutions and tabulate L2 velocity errors against the finest.
    Converge {
        #[command(flatten)]
        config: ConfigArgs,
        /// Physical grid sizes N_G, ascending; the last is the reference.
        #[arg(long, value_delimiter = ',', default_values_t = [64, 128, 256, 512])]
        levels: Vec<usize>,
        /// Comparison times.
        #[arg(long, value_delimiter = ',', default_values_t = [0.4])]
        times: Vec<f64>,
    },
    /// Print one energy-spectrum row per snapshot file.
    Spectrum {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Write the CSV here instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Report the spectral-decay parameter regime and practical-choice warnings.
    Validate(ConfigArgs),
    /// L2 distance between the velocities of two snapshots.
    Diff { a: PathBuf, b: PathBuf },
}

/// Configuration file plus command line overrides (applied after the file).
#[derive(Args)]
struct ConfigArgs {
    /// `key = value` configuration file.
    config: Option<PathBuf>,
    #[arg(long)]
    experiment: Option<String>,
    #[arg(long)]
    n_modes: Option<usize>,
    /// Physical grid size, `2 * n_modes`.
    #[arg(long)]
    n_grid: Option<usize>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    k0_fraction: Option<f64>,
    #[arg(long)]
    cutoff_alpha: Option<f64>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    d: Option<f64>,
    #[arg(long)]
    t_end: Option<f64>,
    #[arg(long)]
    cfl: Option<f64>,
    /// Fixed step size; `auto` selects the CFL rule.
    #[arg(long)]
    dt: Option<String>,
    /// `primitive` or `vorticity`.
    #[arg(long)]
    formulation: Option<String>,
    /// Comma-separated output times.
    #[arg(long)]
    snapshot_times: Option<String>,
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
    /// Any other configuration key, as `key=value`; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    extra: Vec<String>,
}

impl ConfigArgs {
    fn load(&self) -> Result<RunConfig> {
        let mut pairs = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::Io {
                    path: path.clone(),
                    source: e,
                })?;
                parse_pairs(&text)?
            }
            None => Vec::new(),
        };
        let mut push = |k: &str, v: Option<String>| {
            if let Some(v) = v {
                pairs.push((k.to_string(), v));
            }
        };
        push("experiment", self.experiment.clone());
        push("n_modes", self.n_modes.map(|v| v.to_string()));
        push("n_grid", self.n_grid.map(|v| v.to_string()));
        push("epsilon", self.epsilon.map(|v| v.to_string()));
        push("k0_fraction", self.k0_fraction.map(|v| v.to_string()));
        push("cutoff_alpha", self.cutoff_alpha.map(|v| v.to_string()));
        push("rho", self.rho.map(|v| v.to_string()));
        push("d", self.d.map(|v| v.to_string()));
        push("t_end", self.t_end.map(|v| v.to_string()));
        push("cfl", self.cfl.map(|v| v.to_string()));
        push("dt", self.dt.clone());
        push("formulation", self.formulation.clone());
        push("snapshot_times", self.snapshot_times.clone());
        push("input", self.input.as_ref().map(|p| p.display().to_string()));
        push("output_dir", self.output_dir.as_ref().map(|p| p.display().to_string()));
        for kv in &self.extra {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got `{kv}`")))?;
            pairs.extend(parse_pairs(&format!("{} = {}", k.trim(), v.trim()))?);
        }
        RunConfig::from_pairs(&pairs)
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let cfg = args.load()?;
            let summary = experiment::run(&cfg)?;
            let last = summary.rows.last().expect("initial row is always recorded");
            println!(
                "{} N_G={} t={} steps={} energy={:e} enstrophy={:e} -> {}",
                cfg.experiment,
                2 * cfg.n_modes,
                summary.time,
                summary.steps,
                last.energy,
                last.enstrophy,
                cfg.output_dir.display()
            );
        }
        Command::Converge { config, levels, times } => {
            let cfg = config.load()?;
            let table = convergence_study(&cfg, &levels, &times)?;
            let csv = table.to_csv();
            fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::Io {
                path: cfg.output_dir.clone(),
                source: e,
            })?;
            experiment::write_atomic(&cfg.output_dir.join("convergence.csv"), csv.as_bytes())?;
            print!("{csv}");
        }
        Command::Spectrum { files, output } => {
            let csv = spectrum_report(&files)?;
            match output {
                Some(path) => experiment::write_atomic(&path, csv.as_bytes())?,
                None => print!("{csv}"),
            }
        }
        Command::Validate(args) => {
            let cfg = args.load()?;
            print!("{}", validate_config(&cfg).to_text());
        }
        Command::Diff { a, b } => {
            println!("{:e}", diff_snapshots(&a, &b)?);
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Error::AtTime { time, .. } = &e {
                if e.is_blowup() {
                    eprintln!("blow-up; last good time t = {time}");
                }
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
