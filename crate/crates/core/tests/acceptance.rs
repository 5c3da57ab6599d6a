//! Acceptance criteria. Each criterion prints one `PASS` or `FAIL` line
//! with the measured value and its pinned threshold; the binary exits
//! non-zero if any criterion fails.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

use common::{grid_drift, mean_free, random_field, random_polynomial, rng};
use sveuler::diagnostics::{l2_error, lp_norm};
use sveuler::experiment::{convergence_study, run, simulate, Experiment, RunConfig};
use sveuler::initial::{bspline_mollifier, confined_eddy_velocity, sheet_vorticity};
use sveuler::integrator::{Flow, FlowState, Formulation, Observer, StepperConfig};
use sveuler::spectral::{biot_savart, curl, dealiased_product, laplacian};
use sveuler::sv::{q_hat, SvConfig, SvOperator};
use sveuler::{GridSpec, Result, SpectralField};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn preset(experiment: Experiment, n_grid: usize, t_end: f64) -> RunConfig {
    let mut c = RunConfig::preset(experiment);
    c.n_modes = n_grid / 2;
    c.t_end = t_end;
    c.snapshot_times = vec![0.0, t_end];
    c
}

/// Truncated convolution `sum_{p + q = k} f_p g_q` over the closed band.
fn brute_force_product(f: &SpectralField, g: &SpectralField) -> SpectralField {
    let grid = f.grid();
    let n = grid.n_modes() as i64;
    let mut out = SpectralField::zeros(grid);
    for (p1, p2) in grid.modes() {
        let fp = f.get(p1, p2);
        for (q1, q2) in grid.modes() {
            let (k1, k2) = (p1 + q1, p2 + q2);
            if k1.abs() <= n && k2.abs() <= n {
                let v = out.get(k1, k2) + fp * g.get(q1, q2);
                out.set(k1, k2, v);
            }
        }
    }
    out
}

fn c1_product_oracle() -> Outcome {
    let g = GridSpec::new(8).unwrap();
    let mut r = rng(1);
    let pairs: Vec<_> = (0..50)
        .map(|_| (random_field(g, &mut r), random_field(g, &mut r)))
        .collect();
    let start = Instant::now();
    let products: Vec<_> = pairs.iter().map(|(a, b)| dealiased_product(a, b).unwrap()).collect();
    let elapsed = start.elapsed().as_secs_f64();
    let mut worst = 0.0f64;
    for ((a, b), p) in pairs.iter().zip(&products) {
        let exact = brute_force_product(a, b);
        worst = worst.max(p.sub(&exact).unwrap().max_abs() / exact.max_abs());
    }
    outcome(
        worst <= 1e-12 && elapsed < 1.0,
        format!("max relative error {worst:.2e} <= 1e-12 over 50 pairs at N = 8; runtime {elapsed:.3} s < 1 s"),
    )
}

fn c2_formulation_equivalence() -> Outcome {
    let mut worst = 0.0f64;
    let mut r = rng(2);
    for n in [4usize, 8, 16] {
        let g = GridSpec::new(n).unwrap();
        let op = SvOperator::new(g, SvConfig::default()).unwrap();
        for _ in 0..20 {
            let u = biot_savart(&mean_free(random_field(g, &mut r))).unwrap();
            let lhs = curl(&op.rhs(&u).unwrap());
            let rhs = op.rhs_vorticity(&curl(&u)).unwrap();
            worst = worst.max(lhs.sub(&rhs).unwrap().max_abs());
        }
    }
    outcome(
        worst <= 1e-11,
        format!("max |curl R(u) - R_w(curl u)| = {worst:.2e} <= 1e-11 (20 fields each at N = 4, 8, 16)"),
    )
}

fn c3_multiplier_thresholds() -> Outcome {
    let mut low = 0.0f64;
    let mut high = 1.0f64;
    for n in [64.0, 256.0] {
        low = low.max(q_hat(0.1 * n, n / 3.0, 18.0));
        high = high.min(q_hat(0.4 * n, n / 3.0, 18.0));
    }
    outcome(
        low < 1e-9 && high > 1.0 - 1e-11,
        format!(
            "Q(0.1N) = {low:.2e} < 1e-9, 1 - Q(0.4N) = {:.2e} < 1e-11 for N = 64, 256",
            1.0 - high
        ),
    )
}

/// Per-step growth of `||u||`, `||w||`, mean drift and divergence.
struct Invariants {
    prev: Option<(f64, f64)>,
    mean0: f64,
    energy_growth: f64,
    enstrophy_growth: f64,
    mean_drift: f64,
    divergence: f64,
    steps: usize,
}

impl Invariants {
    fn new(s: &FlowState) -> Self {
        let mut inv = Invariants {
            prev: None,
            mean0: s.vorticity().mean().re,
            energy_growth: 0.0,
            enstrophy_growth: 0.0,
            mean_drift: 0.0,
            divergence: 0.0,
            steps: 0,
        };
        inv.observe(s).unwrap();
        inv
    }

    fn observe(&mut self, s: &FlowState) -> Result<()> {
        let u = s.velocity()?;
        let w = s.vorticity();
        let now = (u.l2_norm(), w.l2_norm());
        if let Some(p) = self.prev {
            self.energy_growth = self.energy_growth.max(now.0 - p.0);
            self.enstrophy_growth = self.enstrophy_growth.max(now.1 - p.1);
        }
        self.prev = Some(now);
        self.mean_drift = self
            .mean_drift
            .max((w.mean().re - self.mean0).abs().max(w.mean().im.abs()));
        self.divergence = self.divergence.max(u.max_divergence());
        Ok(())
    }
}

impl Observer<FlowState> for Invariants {
    fn on_step(&mut self, _: f64, step: usize, _: f64, s: &FlowState) -> Result<()> {
        self.steps = step;
        self.observe(s)
    }
}

fn thin_sheet_run(formulation: Formulation) -> Invariants {
    let cfg = preset(Experiment::ThinSheet, 128, 1.0);
    let g = cfg.grid().unwrap();
    let op = SvOperator::new(g, cfg.sv_config()).unwrap();
    let w0 = sheet_vorticity(g, &cfg.sheet()).unwrap();
    let s0 = FlowState::from_vorticity(w0, formulation).unwrap();
    let mut inv = Invariants::new(&s0);
    let stepper = StepperConfig {
        formulation,
        ..cfg.stepper()
    };
    Flow::new(&op).run(s0, &stepper, &[], &mut inv).unwrap();
    inv
}

fn c4_monotonicity(inv: &Invariants) -> Outcome {
    outcome(
        inv.energy_growth <= 1e-10 && inv.enstrophy_growth <= 1e-10,
        format!(
            "thin sheet N_G = 128 to t = 1 ({} steps): max step increase ||u|| {:.2e}, ||w|| {:.2e} <= 1e-10",
            inv.steps, inv.energy_growth, inv.enstrophy_growth
        ),
    )
}

fn c5_structure(vort: &Invariants, prim: &Invariants) -> Outcome {
    let mean = vort.mean_drift.max(prim.mean_drift);
    let div = vort.divergence.max(prim.divergence);
    outcome(
        mean <= 1e-12 && div <= 1e-12,
        format!(
            "thin sheet N_G = 128 to t = 1, both formulations: mean drift {mean:.2e}, max |k.u_k| {div:.2e} <= 1e-12"
        ),
    )
}

fn c6_taylor_green() -> Outcome {
    let out = simulate(&preset(Experiment::TaylorGreen, 64, 1.0)).unwrap();
    let drift = grid_drift(&out.initial, &out.state.vorticity());
    outcome(
        drift <= 1e-6 && out.time == 1.0,
        format!("N_G = 64, t = 1, {} steps: L-inf drift {drift:.2e} <= 1e-6", out.steps),
    )
}

fn c7_temporal_order() -> Outcome {
    let h = 1e-3;
    let t_end = 0.2;
    let finals: Vec<_> = [4.0 * h, 2.0 * h, h]
        .iter()
        .map(|&dt| {
            let mut c = preset(Experiment::ThinSheet, 64, t_end);
            c.dt = Some(dt);
            c.diagnostics_every = usize::MAX;
            biot_savart(&simulate(&c).unwrap().state.vorticity()).unwrap()
        })
        .collect();
    let e_coarse = l2_error(&finals[0], &finals[1]).unwrap();
    let e_fine = l2_error(&finals[1], &finals[2]).unwrap();
    let order = (e_coarse / e_fine).log2();
    outcome(
        (2.5..=3.5).contains(&order),
        format!(
            "thin sheet N_G = 64, t = {t_end}, dt = 4h, 2h, h with h = {h:e}: differences {e_coarse:.2e}, {e_fine:.2e}; order {order:.3} in [2.5, 3.5]"
        ),
    )
}

fn c8_spatial_convergence() -> Outcome {
    let base = preset(Experiment::FatSheet, 64, 0.4);
    let start = Instant::now();
    let table = convergence_study(&base, &[64, 128, 256, 512], &[0.4]).unwrap();
    let errs: Vec<f64> = table.column(0)[..3].to_vec();
    let decreasing = errs.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing,
        format!(
            "fat sheet (0.05, 0.05) at t = 0.4 vs N_G = 512: E(64) = {:.3e}, E(128) = {:.3e}, E(256) = {:.3e} strictly decreasing ({:.0} s)",
            errs[0],
            errs[1],
            errs[2],
            start.elapsed().as_secs_f64()
        ),
    )
}

fn c9_mollifier_and_gap() -> Outcome {
    // three-point Gauss–Legendre is exact for the quartic pieces of psi(r) r
    let nodes = [
        (-(0.6f64).sqrt(), 5.0 / 9.0),
        (0.0, 8.0 / 9.0),
        ((0.6f64).sqrt(), 5.0 / 9.0),
    ];
    let mut mass = 0.0;
    for (a, b) in [(0.0, 0.5), (0.5, 1.0)] {
        let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
        for (x, w) in nodes {
            let r = mid + half * x;
            mass += w * half * bspline_mollifier(r) * r;
        }
    }
    mass *= 2.0 * PI;
    let mut worst_gap = 0.0f64;
    for rho_n in [0.05, 10.0 / 64.0, 10.0 / 128.0, 10.0 / 512.0, 0.5] {
        let inner = confined_eddy_velocity(0.5, rho_n);
        let outer = confined_eddy_velocity(0.5 + 1e-14, rho_n);
        let bound = PI * (1.0 - (1.0 / (2.0 * rho_n)).tanh()) / 4.0;
        worst_gap = worst_gap.max((inner - outer).abs() - bound * (1.0 + 1e-10) - 1e-13);
    }
    outcome(
        (mass - 1.0).abs() <= 1e-10 && worst_gap <= 0.0,
        format!(
            "|2 pi int psi r dr - 1| = {:.2e} <= 1e-10; continuity gap minus bound = {worst_gap:.2e} <= 0",
            (mass - 1.0).abs()
        ),
    )
}

fn c10_kissing_drift() -> Outcome {
    let times: Vec<f64> = (2..=10).map(|i| i as f64 / 10.0).collect();
    let mut cfg = preset(Experiment::KissingVortices, 128, 1.0);
    cfg.snapshot_times = times.clone();
    cfg.diagnostics_every = usize::MAX;
    let out = simulate(&cfg).unwrap();
    let u0 = biot_savart(&out.initial).unwrap();
    let dist: Vec<f64> = out
        .outputs
        .iter()
        .map(|(_, w)| l2_error(&biot_savart(w).unwrap(), &u0).unwrap())
        .collect();
    let increasing = dist.len() == times.len() && dist.windows(2).all(|w| w[1] > w[0]);
    let shown: Vec<String> = dist.iter().map(|d| format!("{d:.3e}")).collect();
    outcome(
        increasing,
        format!(
            "N_G = 128, (0.01, 10): ||u(t) - u0|| at t = 0.2..1.0 = [{}] strictly increasing",
            shown.join(", ")
        ),
    )
}

fn c11_bernstein() -> Outcome {
    let mut worst = [0.0f64; 3];
    let ps = [1.0, 2.0, f64::INFINITY];
    let mut r = rng(11);
    for (i, &p) in ps.iter().enumerate() {
        for t in 0..100 {
            let n = [4usize, 8, 12, 16, 24, 32][t % 6];
            let g = GridSpec::new(n).unwrap();
            let f = random_polynomial(g, &mut r);
            let bound = 2.0 * (2.0 * PI * n as f64).powi(2);
            let ratio = lp_norm(&laplacian(&f), p).unwrap() / (bound * lp_norm(&f, p).unwrap());
            worst[i] = worst[i].max(ratio);
        }
    }
    outcome(
        worst.iter().all(|&w| w <= 1.0),
        format!(
            "max ||Lap f||_p / (2 (2 pi N)^2 ||f||_p) over 100 polynomials, N <= 32: p=1 {:.3}, p=2 {:.3}, p=inf {:.3} <= 1",
            worst[0], worst[1], worst[2]
        ),
    )
}

fn c12_determinism() -> Outcome {
    let root = tempfile::tempdir().unwrap();
    let mut compared = 0;
    let mut mismatches = Vec::new();
    let mut custom_input = None;
    for experiment in Experiment::ALL {
        let mut files = Vec::new();
        for rep in 0..2 {
            let mut cfg = preset(experiment, 32, 0.05);
            cfg.snapshot_times = vec![0.0, 0.025, 0.05];
            if experiment == Experiment::Custom {
                cfg.input = custom_input.clone();
            }
            cfg.output_dir = root.path().join(format!("{experiment}_{rep}"));
            files.push(run(&cfg).unwrap().snapshot_paths);
        }
        if experiment == Experiment::KissingVortices {
            custom_input = Some(files[0][2].clone());
        }
        for (a, b) in files[0].iter().zip(&files[1]) {
            compared += 1;
            if std::fs::read(a).unwrap() != std::fs::read(b).unwrap() {
                mismatches.push(format!("{experiment}:{}", a.file_name().unwrap().to_string_lossy()));
            }
        }
    }
    outcome(
        mismatches.is_empty() && compared == 15,
        format!(
            "{compared} snapshot pairs across all presets, {} differ {:?}",
            mismatches.len(),
            mismatches
        ),
    )
}

fn main() -> ExitCode {
    let mut failures = 0;
    let mut report = |id: usize, name: &str, o: Outcome| {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {id:>2} {name}: {}", o.detail);
        if !o.pass {
            failures += 1;
        }
    };
    report(1, "product oracle", c1_product_oracle());
    report(2, "formulation equivalence", c2_formulation_equivalence());
    report(3, "multiplier thresholds", c3_multiplier_thresholds());
    let vort = thin_sheet_run(Formulation::Vorticity);
    let prim = thin_sheet_run(Formulation::Primitive);
    report(4, "energy/enstrophy monotonicity", c4_monotonicity(&vort));
    report(5, "structural invariants", c5_structure(&vort, &prim));
    report(6, "steady-state fidelity", c6_taylor_green());
    report(7, "temporal order", c7_temporal_order());
    report(8, "spatial convergence", c8_spatial_convergence());
    report(9, "mollifier normalisation", c9_mollifier_and_gap());
    report(10, "kissing-vortices drift", c10_kissing_drift());
    report(11, "Bernstein inequality", c11_bernstein());
    report(12, "determinism", c12_determinism());
    println!("acceptance: {} of 12 criteria passed", 12 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
