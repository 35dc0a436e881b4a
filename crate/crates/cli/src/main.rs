use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use jcm_core::oracle::{compare_states, integrate_samples, DenseState, DEFAULT_DT};
use jcm_core::params::{default_n_max, validate_params};
use jcm_core::scenario::{self, catalog, run_scenario, Grid, Scenario, TimeSeries, CATALOG};
use jcm_core::{build_initial_state, par, propagate, ClbFormula, ClbOptions, Error, ModelParams};

/// Phase-damped Jaynes-Cummings dynamics from entangled mixed initial states.
#[derive(Parser, Debug)]
#[command(name = "jcm", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in scenarios.
    List,
    /// Run a catalog scenario (or `custom` with --config) and write one CSV per curve.
    Scenario {
        /// Scenario name, see `jcm list`.
        name: String,
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        grid: TauGridArgs,
    },
    /// Evolve a single parameter set over a τ grid.
    Evolve {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        #[command(flatten)]
        grid: TauGridArgs,
    },
    /// Sweep λ over [0, 1] at fixed τ.
    SweepClb {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        output: OutputArgs,
        /// Evaluation time.
        #[arg(long, default_value_t = 0.0)]
        tau: f64,
        #[arg(long, default_value_t = scenario::DEFAULT_LAMBDA_STEP)]
        lambda_step: f64,
    },
    /// Compare the closed form against direct integration of the master equation.
    Validate {
        #[command(flatten)]
        params: ParamArgs,
        /// RK4 step size.
        #[arg(long, default_value_t = DEFAULT_DT)]
        dt: f64,
        /// Compare at τ = 0, 1, ..., tau-max.
        #[arg(long, default_value_t = 30.0)]
        tau_max: f64,
        /// Largest allowed elementwise deviation.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        /// Run the full λ × γ̄ × φ reference grid at N=5, n_max=60 instead of a single point.
        #[arg(long)]
        grid: bool,
    },
}

#[derive(Args, Debug, Default, Clone)]
struct ParamArgs {
    /// Flat `key = value` parameter file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, alias = "kappa_bar")]
    kappa_bar: Option<f64>,
    #[arg(long, alias = "gamma_bar")]
    gamma_bar: Option<f64>,
    /// Poisson mean N; also resets n_max unless --n-max is given.
    #[arg(long, alias = "mean_photons")]
    mean_photons: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    p11: Option<f64>,
    #[arg(long)]
    q11: Option<f64>,
    #[arg(long, alias = "bell_phase", allow_hyphen_values = true)]
    bell_phase: Option<f64>,
    #[arg(long, alias = "n_max")]
    n_max: Option<usize>,
    #[arg(long, alias = "tail_tol")]
    tail_tol: Option<f64>,
}

impl ParamArgs {
    fn has_overrides(&self) -> bool {
        self.config.is_some()
            || self.kappa_bar.is_some()
            || self.gamma_bar.is_some()
            || self.mean_photons.is_some()
            || self.lambda.is_some()
            || self.p11.is_some()
            || self.q11.is_some()
            || self.bell_phase.is_some()
            || self.n_max.is_some()
            || self.tail_tol.is_some()
    }

    fn apply(&self, base: ModelParams) -> Result<ModelParams> {
        let mut p = match &self.config {
            Some(path) => ModelParams::from_config_file(path)
                .with_context(|| format!("reading {}", path.display()))?,
            None => base,
        };
        if let Some(n) = self.mean_photons {
            p.mean_photons = n;
            p.n_max = default_n_max(n);
        }
        let fields = [
            (&mut p.kappa_bar, self.kappa_bar),
            (&mut p.gamma_bar, self.gamma_bar),
            (&mut p.lambda, self.lambda),
            (&mut p.p11, self.p11),
            (&mut p.q11, self.q11),
            (&mut p.bell_phase, self.bell_phase),
            (&mut p.tail_tol, self.tail_tol),
        ];
        for (slot, value) in fields {
            if let Some(v) = value {
                *slot = v;
            }
        }
        if let Some(n) = self.n_max {
            p.n_max = n;
        }
        Ok(p)
    }

    fn resolve(&self) -> Result<ModelParams> {
        self.apply(ModelParams::default())
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output directory; CSV goes to stdout when omitted (single-curve commands only).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Highest revival order in the Poisson-sum overlay.
    #[arg(long, default_value_t = jcm_core::revival::DEFAULT_NU_MAX)]
    nu_max: usize,
    #[arg(long, default_value_t = ClbFormula::TwoBranch)]
    clb_formula: ClbFormula,
    /// Whether the n = 0 window enters the CLB average.
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    clb_include_n0: bool,
}

impl OutputArgs {
    fn configure(&self, s: &mut Scenario) {
        s.options.nu_max = self.nu_max;
        s.options.clb = ClbOptions { formula: self.clb_formula, include_n0: self.clb_include_n0 };
    }
}

#[derive(Args, Debug, Clone, Default)]
struct TauGridArgs {
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_step: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = err
                .downcast_ref::<Error>()
                .is_some_and(|e| matches!(e, Error::UnknownScenario(_)));
            ExitCode::from(if usage { 2 } else { 1 })
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::List => {
            let mut out = io::stdout().lock();
            for name in CATALOG {
                let s = catalog(name)?;
                writeln!(out, "{name:<7} {}", s.description)?;
            }
            writeln!(out, "{:<7} single curve from --config and parameter flags", "custom")?;
        }
        Command::Scenario { name, params, output, grid } => {
            let mut s = if name == "custom" {
                if params.config.is_none() {
                    bail!("scenario `custom` needs --config");
                }
                let p = params.resolve()?;
                let stop = if p.mean_photons > 10.0 { 70.0 } else { 30.0 };
                Scenario::custom("custom", p, Grid::tau(stop))
            } else {
                let mut s = catalog(&name)?;
                if params.has_overrides() {
                    for c in &mut s.curves {
                        c.params = params.apply(c.params.clone())?;
                    }
                }
                s
            };
            s.override_tau_grid(grid.tau_max, grid.tau_step);
            output.configure(&mut s);
            emit(&s, &output)?;
        }
        Command::Evolve { params, output, grid } => {
            let p = params.resolve()?;
            let mut s = Scenario::custom("evolve", p, Grid::tau(30.0));
            s.override_tau_grid(grid.tau_max, grid.tau_step);
            output.configure(&mut s);
            emit(&s, &output)?;
        }
        Command::SweepClb { params, output, tau, lambda_step } => {
            let p = params.resolve()?;
            let grid = Grid::Lambda { start: 0.0, stop: 1.0, step: lambda_step, tau };
            let mut s = Scenario::custom("sweep_clb", p, grid);
            output.configure(&mut s);
            emit(&s, &output)?;
        }
        Command::Validate { params, dt, tau_max, tol, grid } => {
            let points = if grid { reference_grid() } else { vec![params.resolve()?] };
            return validate(&points, dt, tau_max, tol);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit(s: &Scenario, output: &OutputArgs) -> Result<()> {
    let series = run_scenario(s)?;
    match &output.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            for ts in &series {
                println!("{}", scenario::emit_csv(ts, dir)?.display());
            }
        }
        None => {
            let [ts]: [TimeSeries; 1] = series
                .try_into()
                .map_err(|_| anyhow::anyhow!("scenario `{}` has several curves; pass --out <dir>", s.name))?;
            scenario::write_csv(&ts, io::stdout().lock())?;
        }
    }
    Ok(())
}

fn reference_grid() -> Vec<ModelParams> {
    let mut points = Vec::new();
    for lambda in [0.0, 0.9, 1.0] {
        for gamma_bar in [0.0, 0.01] {
            for bell_phase in [0.0, FRAC_PI_6, FRAC_PI_2] {
                points.push(ModelParams {
                    gamma_bar,
                    lambda,
                    p11: 0.8,
                    q11: 0.5,
                    bell_phase,
                    n_max: 60,
                    ..ModelParams::with_mean_photons(5.0)
                });
            }
        }
    }
    points
}

fn validate(points: &[ModelParams], dt: f64, tau_max: f64, tol: f64) -> Result<ExitCode> {
    if tau_max.is_nan() || tau_max < 0.0 {
        bail!("--tau-max must be >= 0");
    }
    for p in points {
        validate_params(p).into_result()?;
    }
    let times: Vec<f64> = (0..=tau_max.floor() as usize).map(|k| k as f64).collect();
    let worst = par::try_map(points, |p| -> jcm_core::Result<f64> {
        let initial = build_initial_state(p)?;
        let dense = integrate_samples(&DenseState::from_block(&initial), p, &times, dt)?;
        let mut max: f64 = 0.0;
        for (d, &tau) in dense.iter().zip(&times) {
            max = max.max(compare_states(d, &propagate(&initial, p, tau)?)?.max);
        }
        Ok(max)
    })?;
    let mut ok = true;
    for (p, dev) in points.iter().zip(&worst) {
        let pass = *dev < tol;
        ok &= pass;
        println!(
            "{} lambda={} gamma_bar={} bell_phase={:.6} n_max={} max_deviation={:.3e}",
            if pass { "ok  " } else { "FAIL" },
            p.lambda,
            p.gamma_bar,
            p.bell_phase,
            p.n_max,
            dev
        );
    }
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
