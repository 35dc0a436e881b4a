//! Figure scenarios, their time/λ series, and deterministic CSV output.
//!
//! Each scenario is a list of curves (one parameter set and grid each). A curve
//! evaluates to one [`TimeSeries`] written to `<scenario>__<label>.csv`.
//! Default grids: τ ∈ [0, 70] for N = 20, τ ∈ [0, 30] for N = 5, step 0.05;
//! λ ∈ [0, 1] step 0.01 for the initial-state CLB sweeps.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::entanglement::{concurrence_lower_bound_with, ClbOptions};
use crate::error::{Error, Result};
use crate::evolution::{propagate, spectral_decompose};
use crate::observables::entropy_report;
use crate::par;
use crate::params::{validate_params, ModelParams};
use crate::revival::{RevivalSeries, DEFAULT_NU_MAX};
use crate::state::build_initial_state;

pub const DEFAULT_TAU_STEP: f64 = 0.05;
pub const DEFAULT_LAMBDA_STEP: f64 = 0.01;

/// Built-in scenario names in catalog order.
pub const CATALOG: [&str; 10] = [
    "fig1a", "fig1b", "fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b", "fig5a", "fig5b",
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Grid {
    /// Time samples `start, start + step, ..., <= stop`.
    Tau { start: f64, stop: f64, step: f64 },
    /// Entanglement-parameter samples evaluated at fixed time `tau`.
    Lambda { start: f64, stop: f64, step: f64, tau: f64 },
}

impl Grid {
    pub fn tau(stop: f64) -> Self {
        Grid::Tau { start: 0.0, stop, step: DEFAULT_TAU_STEP }
    }

    pub fn lambda() -> Self {
        Grid::Lambda { start: 0.0, stop: 1.0, step: DEFAULT_LAMBDA_STEP, tau: 0.0 }
    }

    pub fn axis(&self) -> &'static str {
        match self {
            Grid::Tau { .. } => "tau",
            Grid::Lambda { .. } => "lambda",
        }
    }

    /// Grid points, computed as `start + k·step` so they never accumulate rounding.
    pub fn points(&self) -> Result<Vec<f64>> {
        let (start, stop, step) = match *self {
            Grid::Tau { start, stop, step } | Grid::Lambda { start, stop, step, .. } => {
                (start, stop, step)
            }
        };
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(Error::Scenario("grid bounds must be finite".into()));
        }
        if !(step > 0.0) {
            return Err(Error::Scenario(format!("grid step must be > 0, got {step}")));
        }
        if stop < start {
            return Err(Error::Scenario(format!("empty grid: stop {stop} < start {start}")));
        }
        let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|k| start + k as f64 * step).collect())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Column {
    Clb,
    Deficit,
    Mutual,
    SAtom,
    SRad,
    SJoint,
    RelAtom,
    RelRad,
    Inversion,
    InversionAsym,
}

impl Column {
    pub const ALL: [Column; 10] = [
        Column::Clb,
        Column::Deficit,
        Column::Mutual,
        Column::SAtom,
        Column::SRad,
        Column::SJoint,
        Column::RelAtom,
        Column::RelRad,
        Column::Inversion,
        Column::InversionAsym,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Column::Clb => "clb",
            Column::Deficit => "deficit",
            Column::Mutual => "mutual",
            Column::SAtom => "s_atom",
            Column::SRad => "s_rad",
            Column::SJoint => "s_joint",
            Column::RelAtom => "rel_atom",
            Column::RelRad => "rel_rad",
            Column::Inversion => "inversion",
            Column::InversionAsym => "inversion_asym",
        }
    }

    pub fn parse(name: &str) -> Option<Column> {
        Column::ALL.into_iter().find(|c| c.name() == name)
    }
}

/// Observables at one grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Record {
    /// τ or λ, depending on the grid.
    pub x: f64,
    pub clb: f64,
    pub deficit: f64,
    pub mutual: f64,
    pub s_atom: f64,
    pub s_rad: f64,
    pub s_joint: f64,
    pub rel_atom: f64,
    pub rel_rad: f64,
    pub inversion: f64,
    /// Poisson-sum inversion; NaN when γ̄ ≠ 0.
    pub inversion_asym: f64,
}

impl Record {
    pub fn get(&self, column: Column) -> f64 {
        match column {
            Column::Clb => self.clb,
            Column::Deficit => self.deficit,
            Column::Mutual => self.mutual,
            Column::SAtom => self.s_atom,
            Column::SRad => self.s_rad,
            Column::SJoint => self.s_joint,
            Column::RelAtom => self.rel_atom,
            Column::RelRad => self.rel_rad,
            Column::Inversion => self.inversion,
            Column::InversionAsym => self.inversion_asym,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    pub label: String,
    pub params: ModelParams,
    pub grid: Grid,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RunOptions {
    pub nu_max: usize,
    pub clb: ClbOptions,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { nu_max: DEFAULT_NU_MAX, clb: ClbOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub curves: Vec<Curve>,
    /// Output columns; always written in [`Column::ALL`] order.
    pub columns: Vec<Column>,
    pub options: RunOptions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    pub scenario: String,
    pub label: String,
    pub axis: &'static str,
    pub columns: Vec<Column>,
    pub records: Vec<Record>,
}

impl TimeSeries {
    pub fn file_name(&self) -> String {
        format!("{}__{}.csv", self.scenario, self.label)
    }

    pub fn column(&self, column: Column) -> Vec<f64> {
        self.records.iter().map(|r| r.get(column)).collect()
    }

    pub fn xs(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.x).collect()
    }
}

/// `0.05 → "0p05"`, `1 → "1"`.
fn num_label(x: f64) -> String {
    format!("{x}").replace('.', "p").replace('-', "m")
}

fn curve(label: impl Into<String>, params: ModelParams, grid: Grid) -> Curve {
    Curve { label: label.into(), params, grid }
}

fn base(mean_photons: f64) -> ModelParams {
    ModelParams {
        kappa_bar: 1.0,
        gamma_bar: 0.0,
        p11: 0.8,
        q11: 0.5,
        bell_phase: FRAC_PI_6,
        ..ModelParams::with_mean_photons(mean_photons)
    }
}

fn tau_stop(mean_photons: f64) -> f64 {
    if mean_photons >= 20.0 {
        70.0
    } else {
        30.0
    }
}

/// Undamped curves followed by their damped copies with `_g<γ̄>` labels.
fn with_damping(curves: Vec<Curve>, gamma_bar: f64) -> Vec<Curve> {
    let damped: Vec<Curve> = curves
        .iter()
        .map(|c| Curve {
            label: format!("{}_g{}", c.label, num_label(gamma_bar)),
            params: ModelParams { gamma_bar, ..c.params.clone() },
            grid: c.grid,
        })
        .collect();
    curves.into_iter().chain(damped).collect()
}

fn clb_vs_time(mean_photons: f64) -> Vec<Curve> {
    let curves = [0.0, 0.9, 1.0]
        .into_iter()
        .map(|lambda| {
            curve(
                format!("lam{}", num_label(lambda)),
                ModelParams { lambda, ..base(mean_photons) },
                Grid::tau(tau_stop(mean_photons)),
            )
        })
        .collect();
    with_damping(curves, 0.01)
}

fn factored_n20() -> Curve {
    curve("lam0", ModelParams { lambda: 0.0, ..base(20.0) }, Grid::tau(70.0))
}

fn bell_phases() -> Vec<Curve> {
    [("phi0", 0.0), ("phiPi6", FRAC_PI_6), ("phiPi2", FRAC_PI_2)]
        .into_iter()
        .map(|(label, bell_phase)| {
            curve(label, ModelParams { lambda: 1.0, bell_phase, ..base(20.0) }, Grid::tau(70.0))
        })
        .collect()
}

fn supercorrelation(mean_photons: f64) -> Vec<Curve> {
    let grid = Grid::tau(tau_stop(mean_photons));
    let curves = vec![
        curve("lam0_p11_0", ModelParams { lambda: 0.0, p11: 0.0, ..base(mean_photons) }, grid),
        curve("lam0_p11_0p8", ModelParams { lambda: 0.0, p11: 0.8, ..base(mean_photons) }, grid),
        curve("lam1", ModelParams { lambda: 1.0, ..base(mean_photons) }, grid),
    ];
    with_damping(curves, 0.05)
}

/// Builds a catalog scenario by name.
pub fn catalog(name: &str) -> Result<Scenario> {
    let (description, curves): (&str, Vec<Curve>) = match name {
        "fig1a" => (
            "initial-state CLB vs lambda, N=2, q11=0.5, phi=pi/6, for several p11",
            [0.0, 0.5, 0.8, 1.0]
                .into_iter()
                .map(|p11| {
                    curve(format!("p11_{}", num_label(p11)), ModelParams { p11, ..base(2.0) }, Grid::lambda())
                })
                .collect(),
        ),
        "fig1b" => (
            "initial-state CLB vs lambda, p11=1, q11=0.5, phi=pi/6, for N = 2, 3, 5, 20",
            [2.0, 3.0, 5.0, 20.0]
                .into_iter()
                .map(|n| curve(format!("N{n}"), ModelParams { p11: 1.0, ..base(n) }, Grid::lambda()))
                .collect(),
        ),
        "fig2a" => ("CLB vs tau, N=5, lambda = 0, 0.9, 1; inset gamma_bar = 0.01", clb_vs_time(5.0)),
        "fig2b" => ("CLB vs tau, N=20, lambda = 0, 0.9, 1; inset gamma_bar = 0.01", clb_vs_time(20.0)),
        "fig3a" => (
            "C, D, S(A:R) from the factored state, N=20, lambda=0, p11=0.8",
            vec![factored_n20()],
        ),
        "fig3b" => (
            "inversion, S(A|R), S(R|A) from the factored state; damped gamma_bar = 0.05",
            with_damping(vec![factored_n20()], 0.05),
        ),
        "fig4a" => (
            "C, D, S(A:R) from the Bell state, N=20, q11=0.5, phi = 0, pi/6, pi/2",
            bell_phases(),
        ),
        "fig4b" => (
            "inversion, S(A|R), S(R|A) from the Bell state; damped gamma_bar = 0.05",
            with_damping(bell_phases(), 0.05),
        ),
        "fig5a" => ("S(R|A) supercorrelation, N=20; damped gamma_bar = 0.05", supercorrelation(20.0)),
        "fig5b" => ("S(R|A) supercorrelation, N=5; damped gamma_bar = 0.05", supercorrelation(5.0)),
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    Ok(Scenario {
        name: name.to_string(),
        description: description.to_string(),
        curves,
        columns: Column::ALL.to_vec(),
        options: RunOptions::default(),
    })
}

impl Scenario {
    /// A single-curve scenario for ad-hoc runs.
    pub fn custom(name: impl Into<String>, params: ModelParams, grid: Grid) -> Self {
        Scenario {
            name: name.into(),
            description: "custom run".to_string(),
            curves: vec![curve("custom", params, grid)],
            columns: Column::ALL.to_vec(),
            options: RunOptions::default(),
        }
    }

    /// Replaces the range and step of every τ grid that the arguments set.
    pub fn override_tau_grid(&mut self, stop: Option<f64>, step: Option<f64>) {
        for c in &mut self.curves {
            if let Grid::Tau { stop: s, step: d, .. } = &mut c.grid {
                if let Some(stop) = stop {
                    *s = stop;
                }
                if let Some(step) = step {
                    *d = step;
                }
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.curves.is_empty() {
            return Err(Error::Scenario(format!("scenario `{}` has no curves", self.name)));
        }
        if self.columns.is_empty() {
            return Err(Error::Scenario("no output columns selected".into()));
        }
        for c in &self.curves {
            c.grid.points()?;
            match c.grid {
                Grid::Lambda { start, stop, .. } if start < 0.0 || stop > 1.0 => {
                    return Err(Error::Scenario(format!(
                        "curve `{}`: lambda grid must lie in [0, 1]",
                        c.label
                    )))
                }
                Grid::Tau { start, .. } if start < 0.0 => {
                    return Err(Error::Scenario(format!("curve `{}`: tau must be >= 0", c.label)))
                }
                _ => {}
            }
            validate_params(&c.params)
                .into_result()
                .map_err(|e| match e {
                    Error::InvalidParams(msg) => Error::InvalidParams(format!("curve `{}`: {msg}", c.label)),
                    other => other,
                })?;
        }
        Ok(())
    }
}

fn evaluate(params: &ModelParams, tau: f64, x: f64, opts: &RunOptions) -> Result<Record> {
    let initial = build_initial_state(params)?;
    evaluate_from(&initial, params, tau, x, opts)
}

fn evaluate_from(
    initial: &crate::state::BlockState,
    params: &ModelParams,
    tau: f64,
    x: f64,
    opts: &RunOptions,
) -> Result<Record> {
    let state = propagate(initial, params, tau)?;
    let decomp = spectral_decompose(&state);
    let r = entropy_report(&state, &decomp);
    let inversion_asym = if params.gamma_bar == 0.0 {
        RevivalSeries::new(params, opts.nu_max)?.inversion(tau)
    } else {
        f64::NAN
    };
    Ok(Record {
        x,
        clb: concurrence_lower_bound_with(&state, &opts.clb),
        deficit: r.deficit,
        mutual: r.mutual,
        s_atom: r.s_atom,
        s_rad: r.s_rad,
        s_joint: r.s_joint,
        rel_atom: r.rel_atom,
        rel_rad: r.rel_rad,
        inversion: r.inversion,
        inversion_asym,
    })
}

/// Evaluates one curve; grid points run in parallel, results stay in grid order.
pub fn run_curve(scenario: &str, curve: &Curve, columns: &[Column], opts: &RunOptions) -> Result<TimeSeries> {
    let xs = curve.grid.points()?;
    let records = match curve.grid {
        Grid::Tau { .. } => {
            let initial = build_initial_state(&curve.params)?;
            par::try_map(&xs, |&tau| evaluate_from(&initial, &curve.params, tau, tau, opts))?
        }
        Grid::Lambda { tau, .. } => par::try_map(&xs, |&lambda| {
            let params = ModelParams { lambda, ..curve.params.clone() };
            evaluate(&params, tau, lambda, opts)
        })?,
    };
    let mut columns = columns.to_vec();
    columns.sort();
    columns.dedup();
    Ok(TimeSeries {
        scenario: scenario.to_string(),
        label: curve.label.clone(),
        axis: curve.grid.axis(),
        columns,
        records,
    })
}

/// Runs every curve of a validated scenario, in curve order.
pub fn run_scenario(scenario: &Scenario) -> Result<Vec<TimeSeries>> {
    scenario.validate()?;
    scenario
        .curves
        .iter()
        .map(|c| run_curve(&scenario.name, c, &scenario.columns, &scenario.options))
        .collect()
}

/// Nine significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    format!("{x:.8e}")
}

pub fn write_csv<W: Write>(series: &TimeSeries, mut out: W) -> io::Result<()> {
    let mut header = vec![series.axis];
    header.extend(series.columns.iter().map(|c| c.name()));
    writeln!(out, "{}", header.join(","))?;
    for r in &series.records {
        let mut line = format_value(r.x);
        for &c in &series.columns {
            line.push(',');
            line.push_str(&format_value(r.get(c)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

/// Writes `<dir>/<scenario>__<label>.csv` and returns its path.
pub fn emit_csv(series: &TimeSeries, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let path = dir.as_ref().join(series.file_name());
    let mut buf = Vec::new();
    write_csv(series, &mut buf)?;
    fs::write(&path, buf)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_catalog_entry_builds_and_validates() {
        for name in CATALOG {
            let s = catalog(name).unwrap();
            s.validate().unwrap();
            let mut labels: Vec<_> = s.curves.iter().map(|c| c.label.clone()).collect();
            labels.sort();
            labels.dedup();
            assert_eq!(labels.len(), s.curves.len(), "{name}: duplicate labels");
        }
        assert!(matches!(catalog("fig6"), Err(Error::UnknownScenario(_))));
    }

    #[test]
    fn fig4a_has_three_phase_curves() {
        let s = catalog("fig4a").unwrap();
        let labels: Vec<_> = s.curves.iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels, ["phi0", "phiPi6", "phiPi2"]);
    }

    #[test]
    fn catalog_parameters() {
        let s = catalog("fig1a").unwrap();
        for c in &s.curves {
            let p = &c.params;
            assert_eq!((p.mean_photons, p.q11, p.bell_phase, p.kappa_bar, p.gamma_bar), (2.0, 0.5, FRAC_PI_6, 1.0, 0.0));
            assert!(matches!(c.grid, Grid::Lambda { .. }));
        }
        let s = catalog("fig2b").unwrap();
        let lambdas: Vec<_> = s.curves.iter().map(|c| (c.params.lambda, c.params.gamma_bar)).collect();
        assert_eq!(lambdas, [(0.0, 0.0), (0.9, 0.0), (1.0, 0.0), (0.0, 0.01), (0.9, 0.01), (1.0, 0.01)]);
        let s = catalog("fig5b").unwrap();
        assert!(s.curves.iter().all(|c| c.params.mean_photons == 5.0));
        assert_eq!(s.curves[2].label, "lam1");
        assert_eq!(s.curves[2].params.lambda, 1.0);
    }

    #[test]
    fn grid_points_are_exact_multiples() {
        let g = Grid::tau(30.0).points().unwrap();
        assert_eq!(g.len(), 601);
        assert_eq!(g[600], 30.0);
        assert_eq!(g[7], 7.0 * 0.05);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        let l = Grid::lambda().points().unwrap();
        assert_eq!((l.len(), l[0], l[100]), (101, 0.0, 1.0));
    }

    #[test]
    fn empty_grids_are_rejected() {
        let mut s = catalog("fig3a").unwrap();
        s.curves[0].grid = Grid::Tau { start: 5.0, stop: 1.0, step: 0.1 };
        assert!(run_scenario(&s).is_err());
        s.curves[0].grid = Grid::Tau { start: 0.0, stop: 1.0, step: 0.0 };
        assert!(s.validate().is_err());
        s.curves.clear();
        assert!(s.validate().is_err());
    }

    #[test]
    fn invalid_curve_params_are_surfaced() {
        let p = ModelParams { gamma_bar: 5.0, ..ModelParams::default() };
        let s = Scenario::custom("bad", p, Grid::tau(1.0));
        assert!(matches!(run_scenario(&s), Err(Error::InvalidParams(_))));
    }

    #[test]
    fn csv_layout() {
        let mut s = Scenario::custom("t", ModelParams::default(), Grid::Tau { start: 0.0, stop: 0.1, step: 0.05 });
        s.columns = vec![Column::Inversion, Column::Clb];
        let series = run_scenario(&s).unwrap().remove(0);
        let mut buf = Vec::new();
        write_csv(&series, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.split('\n').collect();
        assert_eq!(lines[0], "tau,clb,inversion");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "");
        assert!(lines[1].starts_with("0.00000000e0,"));
        assert!(!text.contains('\r'));
        assert_eq!(series.file_name(), "t__custom.csv");
    }

    #[test]
    fn damped_curves_have_no_overlay() {
        let p = ModelParams { gamma_bar: 0.01, ..ModelParams::default() };
        let s = Scenario::custom("d", p, Grid::Tau { start: 0.0, stop: 0.2, step: 0.1 });
        let series = run_scenario(&s).unwrap().remove(0);
        assert!(series.records.iter().all(|r| r.inversion_asym.is_nan()));
    }

    #[test]
    fn override_tau_grid_leaves_lambda_grids() {
        let mut s = catalog("fig1a").unwrap();
        s.override_tau_grid(Some(3.0), Some(0.5));
        assert_eq!(s.curves[0].grid, Grid::lambda());
        let mut s = catalog("fig3a").unwrap();
        s.override_tau_grid(Some(3.0), None);
        assert_eq!(s.curves[0].grid, Grid::Tau { start: 0.0, stop: 3.0, step: DEFAULT_TAU_STEP });
    }

    #[test]
    fn labels() {
        assert_eq!(num_label(0.05), "0p05");
        assert_eq!(num_label(1.0), "1");
        assert_eq!(num_label(0.9), "0p9");
    }
}
