//! Model parameters, Poisson photon statistics and parameter validation.

use std::f64::consts::TAU;
use std::fmt;
use std::path::Path;

use statrs::function::factorial::ln_factorial;

use crate::error::{Error, Result};
use crate::state;

/// Default bound on the Poisson mass discarded by the Fock truncation.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;

/// Block eigenvalues above this are accepted as nonnegative.
pub const PSD_TOL: f64 = 1e-12;

/// Dimensionless parameters of one run. Time enters operations as `τ = ωt`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelParams {
    /// Coupling κ̄ = κ/ω.
    pub kappa_bar: f64,
    /// Phase damping γ̄ = γ/ω.
    pub gamma_bar: f64,
    /// Poisson mean N of the photon distribution.
    pub mean_photons: f64,
    /// Weight λ of the Bell piece in the initial state.
    pub lambda: f64,
    /// Ground-state occupation p11 of the factored atomic state.
    pub p11: f64,
    /// Bell parameter q11 = 1/(1 + |a|²).
    pub q11: f64,
    /// Bell phase φ, with a = |a| e^{-iφ}.
    pub bell_phase: f64,
    /// Highest retained photon number.
    pub n_max: usize,
    /// Allowed Poisson mass beyond `n_max`.
    pub tail_tol: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self::with_mean_photons(5.0)
    }
}

impl ModelParams {
    /// Parameters with the given mean photon number, `n_max` sized by
    /// [`default_n_max`] and the remaining fields at the `fig2a` scenario values.
    pub fn with_mean_photons(mean_photons: f64) -> Self {
        Self {
            kappa_bar: 1.0,
            gamma_bar: 0.0,
            mean_photons,
            lambda: 1.0,
            p11: 0.8,
            q11: 0.5,
            bell_phase: std::f64::consts::FRAC_PI_6,
            n_max: default_n_max(mean_photons),
            tail_tol: DEFAULT_TAIL_TOL,
        }
    }

    pub fn p22(&self) -> f64 {
        1.0 - self.p11
    }

    pub fn q22(&self) -> f64 {
        1.0 - self.q11
    }

    /// Magnitude of the Bell amplitude, |a| = sqrt(q22/q11).
    pub fn bell_modulus(&self) -> f64 {
        (self.q22() / self.q11).sqrt()
    }

    /// Poisson weights p(0..=n_max).
    pub fn photon_weights(&self) -> Result<Vec<f64>> {
        poisson_weights(self.mean_photons, self.n_max)
    }

    /// Parses a flat `key = value` file. Keys are the field names; `#` starts a
    /// comment. Missing keys keep their defaults; `n_max` defaults from
    /// `mean_photons` when absent.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut p = Self::default();
        let mut n_max = None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Config {
                line: line_no,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Config { line: line_no, msg };
            if key == "n_max" {
                n_max = Some(
                    value
                        .parse::<usize>()
                        .map_err(|e| bad(format!("n_max: {e}")))?,
                );
                continue;
            }
            let x: f64 = value
                .parse()
                .map_err(|e| bad(format!("{key}: {e}")))?;
            match key {
                "kappa_bar" => p.kappa_bar = x,
                "gamma_bar" => p.gamma_bar = x,
                "mean_photons" => p.mean_photons = x,
                "lambda" => p.lambda = x,
                "p11" => p.p11 = x,
                "q11" => p.q11 = x,
                "bell_phase" => p.bell_phase = x,
                "tail_tol" => p.tail_tol = x,
                other => return Err(bad(format!("unknown key `{other}`"))),
            }
        }
        p.n_max = n_max.unwrap_or_else(|| default_n_max(p.mean_photons));
        Ok(p)
    }

    pub fn from_config_file(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_config_str(&std::fs::read_to_string(path)?)
    }

    /// Renders the parameters in the config-file format.
    pub fn to_config_string(&self) -> String {
        format!(
            "kappa_bar = {}\ngamma_bar = {}\nmean_photons = {}\nlambda = {}\np11 = {}\nq11 = {}\nbell_phase = {}\nn_max = {}\ntail_tol = {}\n",
            self.kappa_bar,
            self.gamma_bar,
            self.mean_photons,
            self.lambda,
            self.p11,
            self.q11,
            self.bell_phase,
            self.n_max,
            self.tail_tol
        )
    }
}

/// `ceil(N + 12 sqrt(N) + 20)`.
pub fn default_n_max(mean_photons: f64) -> usize {
    if !(mean_photons.is_finite() && mean_photons > 0.0) {
        return 1;
    }
    (mean_photons + 12.0 * mean_photons.sqrt() + 20.0).ceil() as usize
}

/// Poisson probability `N^n e^{-N} / n!`, evaluated in log space.
pub fn poisson_pmf(mean: f64, n: usize) -> Result<f64> {
    if !(mean.is_finite() && mean > 0.0) {
        return Err(Error::Domain(format!(
            "Poisson mean must be positive, got {mean}"
        )));
    }
    Ok(log_pmf(mean, n).exp())
}

fn log_pmf(mean: f64, n: usize) -> f64 {
    n as f64 * mean.ln() - mean - ln_factorial(n as u64)
}

pub fn poisson_weights(mean: f64, n_max: usize) -> Result<Vec<f64>> {
    (0..=n_max).map(|n| poisson_pmf(mean, n)).collect()
}

/// Mass of the Poisson distribution above `n_max`, summed directly.
pub fn poisson_tail(mean: f64, n_max: usize) -> Result<f64> {
    poisson_pmf(mean, 0)?;
    let mut tail = 0.0;
    let mut n = n_max + 1;
    loop {
        let term = log_pmf(mean, n).exp();
        tail += term;
        if (n as f64) > mean && (term < 1e-300 || term <= tail * 1e-17) {
            return Ok(tail);
        }
        n += 1;
    }
}

/// One failed condition from [`validate_params`].
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A field is outside its allowed range.
    Range { field: &'static str, value: f64, allowed: &'static str },
    /// `4κ̄²(n+1) − (γ̄/2)²` is not positive, so E(n+1) is undefined.
    RabiRadicand { n: usize, radicand: f64 },
    /// Too much Poisson mass is cut off by the truncation.
    PoissonTail { tail: f64, tol: f64 },
    /// The printed positivity inequality is negative at block `n`. Advisory only.
    PositivityInequality { n: usize, value: f64 },
    /// An initial 2×2 block has a negative eigenvalue.
    BlockNotPositive { n: usize, min_eigenvalue: f64 },
}

impl Violation {
    /// Advisory violations are reported but do not make the parameters invalid.
    pub fn is_advisory(&self) -> bool {
        matches!(self, Violation::PositivityInequality { .. })
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Range { field, value, allowed } => {
                write!(f, "{field} = {value} outside {allowed}")
            }
            Violation::RabiRadicand { n, radicand } => write!(
                f,
                "4 kappa_bar^2 ({n}+1) - (gamma_bar/2)^2 = {radicand} must be > 0"
            ),
            Violation::PoissonTail { tail, tol } => {
                write!(f, "Poisson tail beyond n_max is {tail:e} >= tail_tol {tol:e}")
            }
            Violation::PositivityInequality { n, value } => {
                write!(f, "advisory positivity inequality negative at n = {n}: {value}")
            }
            Violation::BlockNotPositive { n, min_eigenvalue } => {
                write!(f, "initial block {n} has eigenvalue {min_eigenvalue:e} < 0")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    /// True when no non-advisory violation is present.
    pub fn is_valid(&self) -> bool {
        self.violations.iter().all(Violation::is_advisory)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Violation> {
        self.violations.iter().filter(|v| !v.is_advisory())
    }

    pub fn into_result(self) -> Result<()> {
        if self.is_valid() {
            return Ok(());
        }
        let msg = self
            .errors()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join("; ");
        Err(Error::InvalidParams(msg))
    }
}

/// Checks every parameter condition and reports all failures.
///
/// Besides the field ranges this covers the Rabi radicand of the lowest block,
/// the Poisson tail, the printed positivity inequality (advisory) and a direct
/// eigenvalue check of every initial 2×2 block, which is the authoritative
/// positivity test.
pub fn validate_params(params: &ModelParams) -> ValidityReport {
    let mut violations = Vec::new();
    let mut range = |field, value: f64, ok: bool, allowed| {
        if !ok {
            violations.push(Violation::Range { field, value, allowed });
        }
    };
    let p = params;
    range("kappa_bar", p.kappa_bar, p.kappa_bar.is_finite() && p.kappa_bar > 0.0, "(0, inf)");
    range("gamma_bar", p.gamma_bar, p.gamma_bar.is_finite() && p.gamma_bar >= 0.0, "[0, inf)");
    range(
        "mean_photons",
        p.mean_photons,
        p.mean_photons.is_finite() && p.mean_photons > 0.0,
        "(0, inf)",
    );
    range("lambda", p.lambda, (0.0..=1.0).contains(&p.lambda), "[0, 1]");
    range("p11", p.p11, (0.0..=1.0).contains(&p.p11), "[0, 1]");
    range("q11", p.q11, p.q11 > 0.0 && p.q11 < 1.0, "(0, 1)");
    range("bell_phase", p.bell_phase, (0.0..TAU).contains(&p.bell_phase), "[0, 2pi)");
    range("n_max", p.n_max as f64, p.n_max >= 1, "[1, inf)");
    range("tail_tol", p.tail_tol, p.tail_tol > 0.0, "(0, inf)");
    if !violations.is_empty() {
        return ValidityReport { violations };
    }

    let radicand = 4.0 * p.kappa_bar * p.kappa_bar - 0.25 * p.gamma_bar * p.gamma_bar;
    if radicand <= 0.0 {
        violations.push(Violation::RabiRadicand { n: 0, radicand });
    }

    match poisson_tail(p.mean_photons, p.n_max) {
        Ok(tail) if tail >= p.tail_tol => {
            violations.push(Violation::PoissonTail { tail, tol: p.tail_tol })
        }
        _ => {}
    }

    if p.lambda != 0.0 && p.lambda != 1.0 {
        for n in 0..=p.n_max {
            let value = positivity_inequality(p, n);
            if value < 0.0 {
                violations.push(Violation::PositivityInequality { n, value });
            }
        }
    }

    if let Ok(initial) = state::initial_state_unchecked(p) {
        for n in 0..initial.n_blocks() {
            let min_eigenvalue = initial.block_eigenvalues(n).1;
            if min_eigenvalue < -PSD_TOL {
                violations.push(Violation::BlockNotPositive { n, min_eigenvalue });
            }
        }
    }

    ValidityReport { violations }
}

/// `λ[(n+1)p11 q22 + N p22 (q11 − p11)] + N p11 p22`, as printed.
pub fn positivity_inequality(p: &ModelParams, n: usize) -> f64 {
    let big_n = p.mean_photons;
    p.lambda * ((n as f64 + 1.0) * p.p11 * p.q22() + big_n * p.p22() * (p.q11 - p.p11))
        + big_n * p.p11 * p.p22()
}
