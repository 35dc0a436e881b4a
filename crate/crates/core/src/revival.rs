//! Poisson-sum asymptotics of the undamped atomic inversion.
//!
//! The inversion is split into a constant, an initial collapse (`ν = 0`) with a
//! Gaussian envelope `exp(−(κ̄τ)²/2)`, and revival packets centered on
//! `τ_ν = 2πν√N/κ̄`. This is a diagnostic overlay for the exact inversion.

use std::f64::consts::{FRAC_PI_4, PI};

use crate::error::{Error, Result};
use crate::params::{poisson_pmf, ModelParams};

/// Revival contributions whose Gaussian factor is below this are skipped.
pub const ENVELOPE_CUTOFF: f64 = 1e-16;

pub const DEFAULT_NU_MAX: usize = 5;

/// `τ_ν = 2πν√N/κ̄` for ν = 1..=nu_max.
pub fn revival_times(params: &ModelParams, nu_max: usize) -> Vec<f64> {
    let spacing = 2.0 * PI * params.mean_photons.sqrt() / params.kappa_bar;
    (1..=nu_max).map(|nu| nu as f64 * spacing).collect()
}

/// Coefficients of the asymptotic series for one parameter set.
#[derive(Clone, Debug, PartialEq)]
pub struct RevivalSeries {
    /// `−(1−λ) p22 p(0) / 2`
    pub constant_term: f64,
    /// Revival centers τ_1..τ_{ν_max}.
    pub tau_rev: Vec<f64>,
    kappa_bar: f64,
    mean_photons: f64,
    // collapse coefficients
    cos_amp: f64,
    factored_sin_amp: f64,
    bell_sin_amp: f64,
    phase_amp: f64,
    // revival coefficients
    grow_amp: f64,
    flat_amp: f64,
}

impl RevivalSeries {
    pub fn new(params: &ModelParams, nu_max: usize) -> Result<Self> {
        if params.gamma_bar != 0.0 {
            return Err(Error::Domain(format!(
                "Poisson-sum inversion is derived for gamma_bar = 0, got {}",
                params.gamma_bar
            )));
        }
        if nu_max < 1 {
            return Err(Error::Domain("nu_max must be >= 1".to_string()));
        }
        let lam = params.lambda;
        let (p11, p22) = (params.p11, params.p22());
        let (q11, q22) = (params.q11, params.q22());
        let bell_sin = 2.0 * lam * (q11 * q22).sqrt() * params.bell_phase.sin();
        Ok(Self {
            constant_term: -0.5 * (1.0 - lam) * p22 * poisson_pmf(params.mean_photons, 0)?,
            tau_rev: revival_times(params, nu_max),
            kappa_bar: params.kappa_bar,
            mean_photons: params.mean_photons,
            cos_amp: (1.0 - lam) * (p11 - p22) + lam * (q11 - q22),
            factored_sin_amp: (1.0 - lam) * (3.0 * p11 - p22),
            bell_sin_amp: 1.5 * lam * (q11 - q22),
            phase_amp: bell_sin,
            grow_amp: (1.0 - lam) * p11 + lam * (q11 - q22),
            flat_amp: (1.0 - lam) * p22,
        })
    }

    pub fn nu_max(&self) -> usize {
        self.tau_rev.len()
    }

    /// Initial peak and collapse, `Δw₀(τ)`.
    pub fn collapse_term(&self, tau: f64) -> f64 {
        let kt = self.kappa_bar * tau;
        let root_n = self.mean_photons.sqrt();
        let (sin, cos) = (2.0 * kt * root_n).sin_cos();
        let ramp = kt * sin / (2.0 * root_n);
        (self.cos_amp * cos - self.factored_sin_amp * ramp - self.bell_sin_amp * ramp
            + self.phase_amp * sin)
            * (-0.5 * kt * kt).exp()
    }

    /// Revival packet `Δw_ν(τ)` for `1 <= nu <= nu_max`.
    pub fn revival_term(&self, nu: usize, tau: f64) -> f64 {
        let tau_nu = self.tau_rev[nu - 1];
        let nu_f = nu as f64;
        let k = self.kappa_bar;
        let gauss = (-(k * k) / (2.0 * PI * PI * nu_f * nu_f) * (tau - tau_nu).powi(2)).exp();
        if gauss < ENVELOPE_CUTOFF {
            return 0.0;
        }
        let prefactor = k * tau / (2.0 * PI * nu_f.powf(1.5)) * gauss / (PI * self.mean_photons).sqrt();
        let ratio2 = (tau / tau_nu).powi(2);
        let (sin, cos) = (k * k * tau * tau / (2.0 * PI * nu_f) - FRAC_PI_4).sin_cos();
        prefactor
            * ((self.grow_amp * ratio2 - self.flat_amp) * cos + self.phase_amp * ratio2 * sin)
    }

    /// Sum of all revival packets.
    pub fn revivals(&self, tau: f64) -> f64 {
        (1..=self.nu_max()).map(|nu| self.revival_term(nu, tau)).sum()
    }

    pub fn inversion(&self, tau: f64) -> f64 {
        self.constant_term + self.collapse_term(tau) + self.revivals(tau)
    }
}

/// Asymptotic inversion at τ with revivals up to `nu_max`.
pub fn poisson_sum_inversion(params: &ModelParams, tau: f64, nu_max: usize) -> Result<f64> {
    Ok(RevivalSeries::new(params, nu_max)?.inversion(tau))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_6};

    fn n20(lambda: f64, p11: f64) -> ModelParams {
        ModelParams { lambda, p11, q11: 0.5, bell_phase: FRAC_PI_6, ..ModelParams::with_mean_photons(20.0) }
    }

    #[test]
    fn revival_times_are_evenly_spaced() {
        let t = revival_times(&n20(0.0, 0.8), 4);
        assert_eq!(t.len(), 4);
        assert!((t[0] - 2.0 * PI * 20f64.sqrt()).abs() < 1e-12);
        assert!((t[0] - 28.10).abs() < 5e-3);
        let spacing = t[0];
        for w in t.windows(2) {
            assert!((w[1] - w[0] - spacing).abs() < 1e-12);
        }
    }

    #[test]
    fn initial_value() {
        for (lam, p11) in [(0.0, 0.8), (0.3, 0.2), (1.0, 0.5)] {
            let p = ModelParams { q11: 0.7, ..n20(lam, p11) };
            let s = RevivalSeries::new(&p, DEFAULT_NU_MAX).unwrap();
            let want = s.constant_term
                + (1.0 - lam) * (p11 - p.p22())
                + lam * (p.q11 - p.q22());
            assert!((s.inversion(0.0) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn excited_atom_reduces_to_classic_series() {
        // λ = 0, p11 = 0: collapse ∝ cos − τ-ramp, revivals carry only the −p22 term.
        let p = n20(0.0, 0.0);
        let s = RevivalSeries::new(&p, 3).unwrap();
        let tau = s.tau_rev[0];
        let gauss_peak = tau / (2.0 * PI) / (PI * 20.0f64).sqrt();
        let phase = tau * tau / (2.0 * PI) - FRAC_PI_4;
        assert!((s.revival_term(1, tau) + gauss_peak * phase.cos()).abs() < 1e-14);
    }

    #[test]
    fn phase_term_drives_symmetric_bell_revivals() {
        let flat = RevivalSeries::new(&ModelParams { bell_phase: 0.0, ..n20(1.0, 0.8) }, 2).unwrap();
        let tilted = RevivalSeries::new(&ModelParams { bell_phase: FRAC_PI_2, ..n20(1.0, 0.8) }, 2).unwrap();
        let grid: Vec<f64> = (0..2000).map(|k| 14.0 + k as f64 * 0.014).collect();
        let peak = |s: &RevivalSeries| grid.iter().map(|&t| s.revivals(t).abs()).fold(0.0, f64::max);
        assert_eq!(peak(&flat), 0.0);
        assert!(peak(&tilted) > 0.1);
    }

    #[test]
    fn damped_or_empty_series_rejected() {
        let p = ModelParams { gamma_bar: 0.01, ..n20(0.0, 0.8) };
        assert!(poisson_sum_inversion(&p, 1.0, 5).is_err());
        assert!(poisson_sum_inversion(&n20(0.0, 0.8), 1.0, 0).is_err());
    }

    #[test]
    fn far_packets_are_cut() {
        let s = RevivalSeries::new(&n20(0.0, 0.8), 5).unwrap();
        assert_eq!(s.revival_term(1, 200.0), 0.0);
    }
}
