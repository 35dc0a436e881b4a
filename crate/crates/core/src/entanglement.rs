//! Concurrence lower bound from projections onto `{|n⟩, |n+1⟩}` photon windows.
//!
//! Each window leaves an X-shaped two-qubit matrix whose concurrence is known in
//! closed form. The weighted average over windows bounds the entanglement of
//! the full state from below; a positive value certifies entanglement.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::state::BlockState;

/// Windows with total weight below this are skipped.
pub const MIN_BLOCK_WEIGHT: f64 = 1e-14;

/// Unnormalized two-qubit projection of window `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectedBlock {
    /// `⟨n,2|ρ|n,2⟩`
    pub v: f64,
    /// `⟨n+1,2|ρ|n+1,2⟩`
    pub w: f64,
    /// `⟨n,1|ρ|n,1⟩`
    pub x: f64,
    /// `⟨n+1,1|ρ|n+1,1⟩`
    pub y: f64,
    /// `⟨n,1|ρ|n+1,2⟩`
    pub z: Complex64,
    /// Window weight `v + w + x + y`.
    pub t: f64,
}

pub fn project_block(state: &BlockState, n: usize) -> Result<ProjectedBlock> {
    if n >= state.n_blocks() {
        return Err(Error::Index { index: n, len: state.n_blocks() });
    }
    let (v, w, x, y) = (state.b[n], state.b[n + 1], state.a[n], state.a[n + 1]);
    Ok(ProjectedBlock { v, w, x, y, z: state.c[n], t: v + w + x + y })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ClbFormula {
    /// Two-branch expression with `min(|z|, sqrt(w x))`, clamped to [0, 1].
    #[default]
    TwoBranch,
    /// Standard X-state concurrence `2 max(0, |z| − sqrt(v y)) / t`.
    XState,
}

impl FromStr for ClbFormula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "two-branch" => Ok(Self::TwoBranch),
            "xstate" => Ok(Self::XState),
            other => Err(Error::Domain(format!(
                "unknown CLB formula `{other}` (expected two-branch or xstate)"
            ))),
        }
    }
}

impl fmt::Display for ClbFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::TwoBranch => "two-branch",
            Self::XState => "xstate",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClbOptions {
    pub formula: ClbFormula,
    /// Whether the `n = 0` window (which contains `|0,2⟩`) enters the average.
    pub include_n0: bool,
}

impl Default for ClbOptions {
    fn default() -> Self {
        Self { formula: ClbFormula::TwoBranch, include_n0: true }
    }
}

/// Concurrence of one window, branch by branch, clamped to [0, 1].
pub fn block_concurrence(blk: &ProjectedBlock) -> Result<f64> {
    block_concurrence_with(blk, ClbFormula::TwoBranch)
}

pub fn block_concurrence_with(blk: &ProjectedBlock, formula: ClbFormula) -> Result<f64> {
    if !(blk.t > 0.0) {
        return Err(Error::UndefinedBlock);
    }
    let z = blk.z.norm();
    let vy = (blk.v * blk.y).max(0.0).sqrt();
    let raw = match formula {
        ClbFormula::TwoBranch => {
            let wx = (blk.w * blk.x).max(0.0).sqrt();
            if wx >= z {
                2.0 / blk.t * (z - vy)
            } else {
                2.0 / blk.t * (wx - vy)
            }
        }
        ClbFormula::XState => 2.0 * (z - vy).max(0.0) / blk.t,
    };
    Ok(raw.clamp(0.0, 1.0))
}

pub fn concurrence_lower_bound(state: &BlockState) -> f64 {
    concurrence_lower_bound_with(state, &ClbOptions::default())
}

/// Weight-averaged window concurrence, summed in index order.
pub fn concurrence_lower_bound_with(state: &BlockState, opts: &ClbOptions) -> f64 {
    let first = if opts.include_n0 { 0 } else { 1 };
    let (mut num, mut den) = (0.0, 0.0);
    for n in first..state.n_blocks() {
        let Ok(blk) = project_block(state, n) else { continue };
        if blk.t < MIN_BLOCK_WEIGHT {
            continue;
        }
        if let Ok(c) = block_concurrence_with(&blk, opts.formula) {
            num += c * blk.t;
            den += blk.t;
        }
    }
    if den > 0.0 {
        (num / den).clamp(0.0, 1.0)
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{poisson_pmf, ModelParams};
    use crate::state::build_initial_state;
    use std::f64::consts::FRAC_PI_6;

    fn bell(mean: f64, p11: f64) -> BlockState {
        let p = ModelParams {
            lambda: 1.0,
            q11: 0.5,
            p11,
            bell_phase: FRAC_PI_6,
            ..ModelParams::with_mean_photons(mean)
        };
        build_initial_state(&p).unwrap()
    }

    #[test]
    fn vacuum_window_of_bell_state_is_empty_below() {
        let blk = project_block(&bell(5.0, 0.8), 0).unwrap();
        assert_eq!(blk.v, 0.0);
    }

    #[test]
    fn factored_windows_have_no_coherence() {
        let p = ModelParams { lambda: 0.0, ..ModelParams::default() };
        let s = build_initial_state(&p).unwrap();
        for n in 0..s.n_blocks() {
            let blk = project_block(&s, n).unwrap();
            assert_eq!(blk.z.norm(), 0.0);
            assert_eq!(block_concurrence(&blk).unwrap(), 0.0);
        }
        assert_eq!(concurrence_lower_bound(&s), 0.0);
    }

    #[test]
    fn window_weights_double_count_at_most() {
        let s = bell(5.0, 0.8);
        let total: f64 = (0..s.n_blocks()).map(|n| project_block(&s, n).unwrap().t).sum();
        assert!(total <= 2.0 * s.trace() + 1e-15);
    }

    #[test]
    fn project_block_range() {
        let s = bell(2.0, 0.5);
        assert!(project_block(&s, s.n_blocks() - 1).is_ok());
        assert!(matches!(project_block(&s, s.n_blocks()), Err(Error::Index { .. })));
    }

    #[test]
    fn hand_evaluated_window_at_two_photons() {
        // v = 0, w = x = p(0)/2, y = p(1)/2 = p(0), |z| = p(0)/2 → C = 1/2.
        let s = bell(2.0, 0.8);
        let blk = project_block(&s, 0).unwrap();
        let p0 = poisson_pmf(2.0, 0).unwrap();
        assert!((blk.w - 0.5 * p0).abs() < 1e-17);
        assert!((blk.x - 0.5 * p0).abs() < 1e-17);
        assert!((blk.y - p0).abs() < 1e-16);
        assert!((block_concurrence(&blk).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn maximally_entangled_window() {
        let blk = ProjectedBlock {
            v: 0.0,
            w: 0.5,
            x: 0.5,
            y: 0.0,
            z: Complex64::new(0.5, 0.0),
            t: 1.0,
        };
        assert_eq!(block_concurrence(&blk).unwrap(), 1.0);
        assert_eq!(block_concurrence_with(&blk, ClbFormula::XState).unwrap(), 1.0);
    }

    #[test]
    fn second_branch_and_clamp() {
        // |z| > sqrt(w x) only happens for non-positive input; the two-branch form uses sqrt(w x).
        let blk = ProjectedBlock {
            v: 0.01,
            w: 0.2,
            x: 0.2,
            y: 0.01,
            z: Complex64::new(0.0, 0.3),
            t: 0.42,
        };
        let two_branch = block_concurrence(&blk).unwrap();
        assert!((two_branch - 2.0 / 0.42 * (0.2 - 0.01)).abs() < 1e-15);
        let x = block_concurrence_with(&blk, ClbFormula::XState).unwrap();
        assert_eq!(x, 1.0);
        let zero = ProjectedBlock { t: 0.0, ..blk };
        assert!(matches!(block_concurrence(&zero), Err(Error::UndefinedBlock)));
    }

    #[test]
    fn clb_at_full_bell_weight_ignores_atomic_state() {
        let base = concurrence_lower_bound(&bell(5.0, 0.0));
        assert!(base > 0.0);
        for p11 in [0.5, 1.0] {
            assert!((concurrence_lower_bound(&bell(5.0, p11)) - base).abs() < 1e-12);
        }
    }

    #[test]
    fn clb_grows_with_lambda_above_threshold() {
        let clb = |lambda: f64| {
            let p = ModelParams { lambda, q11: 0.5, p11: 0.5, ..ModelParams::with_mean_photons(2.0) };
            concurrence_lower_bound(&build_initial_state(&p).unwrap())
        };
        let values: Vec<f64> = (80..=100).map(|k| clb(k as f64 / 100.0)).collect();
        assert!(values[0] > 0.0);
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn excluding_vacuum_window_changes_average() {
        let s = bell(2.0, 0.5);
        let with = concurrence_lower_bound(&s);
        let without = concurrence_lower_bound_with(&s, &ClbOptions { include_n0: false, ..Default::default() });
        assert!(with > 0.0 && without > 0.0);
        assert!((with - without).abs() > 1e-3);
    }

    #[test]
    fn formula_names_parse() {
        assert_eq!("two-branch".parse::<ClbFormula>().unwrap(), ClbFormula::TwoBranch);
        assert_eq!("xstate".parse::<ClbFormula>().unwrap(), ClbFormula::XState);
        assert!("wootters".parse::<ClbFormula>().is_err());
        assert_eq!(ClbFormula::XState.to_string(), "xstate");
    }
}
