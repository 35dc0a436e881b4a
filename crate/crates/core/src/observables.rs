//! Marginal distributions, atomic inversion and entropy functionals (in nats).

use crate::evolution::SpectralDecomposition;
use crate::state::BlockState;

/// Diagonal reduced states of radiation and atom.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals {
    /// Photon-number distribution P(n), n = 0..=n_max.
    pub radiation: Vec<f64>,
    /// Ground-state weight w(1).
    pub w1: f64,
    /// Excited-state weight w(2).
    pub w2: f64,
}

pub fn reduced_states(state: &BlockState) -> Marginals {
    Marginals {
        radiation: state.a.iter().zip(&state.b).map(|(a, b)| a + b).collect(),
        w1: state.a.iter().sum(),
        w2: state.b.iter().sum(),
    }
}

/// `w(1) − w(2)`.
pub fn atomic_inversion(state: &BlockState) -> f64 {
    let m = reduced_states(state);
    m.w1 - m.w2
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyReport {
    pub s_atom: f64,
    pub s_rad: f64,
    pub s_joint: f64,
    /// Entropy with all block coherences dropped.
    pub s_decohered: f64,
    /// Quantum deficit `s_decohered − s_joint`.
    pub deficit: f64,
    /// `S(A|R) = s_joint − s_atom`.
    pub rel_atom: f64,
    /// `S(R|A) = s_joint − s_rad`; negative values mark supercorrelation.
    pub rel_rad: f64,
    /// `S(A:R) = s_atom + s_rad − s_joint`.
    pub mutual: f64,
    pub inversion: f64,
}

/// `x ln x` with `0 ln 0 = 0`; weights below 1e-300 contribute nothing.
#[inline]
pub fn x_ln_x(x: f64) -> f64 {
    if x < 1e-300 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Shannon/von Neumann entropy of a list of weights or eigenvalues.
pub fn entropy<I: IntoIterator<Item = f64>>(weights: I) -> f64 {
    -weights.into_iter().map(x_ln_x).sum::<f64>()
}

pub fn entropy_report(state: &BlockState, decomp: &SpectralDecomposition) -> EntropyReport {
    let m = reduced_states(state);
    let s_atom = entropy([m.w1, m.w2]);
    let s_rad = entropy(m.radiation.iter().copied());
    let s_joint = entropy(decomp.eigenvalues());
    let s_decohered = entropy(state.a.iter().chain(&state.b).copied());
    EntropyReport {
        s_atom,
        s_rad,
        s_joint,
        s_decohered,
        deficit: s_decohered - s_joint,
        rel_atom: s_joint - s_atom,
        rel_rad: s_joint - s_rad,
        mutual: s_atom + s_rad - s_joint,
        inversion: m.w1 - m.w2,
    }
}
