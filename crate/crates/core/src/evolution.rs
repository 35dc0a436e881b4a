//! Closed-form evolution of the block state and its per-block spectral form.
//!
//! Within block `n` the dynamics is a rotation about the Bloch x-axis at
//! frequency `2κ̄√(n+1)` whose coherence is dephased at rate `γ̄`. The
//! populations and the imaginary part of the coherence oscillate together at the
//! damped frequency `E(n+1)`; the real part of the coherence only decays.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::state::BlockState;

/// Damped Rabi frequency `E(n+1) = sqrt(4κ̄²(n+1) − (γ̄/2)²)` of block `n`.
pub fn rabi_frequency(params: &ModelParams, n: usize) -> Result<f64> {
    let radicand = 4.0 * params.kappa_bar * params.kappa_bar * (n as f64 + 1.0)
        - 0.25 * params.gamma_bar * params.gamma_bar;
    if !(radicand > 0.0) {
        return Err(Error::Domain(format!(
            "Rabi radicand for block {n} is {radicand}, must be > 0"
        )));
    }
    Ok(radicand.sqrt())
}

/// Trigonometric envelopes of block `n` at time τ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Envelopes {
    /// `cos Eτ + (γ̄/2) V`
    pub w_plus: f64,
    /// `cos Eτ − (γ̄/2) V`
    pub w_minus: f64,
    /// `sin Eτ / E`
    pub v: f64,
}

pub fn envelopes(params: &ModelParams, n: usize, tau: f64) -> Result<Envelopes> {
    let e = rabi_frequency(params, n)?;
    Ok(envelopes_at(e, params.gamma_bar, tau))
}

#[inline]
fn envelopes_at(e: f64, gamma_bar: f64, tau: f64) -> Envelopes {
    let (sin, cos) = (e * tau).sin_cos();
    let v = sin / e;
    Envelopes {
        w_plus: cos + 0.5 * gamma_bar * v,
        w_minus: cos - 0.5 * gamma_bar * v,
        v,
    }
}

/// Evolves `initial` by τ in closed form.
///
/// The `sin φ · |c|` terms of the factored/Bell solution are evaluated as
/// `−Im c[n]`, which is the same number for the initial state and keeps the
/// map valid for any block state, so that `propagate` composes as a semigroup.
/// `b[0]` and the unpaired top level `a[n_max]` are constant.
pub fn propagate(initial: &BlockState, params: &ModelParams, tau: f64) -> Result<BlockState> {
    if !(tau >= 0.0) {
        return Err(Error::Domain(format!("time must be >= 0, got {tau}")));
    }
    let mut out = initial.clone();
    let gamma = params.gamma_bar;
    let decay = (-0.5 * gamma * tau).exp();
    for n in 0..initial.n_blocks() {
        let (a, c, b) = initial.block(n);
        let g = params.kappa_bar * (n as f64 + 1.0).sqrt();
        let env = envelopes_at(rabi_frequency(params, n)?, gamma, tau);
        let m = -c.im;
        let rot = decay * env.w_plus;
        let drive = 2.0 * g * m * decay * env.v;
        out.a[n] = 0.5 * a * (1.0 + rot) + 0.5 * b * (1.0 - rot) + drive;
        out.b[n + 1] = 0.5 * b * (1.0 + rot) + 0.5 * a * (1.0 - rot) - drive;
        out.c[n] = decay * decay * c
            + Complex64::i() * (m * decay * (decay - env.w_minus) - g * (b - a) * decay * env.v);
    }
    Ok(out)
}

/// Long-time limit for γ̄ > 0: each block's populations equalize and coherences vanish.
pub fn asymptotic_state(initial: &BlockState, params: &ModelParams) -> Result<BlockState> {
    if !(params.gamma_bar > 0.0) {
        return Err(Error::Domain(
            "asymptotic state requires gamma_bar > 0".to_string(),
        ));
    }
    let mut out = initial.clone();
    for n in 0..initial.n_blocks() {
        let mean = 0.5 * (initial.a[n] + initial.b[n + 1]);
        out.a[n] = mean;
        out.b[n + 1] = mean;
        out.c[n] = Complex64::new(0.0, 0.0);
    }
    Ok(out)
}

/// Eigenvalues and mixing angles of every block.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDecomposition {
    pub lam_a: Vec<f64>,
    pub lam_b: Vec<f64>,
    pub theta: Vec<f64>,
    pub psi: Vec<f64>,
    /// Unpaired `|0,2⟩` eigenvalue.
    pub b0: f64,
    /// Unpaired `|n_max,1⟩` eigenvalue of the truncated space.
    pub a_top: f64,
}

impl SpectralDecomposition {
    /// All eigenvalues of the state, unpaired ones first.
    pub fn eigenvalues(&self) -> impl Iterator<Item = f64> + '_ {
        [self.b0, self.a_top]
            .into_iter()
            .chain(self.lam_a.iter().copied())
            .chain(self.lam_b.iter().copied())
    }

    pub fn trace(&self) -> f64 {
        self.eigenvalues().sum()
    }

    /// Eigenvectors `(φ_a, φ_b)` of block `n` as coefficients on `(|n,1⟩, |n+1,2⟩)`.
    pub fn eigenvectors(&self, n: usize) -> ([Complex64; 2], [Complex64; 2]) {
        let (s, c) = self.theta[n].sin_cos();
        let phase = Complex64::from_polar(1.0, self.psi[n]);
        (
            [Complex64::new(c, 0.0), -phase.conj() * s],
            [phase * s, Complex64::new(c, 0.0)],
        )
    }
}

pub fn spectral_decompose(state: &BlockState) -> SpectralDecomposition {
    let blocks = state.n_blocks();
    let mut out = SpectralDecomposition {
        lam_a: Vec::with_capacity(blocks),
        lam_b: Vec::with_capacity(blocks),
        theta: Vec::with_capacity(blocks),
        psi: Vec::with_capacity(blocks),
        b0: state.b[0],
        a_top: state.a[state.n_max()],
    };
    for n in 0..blocks {
        let (a, c, b) = state.block(n);
        let (hi, lo) = state.block_eigenvalues(n);
        let modulus = c.norm();
        let (theta, psi) = if modulus == 0.0 {
            // already diagonal; a < b would need a swap, expressed as θ = -π/2
            if a >= b {
                (0.0, 0.0)
            } else {
                (-std::f64::consts::FRAC_PI_2, 0.0)
            }
        } else {
            (0.5 * (-2.0 * modulus).atan2(a - b), c.im.atan2(c.re))
        };
        out.lam_a.push(hi);
        out.lam_b.push(lo);
        out.theta.push(theta);
        out.psi.push(psi);
    }
    out
}
