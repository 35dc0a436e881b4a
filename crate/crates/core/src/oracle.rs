//! Brute-force Lindblad integrator on the dense truncated density matrix.
//!
//! Nothing here uses the block structure: the state is the full
//! `2(n_max+1) × 2(n_max+1)` matrix in the basis `|n,i⟩ ↦ 2n + (i − 1)`, and
//! fixed-step RK4 integrates `dρ/dτ = −i[H, ρ] + (γ̄/2)(σz ρ σz − ρ)`.
//! Agreement with [`crate::evolution::propagate`] certifies the closed form.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::rabi_frequency;
use crate::params::ModelParams;
use crate::state::BlockState;

pub const DEFAULT_DT: f64 = 1e-3;

/// Index of `|n, i⟩` (i = 1 ground, 2 excited) in the dense basis.
#[inline]
pub fn basis_index(n: usize, level: usize) -> usize {
    debug_assert!(level == 1 || level == 2);
    2 * n + (level - 1)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    pub rho: DMatrix<Complex64>,
}

impl DenseState {
    pub fn zeros(n_max: usize) -> Self {
        let dim = 2 * (n_max + 1);
        Self { rho: DMatrix::zeros(dim, dim) }
    }

    pub fn from_block(state: &BlockState) -> Self {
        let mut out = Self::zeros(state.n_max());
        for n in 0..=state.n_max() {
            out.rho[(basis_index(n, 1), basis_index(n, 1))] = state.a[n].into();
            out.rho[(basis_index(n, 2), basis_index(n, 2))] = state.b[n].into();
        }
        for n in 0..state.n_blocks() {
            let (i, j) = (basis_index(n, 1), basis_index(n + 1, 2));
            out.rho[(i, j)] = state.c[n];
            out.rho[(j, i)] = state.c[n].conj();
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }

    pub fn n_max(&self) -> usize {
        self.dim() / 2 - 1
    }

    pub fn trace(&self) -> Complex64 {
        self.rho.trace()
    }

    /// Largest `|ρ − ρ†|` element.
    pub fn hermiticity_error(&self) -> f64 {
        let d = &self.rho - self.rho.adjoint();
        d.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn hermitize(&mut self) {
        self.rho = (&self.rho + self.rho.adjoint()) * Complex64::new(0.5, 0.0);
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let mut h = self.clone();
        h.hermitize();
        h.rho
            .symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Sparse generator of the master equation for one parameter set.
#[derive(Clone, Debug)]
pub struct Lindbladian {
    dim: usize,
    /// `(|n,1⟩, |n+1,2⟩, κ̄√(n+1))`
    couplings: Vec<(usize, usize, f64)>,
    /// σz eigenvalue per basis state, +1 excited, −1 ground.
    sigma_z: Vec<f64>,
    gamma_bar: f64,
}

impl Lindbladian {
    pub fn new(params: &ModelParams) -> Self {
        let n_max = params.n_max;
        let couplings = (0..n_max)
            .map(|n| {
                (
                    basis_index(n, 1),
                    basis_index(n + 1, 2),
                    params.kappa_bar * (n as f64 + 1.0).sqrt(),
                )
            })
            .collect();
        let sigma_z = (0..2 * (n_max + 1))
            .map(|k| if k % 2 == 0 { -1.0 } else { 1.0 })
            .collect();
        Self { dim: 2 * (n_max + 1), couplings, sigma_z, gamma_bar: params.gamma_bar }
    }

    /// Writes `dρ/dτ` into `out`.
    pub fn apply(&self, rho: &DMatrix<Complex64>, out: &mut DMatrix<Complex64>) {
        let half_gamma = 0.5 * self.gamma_bar;
        for j in 0..self.dim {
            for i in 0..self.dim {
                let factor = half_gamma * (self.sigma_z[i] * self.sigma_z[j] - 1.0);
                out[(i, j)] = rho[(i, j)] * factor;
            }
        }
        let minus_i = Complex64::new(0.0, -1.0);
        for &(p, q, g) in &self.couplings {
            let mg = minus_i * g;
            // −i H ρ: H mixes rows p and q
            for j in 0..self.dim {
                let (rp, rq) = (rho[(p, j)], rho[(q, j)]);
                out[(p, j)] += mg * rq;
                out[(q, j)] += mg * rp;
            }
            // +i ρ H: H mixes columns p and q
            for i in 0..self.dim {
                let (cp, cq) = (rho[(i, p)], rho[(i, q)]);
                out[(i, q)] -= mg * cp;
                out[(i, p)] -= mg * cq;
            }
        }
    }
}

/// Time derivative of `state` under the master equation.
pub fn lindblad_rhs(state: &DenseState, params: &ModelParams) -> Result<DenseState> {
    if state.dim() != 2 * (params.n_max + 1) {
        return Err(Error::Dimension { expected: 2 * (params.n_max + 1), found: state.dim() });
    }
    let mut out = DenseState::zeros(params.n_max);
    Lindbladian::new(params).apply(&state.rho, &mut out.rho);
    Ok(out)
}

/// Classical RK4 with scratch buffers reused across steps.
struct Rk4 {
    generator: Lindbladian,
    k: [DMatrix<Complex64>; 4],
    tmp: DMatrix<Complex64>,
}

impl Rk4 {
    fn new(generator: Lindbladian) -> Self {
        let z = DMatrix::zeros(generator.dim, generator.dim);
        Self { generator, k: [z.clone(), z.clone(), z.clone(), z.clone()], tmp: z }
    }

    fn step(&mut self, rho: &mut DMatrix<Complex64>, dt: f64) {
        let half = Complex64::from(0.5 * dt);
        let full = Complex64::from(dt);
        let [k1, k2, k3, k4] = &mut self.k;
        self.generator.apply(rho, k1);
        self.tmp.copy_from(rho);
        axpy(&mut self.tmp, half, k1);
        self.generator.apply(&self.tmp, k2);
        self.tmp.copy_from(rho);
        axpy(&mut self.tmp, half, k2);
        self.generator.apply(&self.tmp, k3);
        self.tmp.copy_from(rho);
        axpy(&mut self.tmp, full, k3);
        self.generator.apply(&self.tmp, k4);
        let sixth = Complex64::from(dt / 6.0);
        let third = Complex64::from(dt / 3.0);
        axpy(rho, sixth, k1);
        axpy(rho, third, k2);
        axpy(rho, third, k3);
        axpy(rho, sixth, k4);
    }

    /// Advances by `span` in steps of `dt`, shortening the last one.
    fn advance(&mut self, rho: &mut DMatrix<Complex64>, span: f64, dt: f64) {
        if span <= 0.0 {
            return;
        }
        let full_steps = (span / dt).floor() as usize;
        for _ in 0..full_steps {
            self.step(rho, dt);
        }
        let rest = span - full_steps as f64 * dt;
        if rest > dt * 1e-9 {
            self.step(rho, rest);
        }
    }
}

/// `dst += alpha * x`, elementwise.
fn axpy(dst: &mut DMatrix<Complex64>, alpha: Complex64, x: &DMatrix<Complex64>) {
    for (d, &v) in dst.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *d += alpha * v;
    }
}

fn check_step(params: &ModelParams, dt: f64) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    let limit = 0.1 / rabi_frequency(params, params.n_max.saturating_sub(1))?;
    if dt > limit {
        return Err(Error::StepSize { dt, limit });
    }
    Ok(())
}

/// Integrates from τ = 0 to `tau_end` with fixed-step RK4, then re-Hermitizes.
pub fn integrate(
    initial: &DenseState,
    params: &ModelParams,
    tau_end: f64,
    dt: f64,
) -> Result<DenseState> {
    Ok(integrate_samples(initial, params, &[tau_end], dt)?.pop().expect("one sample"))
}

/// States at each of the nondecreasing `times`, from one continuous integration.
pub fn integrate_samples(
    initial: &DenseState,
    params: &ModelParams,
    times: &[f64],
    dt: f64,
) -> Result<Vec<DenseState>> {
    check_step(params, dt)?;
    if initial.dim() != 2 * (params.n_max + 1) {
        return Err(Error::Dimension { expected: 2 * (params.n_max + 1), found: initial.dim() });
    }
    let mut rk4 = Rk4::new(Lindbladian::new(params));
    let mut rho = initial.rho.clone();
    let mut now = 0.0;
    let mut out = Vec::with_capacity(times.len());
    for &t in times {
        if !(t >= now) {
            return Err(Error::Domain(format!("sample times must be >= 0 and nondecreasing, got {t}")));
        }
        rk4.advance(&mut rho, t - now, dt);
        now = t;
        let mut sample = DenseState { rho: rho.clone() };
        sample.hermitize();
        out.push(sample);
    }
    Ok(out)
}

/// Per-class maxima of `|dense − embed(block)|`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Deviation {
    pub max: f64,
    /// Ground populations `⟨n,1|ρ|n,1⟩`.
    pub a: f64,
    /// Excited populations `⟨n,2|ρ|n,2⟩`.
    pub b: f64,
    /// Block coherences and their conjugates.
    pub c: f64,
    /// Every other element, zero for an exact block state.
    pub off_block: f64,
}

pub fn compare_states(dense: &DenseState, block: &BlockState) -> Result<Deviation> {
    let dim = 2 * (block.n_max() + 1);
    if dense.dim() != dim {
        return Err(Error::Dimension { expected: dim, found: dense.dim() });
    }
    let embedded = DenseState::from_block(block);
    let mut dev = Deviation::default();
    for j in 0..dim {
        for i in 0..dim {
            let d = (dense.rho[(i, j)] - embedded.rho[(i, j)]).norm();
            let slot = match (i % 2, j % 2) {
                _ if i == j && i % 2 == 0 => &mut dev.a,
                _ if i == j => &mut dev.b,
                (0, 1) if j == i + 3 => &mut dev.c,
                (1, 0) if i == j + 3 => &mut dev.c,
                _ => &mut dev.off_block,
            };
            *slot = slot.max(d);
        }
    }
    dev.max = dev.a.max(dev.b).max(dev.c).max(dev.off_block);
    Ok(dev)
}
