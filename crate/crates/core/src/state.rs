//! Block representation of the density matrix and the entangled initial state.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::params::{validate_params, ModelParams};

/// Density matrix as a direct sum of 2×2 blocks.
///
/// Block `n` lives on `{|n,1⟩, |n+1,2⟩}` and reads `[[a[n], c[n]], [c[n]*, b[n+1]]]`.
/// `b[0]` is the unpaired `|0,2⟩` population. With a Fock cutoff, `a[n_max]`
/// has no partner inside the truncated space and is likewise unpaired.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockState {
    /// `⟨n|ρ11|n⟩` for n = 0..=n_max.
    pub a: Vec<f64>,
    /// `⟨n|ρ22|n⟩` for n = 0..=n_max.
    pub b: Vec<f64>,
    /// `⟨n|ρ12|n+1⟩` for n = 0..n_max.
    pub c: Vec<Complex64>,
}

impl BlockState {
    pub fn new(a: Vec<f64>, b: Vec<f64>, c: Vec<Complex64>) -> Result<Self> {
        if a.len() < 2 {
            return Err(Error::Dimension { expected: 2, found: a.len() });
        }
        if b.len() != a.len() {
            return Err(Error::Dimension { expected: a.len(), found: b.len() });
        }
        if c.len() + 1 != a.len() {
            return Err(Error::Dimension { expected: a.len() - 1, found: c.len() });
        }
        Ok(Self { a, b, c })
    }

    pub fn n_max(&self) -> usize {
        self.a.len() - 1
    }

    /// Number of paired 2×2 blocks, equal to `n_max`.
    pub fn n_blocks(&self) -> usize {
        self.c.len()
    }

    /// `(a[n], c[n], b[n+1])`.
    #[inline]
    pub fn block(&self, n: usize) -> (f64, Complex64, f64) {
        (self.a[n], self.c[n], self.b[n + 1])
    }

    /// Eigenvalues `(larger, smaller)` of block `n`.
    pub fn block_eigenvalues(&self, n: usize) -> (f64, f64) {
        let (a, c, b) = self.block(n);
        let half_sum = 0.5 * (a + b);
        let d = 0.5 * (a - b).hypot(2.0 * c.norm());
        (half_sum + d, half_sum - d)
    }

    /// Smallest eigenvalue over all blocks and unpaired levels.
    pub fn min_eigenvalue(&self) -> f64 {
        (0..self.n_blocks())
            .map(|n| self.block_eigenvalues(n).1)
            .fold(self.b[0].min(self.a[self.n_max()]), f64::min)
    }

    pub fn trace(&self) -> f64 {
        self.a.iter().sum::<f64>() + self.b.iter().sum::<f64>()
    }

    pub fn is_positive(&self, tol: f64) -> bool {
        self.min_eigenvalue() >= -tol
    }
}

/// Initial state of the λ-mixture of the factored and Bell pieces, after validation.
pub fn build_initial_state(params: &ModelParams) -> Result<BlockState> {
    validate_params(params).into_result()?;
    initial_state_unchecked(params)
}

/// Same as [`build_initial_state`] without the validation pass.
pub(crate) fn initial_state_unchecked(params: &ModelParams) -> Result<BlockState> {
    let p = params.photon_weights()?;
    let lam = params.lambda;
    let n_max = params.n_max;
    let ground = (1.0 - lam) * params.p11 + lam * params.q11;
    let excited = (1.0 - lam) * params.p22();
    let bell_excited = lam * params.q22();
    let coherence = Complex64::from_polar(
        lam * (params.q11 * params.q22()).sqrt(),
        -params.bell_phase,
    );

    let a = p.iter().map(|&pn| ground * pn).collect();
    let mut b = Vec::with_capacity(n_max + 1);
    b.push(excited * p[0]);
    b.extend((0..n_max).map(|n| excited * p[n + 1] + bell_excited * p[n]));
    let c = p[..n_max].iter().map(|&pn| coherence * pn).collect();
    BlockState::new(a, b, c)
}
