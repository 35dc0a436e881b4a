//! Exact phase-damped Jaynes-Cummings dynamics for entangled mixed initial states.
//!
//! The density matrix of the resonant model with σz dephasing stays a direct sum of
//! 2×2 blocks on `{|n,1⟩, |n+1,2⟩}` plus the unpaired `|0,2⟩` level. Everything in
//! this crate works on that block representation ([`BlockState`]) except the
//! [`oracle`] module, which integrates the master equation on the full dense matrix
//! and is used to certify the closed form.
//!
//! Layout:
//!
//! - [`params`]: model parameters, Poisson weights and validation
//! - [`state`]: the block density matrix and the entangled initial state
//! - [`evolution`]: closed-form propagation, asymptotics, per-block spectra
//! - [`observables`]: marginals, inversion and the entropy functionals
//! - [`entanglement`]: concurrence lower bound from local 2×2 projections
//! - [`revival`]: Poisson-sum asymptotics of the undamped inversion
//! - [`oracle`]: dense RK4 Lindblad integrator
//! - [`scenario`]: figure catalog, time series and CSV output

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod entanglement;
pub mod error;
pub mod evolution;
pub mod observables;
pub mod oracle;
pub mod par;
pub mod params;
pub mod revival;
pub mod scenario;
pub mod state;

pub use entanglement::{
    block_concurrence, concurrence_lower_bound, concurrence_lower_bound_with, project_block,
    ClbFormula, ClbOptions, ProjectedBlock,
};
pub use error::{Error, Result};
pub use evolution::{
    asymptotic_state, envelopes, propagate, rabi_frequency, spectral_decompose, Envelopes,
    SpectralDecomposition,
};
pub use observables::{atomic_inversion, entropy_report, reduced_states, EntropyReport, Marginals};
pub use params::{poisson_pmf, validate_params, ModelParams, ValidityReport, Violation};
pub use revival::{poisson_sum_inversion, revival_times, RevivalSeries};
pub use state::{build_initial_state, BlockState};
