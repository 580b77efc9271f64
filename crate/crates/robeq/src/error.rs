//! Error types shared across the library.

use thiserror::Error;

/// Errors raised while constructing or evaluating domain values.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    /// A parameter that must be finite was NaN or infinite.
    #[error("{name} must be finite, got {value}")]
    NonFinite { name: &'static str, value: f64 },

    /// A variance parameter was zero or negative.
    #[error("{name} must be > 0, got {value}")]
    NonPositiveVariance { name: &'static str, value: f64 },

    /// An uncertainty radius was negative.
    #[error("epsilon must be >= 0, got {value}")]
    NegativeRadius { value: f64 },

    /// A channel perturbation fell outside the uncertainty interval.
    #[error("|dh| = {dh} exceeds the uncertainty radius epsilon = {epsilon}")]
    PerturbationOutOfRange { dh: f64, epsilon: f64 },
}

/// Errors raised by the closed-form solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    /// The belief puts a candidate channel exactly at zero, so the case
    /// functions of the regret solver divide by zero.
    #[error("belief is singular: h_est = {h_est} equals +/-epsilon = {epsilon}")]
    SingularBelief { h_est: f64, epsilon: f64 },

    /// The constrained 1-D search of the regret solver did not bracket an
    /// interior minimum.
    #[error("constrained regret solve failed: {reason}")]
    Case4SolveFailure { reason: String },

    /// The zero-mean fast path was called with a nonzero-mean signal.
    #[error("fast path requires mean_x = 0, got {mean_x}")]
    NonZeroMean { mean_x: f64 },
}

/// Errors raised by the brute-force oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    /// A grid specification violated its invariants.
    #[error("invalid grid spec: {reason}")]
    InvalidGrid { reason: String },

    /// The refined incumbent sits on the search-box boundary, so the box
    /// did not bracket the optimum.
    #[error("search box [{w_lo}, {w_hi}] x [{l_lo}, {l_hi}] does not bracket the optimum (incumbent w = {w}, l = {l})")]
    BracketTooNarrow {
        w_lo: f64,
        w_hi: f64,
        l_lo: f64,
        l_hi: f64,
        w: f64,
        l: f64,
    },
}

/// Errors raised by the simulation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    /// The simulation configuration violated an invariant.
    #[error("invalid simulation config: {reason}")]
    InvalidConfig { reason: String },

    /// A model parameter in the configuration was rejected.
    #[error("invalid simulation config: {0}")]
    Model(#[from] ModelError),

    /// A solver failed inside a trial.
    #[error("trial {trial}: {source}")]
    Trial { trial: usize, source: SolveError },
}
