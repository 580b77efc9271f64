//! Robust affine equalization for a scalar channel with interval gain
//! uncertainty.
//!
//! Given second-order signal statistics, a channel gain estimate and a
//! bound on its error, the library computes the affine equalizer
//! `x_hat = w * y + l` under four criteria:
//!
//! * `mmse` - tuned to the estimate as if it were exact;
//! * `minimax` - minimizes the worst-case MSE over the uncertainty
//!   interval;
//! * `minimin` - minimizes the best-case MSE;
//! * `minimax-regret` - minimizes the worst-case excess MSE over the
//!   clairvoyant benchmark, linearized to first order in the channel
//!   perturbation.
//!
//! Each closed form is paired with an independent brute-force oracle
//! ([`oracle`]) that recomputes the optimum by grid search, and a Monte
//! Carlo harness ([`sim`]) reproduces sorted-MSE and sweep experiments
//! deterministically under a seed.

pub mod equalizers;
pub mod error;
pub mod instances;
pub mod model;
pub mod oracle;
pub mod sim;

pub use error::{ModelError, OracleError, SimError, SolveError};
pub use model::{
    linearized_regret, mmse_mse_at, mse, regret, AffineEqualizer, ChannelBelief, Method,
    SignalModel, SolveReport,
};
