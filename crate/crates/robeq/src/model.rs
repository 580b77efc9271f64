//! Domain types and the exact analytic error functions.
//!
//! The setting is a scalar observation channel
//!
//! ```text
//! y = h * x + n
//! ```
//!
//! where `x` has mean `mean_x` and variance `var_x`, the noise `n` is zero
//! mean with variance `var_n` and independent of `x`, and the channel gain
//! `h` is known only through an estimate `h_est` with `|h - h_est| <=
//! epsilon`. An affine equalizer estimates the input as `x_hat = w * y + l`.
//!
//! Everything downstream (closed-form solvers, brute-force oracles, Monte
//! Carlo runs) evaluates the functions defined here. All statistics are
//! exact population quantities; nothing in this module samples.

use crate::error::ModelError;

fn require_finite(name: &'static str, value: f64) -> Result<f64, ModelError> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(ModelError::NonFinite { name, value })
    }
}

/// Second-order statistics of the transmitted signal and the noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalModel {
    mean_x: f64,
    var_x: f64,
    var_n: f64,
}

impl SignalModel {
    /// Validates `var_x > 0`, `var_n > 0` and finiteness of all three
    /// parameters.
    pub fn new(mean_x: f64, var_x: f64, var_n: f64) -> Result<Self, ModelError> {
        require_finite("mean_x", mean_x)?;
        require_finite("var_x", var_x)?;
        require_finite("var_n", var_n)?;
        if var_x <= 0.0 {
            return Err(ModelError::NonPositiveVariance {
                name: "var_x",
                value: var_x,
            });
        }
        if var_n <= 0.0 {
            return Err(ModelError::NonPositiveVariance {
                name: "var_n",
                value: var_n,
            });
        }
        Ok(Self {
            mean_x,
            var_x,
            var_n,
        })
    }

    /// Mean of the transmitted signal, `E[x]`.
    pub fn mean_x(&self) -> f64 {
        self.mean_x
    }

    /// Variance of the transmitted signal.
    pub fn var_x(&self) -> f64 {
        self.var_x
    }

    /// Variance of the observation noise.
    pub fn var_n(&self) -> f64 {
        self.var_n
    }

    /// Second moment `E[x^2] = var_x + mean_x^2`.
    ///
    /// Always `>= var_x`, with equality exactly when `mean_x = 0`.
    pub fn second_moment_x(&self) -> f64 {
        self.var_x + self.mean_x * self.mean_x
    }

    /// Signal-to-noise ratio `var_x / var_n`; strictly positive.
    pub fn snr(&self) -> f64 {
        self.var_x / self.var_n
    }
}

/// A channel estimate together with its uncertainty radius.
///
/// The true gain satisfies `|h - h_est| <= epsilon`. `epsilon = 0` is
/// admitted as the degenerate no-uncertainty case, in which all solvers
/// collapse to the plain MMSE equalizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelBelief {
    h_est: f64,
    epsilon: f64,
}

impl ChannelBelief {
    pub fn new(h_est: f64, epsilon: f64) -> Result<Self, ModelError> {
        require_finite("h_est", h_est)?;
        require_finite("epsilon", epsilon)?;
        if epsilon < 0.0 {
            return Err(ModelError::NegativeRadius { value: epsilon });
        }
        Ok(Self { h_est, epsilon })
    }

    /// The channel gain estimate.
    pub fn h_est(&self) -> f64 {
        self.h_est
    }

    /// The uncertainty radius on the channel gain.
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Coefficients of the affine estimate `x_hat = w * y + l`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineEqualizer {
    /// Equalizer gain applied to the received sample.
    pub w: f64,
    /// Bias term; carries the signal mean when `mean_x != 0`.
    pub l: f64,
}

impl AffineEqualizer {
    pub fn new(w: f64, l: f64) -> Self {
        Self { w, l }
    }

    /// Applies the equalizer to a received sample.
    pub fn estimate(&self, y: f64) -> f64 {
        self.w * y + self.l
    }
}

/// The four equalization methods.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Mmse,
    Minimax,
    Minimin,
    MinimaxRegret,
}

impl Method {
    /// All methods, in the canonical reporting order.
    pub const ALL: [Method; 4] = [
        Method::Mmse,
        Method::Minimax,
        Method::Minimin,
        Method::MinimaxRegret,
    ];

    /// Stable lowercase name used in CLI flags and CSV columns.
    pub fn name(&self) -> &'static str {
        match self {
            Method::Mmse => "mmse",
            Method::Minimax => "minimax",
            Method::Minimin => "minimin",
            Method::MinimaxRegret => "minimax-regret",
        }
    }

    /// Short name used for CSV column suffixes.
    pub fn column(&self) -> &'static str {
        match self {
            Method::Mmse => "mmse",
            Method::Minimax => "minimax",
            Method::Minimin => "minimin",
            Method::MinimaxRegret => "regret",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "mmse" => Ok(Method::Mmse),
            "minimax" => Ok(Method::Minimax),
            "minimin" => Ok(Method::Minimin),
            "minimax-regret" | "regret" => Ok(Method::MinimaxRegret),
            other => Err(format!(
                "unknown method '{other}' (expected mmse, minimax, minimin or minimax-regret)"
            )),
        }
    }
}

/// A solver result: the equalizer, which formula branch produced it, and
/// the value of the objective the method minimizes at that equalizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveReport {
    pub equalizer: AffineEqualizer,
    pub method: Method,
    /// Branch label from the per-method label set:
    /// mmse: `direct`; minimax: `branch1 | branch2`; minimin: `favorable`;
    /// minimax-regret: `case1 | case2 | case3 | case4`; oracles: `oracle`.
    pub branch: &'static str,
    pub objective: f64,
}

/// Exact mean-square error of `x_hat = w (h x + n) + l` for channel gain `h`:
///
/// ```text
/// MSE(w, l; h) = x2 + w^2 (h^2 x2 + var_n) + l^2
///                - 2 l mean_x - 2 w h x2 + 2 w l h mean_x
/// ```
///
/// with `x2 = E[x^2]`. Nonnegative for every valid model.
pub fn mse(eq: &AffineEqualizer, m: &SignalModel, h: f64) -> f64 {
    let x2 = m.second_moment_x();
    let (w, l) = (eq.w, eq.l);
    x2 + w * w * (h * h * x2 + m.var_n()) + l * l
        - 2.0 * l * m.mean_x()
        - 2.0 * w * h * x2
        + 2.0 * w * l * h * m.mean_x()
}

/// Minimum achievable MSE when the channel gain `h` is known exactly:
///
/// ```text
/// var_n var_x / (h^2 var_x + var_n)
/// ```
///
/// Strictly positive and at most `var_x` (attained at `h = 0`, where the
/// best affine estimate is the signal mean).
pub fn mmse_mse_at(m: &SignalModel, h: f64) -> f64 {
    m.var_n() * m.var_x() / (h * h * m.var_x() + m.var_n())
}

/// Excess MSE of `eq` at channel `h` over the best affine equalizer tuned
/// to `h`. Nonnegative, zero exactly at the MMSE equalizer.
pub fn regret(eq: &AffineEqualizer, m: &SignalModel, h: f64) -> f64 {
    mse(eq, m, h) - mmse_mse_at(m, h)
}

/// Slope of the known-channel MMSE value in `h` at `h_est`, negated:
/// the first-order expansion of the benchmark term around `dh = 0` is
///
/// ```text
/// mmse_mse_at(h_est + dh) ~ mmse_mse_at(h_est) - dh * benchmark_slope
/// ```
///
/// where `benchmark_slope = 2 h_est var_n var_x^2 / (h_est^2 var_x + var_n)^2`.
pub(crate) fn benchmark_slope(m: &SignalModel, h_est: f64) -> f64 {
    let d = h_est * h_est * m.var_x() + m.var_n();
    2.0 * h_est * m.var_n() * m.var_x() * m.var_x() / (d * d)
}

/// Unchecked first-order regret surrogate; see [`linearized_regret`].
pub(crate) fn linearized_regret_at(
    eq: &AffineEqualizer,
    m: &SignalModel,
    h_est: f64,
    dh: f64,
) -> f64 {
    mse(eq, m, h_est + dh) - mmse_mse_at(m, h_est) + dh * benchmark_slope(m, h_est)
}

/// Maximum of the linearized regret over `dh` in `{-epsilon, 0, +epsilon}`.
///
/// The surrogate is quadratic in `dh` with nonnegative leading
/// coefficient, so the endpoints suffice; `dh = 0` is kept as a safeguard
/// for the degenerate `w = 0` case.
pub(crate) fn worst_linearized_regret(
    eq: &AffineEqualizer,
    m: &SignalModel,
    h_est: f64,
    epsilon: f64,
) -> f64 {
    let lo = linearized_regret_at(eq, m, h_est, -epsilon);
    let mid = linearized_regret_at(eq, m, h_est, 0.0);
    let hi = linearized_regret_at(eq, m, h_est, epsilon);
    lo.max(mid).max(hi)
}

/// First-order surrogate for the regret at channel `h_est + dh`: the exact
/// MSE of `eq` there, minus the benchmark MMSE value expanded to first
/// order around `dh = 0`:
///
/// ```text
/// mse(eq; h_est + dh) - [ mmse_mse_at(h_est) - dh * benchmark_slope ]
/// ```
///
/// Exact at `dh = 0`, where it reduces to [`regret`]. May be negative away
/// from the expansion point. Rejects `|dh| > epsilon`.
pub fn linearized_regret(
    eq: &AffineEqualizer,
    m: &SignalModel,
    b: &ChannelBelief,
    dh: f64,
) -> Result<f64, ModelError> {
    if !(dh.abs() <= b.epsilon()) {
        return Err(ModelError::PerturbationOutOfRange {
            dh,
            epsilon: b.epsilon(),
        });
    }
    Ok(linearized_regret_at(eq, m, b.h_est(), dh))
}
