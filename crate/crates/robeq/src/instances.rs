//! Seeded random problem instances for closed-form vs oracle checks.
//!
//! Used by the `verify` CLI command and the acceptance suite. Draws are
//! uniform over fixed ranges chosen to exercise every solver branch while
//! keeping the default oracle box a valid bracket:
//! `h_est` in `[-3, 3]` excluding 0, `epsilon` in `[0, 0.9 |h_est|]`,
//! `var_x` and `var_n` in `[0.1, 10]`, `mean_x` in `[-1, 1]`.

use rand::Rng;

use crate::model::{ChannelBelief, SignalModel};

/// A sampled problem: signal statistics plus channel belief.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Instance {
    pub model: SignalModel,
    pub belief: ChannelBelief,
}

/// Restriction applied while sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// No restriction.
    Any,
    /// Force `mean_x = 0`.
    ZeroMean,
    /// Only instances satisfying the pessimistic-endpoint condition
    /// `h_est epsilon var_x < epsilon^2 var_x + var_n`.
    Branch1,
    /// Only instances violating it (channel-inverse branch of the minimax
    /// solver).
    Branch2,
}

impl std::str::FromStr for Regime {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "any" => Ok(Regime::Any),
            "zero-mean" => Ok(Regime::ZeroMean),
            "branch1" => Ok(Regime::Branch1),
            "branch2" => Ok(Regime::Branch2),
            other => Err(format!(
                "unknown regime '{other}' (expected any, zero-mean, branch1 or branch2)"
            )),
        }
    }
}

/// Whether the instance falls in the pessimistic-endpoint branch of the
/// minimax solver.
pub fn is_branch1(model: &SignalModel, belief: &ChannelBelief) -> bool {
    belief.h_est().abs() * belief.epsilon() * model.var_x()
        < belief.epsilon() * belief.epsilon() * model.var_x() + model.var_n()
}

/// Draws one instance under the given regime by rejection.
pub fn sample_instance<R: Rng>(rng: &mut R, regime: Regime) -> Instance {
    loop {
        let mut h_est: f64 = rng.gen_range(-3.0..3.0);
        while h_est == 0.0 {
            h_est = rng.gen_range(-3.0..3.0);
        }
        let epsilon = rng.gen_range(0.0..0.9 * h_est.abs());
        let var_x = rng.gen_range(0.1..10.0);
        let var_n = rng.gen_range(0.1..10.0);
        let mean_x = match regime {
            Regime::ZeroMean => 0.0,
            _ => rng.gen_range(-1.0..1.0),
        };
        let model = SignalModel::new(mean_x, var_x, var_n).expect("ranges are valid");
        let belief = ChannelBelief::new(h_est, epsilon).expect("ranges are valid");
        let keep = match regime {
            Regime::Any | Regime::ZeroMean => true,
            Regime::Branch1 => is_branch1(&model, &belief),
            Regime::Branch2 => !is_branch1(&model, &belief),
        };
        if keep {
            return Instance { model, belief };
        }
    }
}
