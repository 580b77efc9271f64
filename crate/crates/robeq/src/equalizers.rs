//! Closed-form solvers for the four equalization criteria.
//!
//! All four return a [`SolveReport`] whose `objective` is the value of the
//! criterion the method minimizes, evaluated at the returned coefficients:
//!
//! * `mmse` - the MSE at the channel estimate;
//! * `minimax` - the worst-case MSE over the uncertainty interval
//!   (attained at an interval endpoint);
//! * `minimin` - the best-case MSE (attained at the favorable endpoint);
//! * `minimax-regret` - the worst-case first-order regret surrogate over
//!   `dh` in `{-epsilon, 0, +epsilon}`.
//!
//! Branch conditions compare doubles exactly; at a branch boundary the
//! adjacent formulas agree to within continuity rounding, so the choice is
//! benign.

use crate::error::SolveError;
use crate::model::{
    benchmark_slope, mmse_mse_at, mse, worst_linearized_regret, AffineEqualizer, ChannelBelief,
    Method, SignalModel, SolveReport,
};

/// The MMSE coefficient pair tuned to channel gain `h`:
/// `w = h var_x / (h^2 var_x + var_n)`, `l = mean_x var_n / (h^2 var_x + var_n)`.
fn mmse_pair(m: &SignalModel, h: f64) -> AffineEqualizer {
    let d = h * h * m.var_x() + m.var_n();
    AffineEqualizer::new(h * m.var_x() / d, m.mean_x() * m.var_n() / d)
}

fn endpoint_max_mse(eq: &AffineEqualizer, m: &SignalModel, b: &ChannelBelief) -> f64 {
    let lo = mse(eq, m, b.h_est() - b.epsilon());
    let hi = mse(eq, m, b.h_est() + b.epsilon());
    lo.max(hi)
}

/// Equalizer tuned to the channel estimate as if it were exact.
pub fn mmse_equalizer(m: &SignalModel, h_est: f64) -> SolveReport {
    let equalizer = mmse_pair(m, h_est);
    SolveReport {
        equalizer,
        method: Method::Mmse,
        branch: "direct",
        objective: mse(&equalizer, m, h_est),
    }
}

/// Minimizer of the worst-case MSE over the uncertainty interval.
///
/// When `|h_est| epsilon var_x < epsilon^2 var_x + var_n` the worst
/// channel for the optimal pair is the pessimistic endpoint (the one
/// nearer zero) and the solution is the MMSE pair tuned to
/// `h_est - epsilon sign(h_est)` (branch 1). Otherwise the published
/// solution is the channel inverse `w = 1/h_est`, `l = 0` (branch 2);
/// the condition forces `h_est != 0` there.
///
/// The problem is invariant under `(h, w) -> (-h, -w)`, which is how the
/// positive-gain closed form extends to negative estimates. For
/// nonzero-mean signals branch 2 is not the exact optimizer of the worst
/// case; the brute-force oracle quantifies the gap.
pub fn minimax_equalizer(m: &SignalModel, b: &ChannelBelief) -> SolveReport {
    let h = b.h_est();
    let e = b.epsilon();
    let (equalizer, branch) = if h.abs() * e * m.var_x() < e * e * m.var_x() + m.var_n() {
        (mmse_pair(m, h - e * sign_pos_zero(h)), "branch1")
    } else {
        (AffineEqualizer::new(1.0 / h, 0.0), "branch2")
    };
    SolveReport {
        equalizer,
        method: Method::Minimax,
        branch,
        objective: endpoint_max_mse(&equalizer, m, b),
    }
}

fn sign_pos_zero(z: f64) -> f64 {
    if z >= 0.0 {
        1.0
    } else {
        -1.0
    }
}

/// Minimizer of the best-case MSE: the MMSE pair tuned to the favorable
/// endpoint `h_est + epsilon * sign(h_est)`, with `sign(0) = +1`.
pub fn minimin_equalizer(m: &SignalModel, b: &ChannelBelief) -> SolveReport {
    let h_fav = b.h_est() + b.epsilon() * sign_pos_zero(b.h_est());
    let equalizer = mmse_pair(m, h_fav);
    SolveReport {
        equalizer,
        method: Method::Minimin,
        branch: "favorable",
        objective: mse(&equalizer, m, h_fav),
    }
}

/// Sign indicator deciding which perturbation endpoint maximizes the
/// regret surrogate for a given equalizer: the surrogate is a quadratic in
/// `dh` with vertex at `-indicator`, so the max over `[-epsilon, epsilon]`
/// sits at `+epsilon` when the indicator is `>= 0` and at `-epsilon`
/// otherwise.
///
/// ```text
/// h_est + l mean_x / (w x2) - 1/w
///       + h_est var_n var_x^2 / (w^2 x2 (h_est^2 var_x + var_n)^2)
/// ```
fn worst_endpoint_indicator(m: &SignalModel, h_est: f64, eq: &AffineEqualizer) -> f64 {
    let x2 = m.second_moment_x();
    let slope_half = benchmark_slope(m, h_est) / 2.0;
    h_est + eq.l * m.mean_x() / (eq.w * x2) - 1.0 / eq.w + slope_half / (eq.w * eq.w * x2)
}

/// Minimizer of the worst-case linearized regret.
///
/// The two candidate pairs are the MMSE pairs tuned to the interval
/// endpoints. The case test evaluates, for each candidate, the sign
/// indicator telling which endpoint its own worst perturbation is; a
/// candidate is self-consistent when its assumed endpoint really is its
/// worst one. Cases, in fixed evaluation order with `f`/`g` the indicator
/// at the high/low candidate:
///
/// * case1 (`f >= 0`, `g >= 0`): the high candidate is self-consistent and
///   the low one is not; return the high candidate.
/// * case2 (`f <= 0`, `g <= 0`): mirror image; return the low candidate.
/// * case3 (`f >= 0`, `g <= 0`): both self-consistent; return whichever
///   has the smaller worst-case surrogate, ties to the high candidate.
/// * case4 (`f < 0`, `g > 0`): neither; the optimum lies on the curve
///   where both endpoints tie, found by a guarded 1-D search.
pub fn minimax_regret_equalizer(
    m: &SignalModel,
    b: &ChannelBelief,
) -> Result<SolveReport, SolveError> {
    let h = b.h_est();
    let e = b.epsilon();
    if h + e == 0.0 || h - e == 0.0 {
        return Err(SolveError::SingularBelief {
            h_est: h,
            epsilon: e,
        });
    }
    let cand_hi = mmse_pair(m, h + e);
    let cand_lo = mmse_pair(m, h - e);
    let f = worst_endpoint_indicator(m, h, &cand_hi);
    let g = worst_endpoint_indicator(m, h, &cand_lo);

    let (equalizer, branch) = if f >= 0.0 && g >= 0.0 {
        (cand_hi, "case1")
    } else if f <= 0.0 && g <= 0.0 {
        (cand_lo, "case2")
    } else if f >= 0.0 && g <= 0.0 {
        let j_hi = worst_linearized_regret(&cand_hi, m, h, e);
        let j_lo = worst_linearized_regret(&cand_lo, m, h, e);
        if j_hi <= j_lo {
            (cand_hi, "case3")
        } else {
            (cand_lo, "case3")
        }
    } else {
        (solve_on_switching_curve(m, b)?, "case4")
    };
    Ok(SolveReport {
        equalizer,
        method: Method::MinimaxRegret,
        branch,
        objective: worst_linearized_regret(&equalizer, m, h, e),
    })
}

/// The curve where the two endpoint surrogates tie, in cleared-denominator
/// form (valid for `w != 0`):
///
/// ```text
/// w^2 x2 h_est + w (l mean_x - x2) + slope/2 = 0
/// ```
///
/// On it the worst-case surrogate is `w^2 x2 epsilon^2` plus the exact
/// regret at the estimate, which is what the case-4 search minimizes.
///
/// The curve is searched parametrized by `l`: for fixed `l` it is a
/// quadratic in `w` whose coefficients stay well scaled for every
/// `mean_x` (eliminating `l` instead divides by `mean_x` and loses the
/// curve to cancellation as the mean vanishes). A dense `l` scan picks
/// the basin, golden-section polishes it.
fn solve_on_switching_curve(
    m: &SignalModel,
    b: &ChannelBelief,
) -> Result<AffineEqualizer, SolveError> {
    let h = b.h_est();
    let e = b.epsilon();
    let x2 = m.second_moment_x();
    let slope_half = benchmark_slope(m, h) / 2.0;
    let d = h * h * m.var_x() + m.var_n();
    let w0 = h * m.var_x() / d;
    let l0 = m.mean_x() * m.var_n() / d;
    if w0 == 0.0 {
        return Err(SolveError::Case4SolveFailure {
            reason: "nominal gain is zero, the tie curve has no interior minimum".into(),
        });
    }

    // On-curve worst-case surrogate for the better of the two w-roots at
    // this l; +inf where the curve has no real point.
    let on_curve = |l: f64| -> (f64, f64) {
        let a = x2 * h;
        let bq = l * m.mean_x() - x2;
        let c = slope_half;
        let disc = bq * bq - 4.0 * a * c;
        if disc < 0.0 {
            return (f64::NAN, f64::INFINITY);
        }
        let q = -0.5 * (bq + bq.signum() * disc.sqrt());
        let mut best_w = f64::NAN;
        let mut best_v = f64::INFINITY;
        for w in [q / a, if q != 0.0 { c / q } else { f64::NAN }] {
            if !w.is_finite() || w == 0.0 {
                continue;
            }
            let eq = AffineEqualizer::new(w, l);
            let v = w * w * x2 * e * e + mse(&eq, m, h) - mmse_mse_at(m, h);
            if v < best_v {
                best_v = v;
                best_w = w;
            }
        }
        (best_w, best_v)
    };

    // Zero mean: the on-curve objective depends on l only through l^2,
    // so the bias is exactly zero and only the w-roots compete.
    if m.mean_x() == 0.0 {
        let (w, value) = on_curve(0.0);
        if !value.is_finite() {
            return Err(SolveError::Case4SolveFailure {
                reason: "tie curve has no real point".into(),
            });
        }
        return Ok(AffineEqualizer::new(w, 0.0));
    }

    let span = 10.0 * l0.abs().max(1.0);
    const SCAN: usize = 4096;
    let point = |i: usize| -span + 2.0 * span * i as f64 / SCAN as f64;
    let mut best_i = 0;
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 0..=SCAN {
        let cand = on_curve(point(i));
        if cand.1 < best.1 {
            best = cand;
            best_i = i;
        }
    }
    if !best.1.is_finite() {
        return Err(SolveError::Case4SolveFailure {
            reason: "tie curve has no real point in the search range".into(),
        });
    }
    if best_i == 0 || best_i == SCAN {
        return Err(SolveError::Case4SolveFailure {
            reason: format!(
                "no interior minimum for l in [{:.3e}, {:.3e}] (best at edge l = {:.3e})",
                -span,
                span,
                point(best_i)
            ),
        });
    }
    let l = golden_section_min(
        &|l: f64| on_curve(l).1,
        point(best_i - 1),
        point(best_i + 1),
        1e-12,
        200,
    );
    let polished = on_curve(l);
    Ok(if polished.1 <= best.1 {
        AffineEqualizer::new(polished.0, l)
    } else {
        AffineEqualizer::new(best.0, point(best_i))
    })
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
fn golden_section_min(f: &dyn Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64, max_iter: usize) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..max_iter {
        if (b - a).abs() <= tol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc < fd {
        c
    } else {
        d
    }
}

/// Zero-mean specializations: the SNR-form expressions with `l = 0`.
///
/// Consistency contract: for `mean_x = 0` the output agrees with the
/// general solver for the same inputs. Rejects nonzero-mean models.
pub fn zero_mean_fast_path(
    m: &SignalModel,
    b: &ChannelBelief,
    method: Method,
) -> Result<SolveReport, SolveError> {
    if m.mean_x() != 0.0 {
        return Err(SolveError::NonZeroMean {
            mean_x: m.mean_x(),
        });
    }
    let h = b.h_est();
    let e = b.epsilon();
    let inv_snr = m.var_n() / m.var_x();
    let report = match method {
        Method::Mmse => {
            let eq = AffineEqualizer::new(h / (h * h + inv_snr), 0.0);
            SolveReport {
                equalizer: eq,
                method,
                branch: "direct",
                objective: mse(&eq, m, h),
            }
        }
        Method::Minimax => {
            let (eq, branch) = if e * (h.abs() - e) < inv_snr {
                let hw = h - e * sign_pos_zero(h);
                (AffineEqualizer::new(hw / (hw * hw + inv_snr), 0.0), "branch1")
            } else {
                (AffineEqualizer::new(1.0 / h, 0.0), "branch2")
            };
            SolveReport {
                equalizer: eq,
                method,
                branch,
                objective: endpoint_max_mse(&eq, m, b),
            }
        }
        Method::Minimin => {
            let h_fav = h + e * sign_pos_zero(h);
            let eq = AffineEqualizer::new(h_fav / (h_fav * h_fav + inv_snr), 0.0);
            SolveReport {
                equalizer: eq,
                method,
                branch: "favorable",
                objective: mse(&eq, m, h_fav),
            }
        }
        // No published zero-mean specialization exists for the regret
        // solver; its coefficients already collapse to the l = 0 forms.
        Method::MinimaxRegret => minimax_regret_equalizer(m, b)?,
    };
    Ok(report)
}

/// Dispatches to the solver for `method`.
pub fn solve(m: &SignalModel, b: &ChannelBelief, method: Method) -> Result<SolveReport, SolveError> {
    match method {
        Method::Mmse => Ok(mmse_equalizer(m, b.h_est())),
        Method::Minimax => Ok(minimax_equalizer(m, b)),
        Method::Minimin => Ok(minimin_equalizer(m, b)),
        Method::MinimaxRegret => minimax_regret_equalizer(m, b),
    }
}
