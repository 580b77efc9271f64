//! Brute-force reference solvers and exact interval-MSE evaluators.
//!
//! These are the independent route against which every closed form in
//! [`crate::equalizers`] is validated: a coarse grid scan over `(w, l)`
//! followed by repeated 10x zooms around the incumbent. They trade speed
//! for transparency and run in the test suite and the `verify` command,
//! not in the solve path.
//!
//! The worst case over `dh` is evaluated at the interval endpoints only;
//! the MSE is a quadratic in `dh` with leading coefficient `w^2 E[x^2] >=
//! 0`, so its maximum over `[-epsilon, epsilon]` is attained at an
//! endpoint. The `dh_points` grid exists to assert exactly that, not to
//! search.

use crate::error::OracleError;
use crate::model::{
    mmse_mse_at, mse, AffineEqualizer, ChannelBelief, Method, SignalModel, SolveReport,
};

/// Search-box and resolution parameters for the brute-force solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub w_lo: f64,
    pub w_hi: f64,
    pub l_lo: f64,
    pub l_hi: f64,
    /// Points per axis in each scan; >= 3.
    pub coarse_points: usize,
    /// Number of 10x zooms around the incumbent; >= 0.
    pub refine_rounds: usize,
    /// Points of the `dh` validation grid; odd and >= 3 so `dh = 0` is on
    /// the grid.
    pub dh_points: usize,
}

impl GridSpec {
    pub fn new(
        w_lo: f64,
        w_hi: f64,
        l_lo: f64,
        l_hi: f64,
        coarse_points: usize,
        refine_rounds: usize,
        dh_points: usize,
    ) -> Result<Self, OracleError> {
        if !(w_lo < w_hi) || !(l_lo < l_hi) {
            return Err(OracleError::InvalidGrid {
                reason: format!(
                    "lo must be < hi on both axes, got w [{w_lo}, {w_hi}], l [{l_lo}, {l_hi}]"
                ),
            });
        }
        if coarse_points < 3 {
            return Err(OracleError::InvalidGrid {
                reason: format!("coarse_points must be >= 3, got {coarse_points}"),
            });
        }
        if dh_points < 3 || dh_points % 2 == 0 {
            return Err(OracleError::InvalidGrid {
                reason: format!("dh_points must be odd and >= 3, got {dh_points}"),
            });
        }
        Ok(Self {
            w_lo,
            w_hi,
            l_lo,
            l_hi,
            coarse_points,
            refine_rounds,
            dh_points,
        })
    }

    /// Default spec for a given problem: a box centered on the MMSE
    /// coefficients with half-width `5 * max(|w0|, |l0|, 1)`, 101 points
    /// per axis, six 10x zooms, and a 1001-point `dh` validation grid.
    pub fn default_for(m: &SignalModel, b: &ChannelBelief) -> Self {
        let d = b.h_est() * b.h_est() * m.var_x() + m.var_n();
        let w0 = b.h_est() * m.var_x() / d;
        let l0 = m.mean_x() * m.var_n() / d;
        let half = 5.0 * w0.abs().max(l0.abs()).max(1.0);
        Self {
            w_lo: w0 - half,
            w_hi: w0 + half,
            l_lo: l0 - half,
            l_hi: l0 + half,
            coarse_points: 101,
            refine_rounds: 6,
            dh_points: 1001,
        }
    }
}

/// Exact maximum of the MSE over the uncertainty interval: the larger of
/// the two endpoint values.
pub fn worst_case_mse(eq: &AffineEqualizer, m: &SignalModel, b: &ChannelBelief) -> f64 {
    let lo = mse(eq, m, b.h_est() - b.epsilon());
    let hi = mse(eq, m, b.h_est() + b.epsilon());
    lo.max(hi)
}

/// Exact minimum of the MSE over the uncertainty interval.
///
/// The MSE is a quadratic in `h`; if its vertex lies inside the interval
/// the minimum is there, otherwise at the nearer endpoint.
pub fn best_case_mse(eq: &AffineEqualizer, m: &SignalModel, b: &ChannelBelief) -> f64 {
    let lo = mse(eq, m, b.h_est() - b.epsilon());
    let hi = mse(eq, m, b.h_est() + b.epsilon());
    let edge = lo.min(hi);
    if eq.w == 0.0 {
        // Constant in h.
        return edge;
    }
    let x2 = m.second_moment_x();
    // d/dh = 2 w^2 h x2 - 2 w x2 + 2 w l mean_x = 0
    let vertex = (x2 - eq.l * m.mean_x()) / (eq.w * x2);
    if (b.h_est() - b.epsilon()..=b.h_est() + b.epsilon()).contains(&vertex) {
        edge.min(mse(eq, m, vertex))
    } else {
        edge
    }
}

/// Outcome of a 2-D scan: incumbent coordinates, value, and whether the
/// incumbent sits on the scanned box's edge.
struct ScanBest {
    w: f64,
    l: f64,
    value: f64,
    on_edge: bool,
}

fn grid_point(lo: f64, hi: f64, i: usize, n: usize) -> f64 {
    lo + (hi - lo) * i as f64 / (n - 1) as f64
}

/// Scans an `n x n` grid in row-major order (w outer, l inner), keeping
/// the first strict minimum so ties break to the lowest flat index.
fn scan_box(
    objective: &dyn Fn(f64, f64) -> f64,
    w_lo: f64,
    w_hi: f64,
    l_lo: f64,
    l_hi: f64,
    n: usize,
) -> ScanBest {
    let mut best = ScanBest {
        w: w_lo,
        l: l_lo,
        value: f64::INFINITY,
        on_edge: true,
    };
    let mut best_ij = (0usize, 0usize);
    for i in 0..n {
        let w = grid_point(w_lo, w_hi, i, n);
        for j in 0..n {
            let l = grid_point(l_lo, l_hi, j, n);
            let value = objective(w, l);
            if value < best.value {
                best = ScanBest {
                    w,
                    l,
                    value,
                    on_edge: false,
                };
                best_ij = (i, j);
            }
        }
    }
    best.on_edge =
        best_ij.0 == 0 || best_ij.0 == n - 1 || best_ij.1 == 0 || best_ij.1 == n - 1;
    best
}

/// Shifts the window `[center - span/2, center + span/2]` so it stays
/// inside `[lo, hi]` (assumes `span <= hi - lo`).
fn clamp_window(center: f64, span: f64, lo: f64, hi: f64) -> (f64, f64) {
    let mut a = center - span / 2.0;
    let mut b = center + span / 2.0;
    if a < lo {
        b += lo - a;
        a = lo;
    }
    if b > hi {
        a -= b - hi;
        b = hi;
    }
    (a.max(lo), b.min(hi))
}

/// Coarse scan plus `refine_rounds` 10x zooms around the incumbent.
///
/// The objectives scanned here are maxima of two convex quadratics, so
/// the minimum may sit on the curve where the two tie - a diagonal valley
/// a plain shrinking zoom slides along without reaching its bottom. Each
/// round therefore first WALKS: it rescans a same-size window recentered
/// on the incumbent until the incumbent is interior, then shrinks the
/// window tenfold. Windows stay inside the caller's box, the incumbent
/// only ever improves, and everything is deterministic.
fn minimize_on_grid(
    objective: &dyn Fn(f64, f64) -> f64,
    g: &GridSpec,
) -> Result<(AffineEqualizer, f64), OracleError> {
    let n = g.coarse_points;
    let mut best = scan_box(objective, g.w_lo, g.w_hi, g.l_lo, g.l_hi, n);
    let mut w_span = g.w_hi - g.w_lo;
    let mut l_span = g.l_hi - g.l_lo;
    const MAX_WALKS: usize = 64;
    for round in 0..=g.refine_rounds {
        if round > 0 {
            w_span /= 10.0;
            l_span /= 10.0;
        }
        for _ in 0..MAX_WALKS {
            let (w_lo, w_hi) = clamp_window(best.w, w_span, g.w_lo, g.w_hi);
            let (l_lo, l_hi) = clamp_window(best.l, l_span, g.l_lo, g.l_hi);
            let scan = scan_box(objective, w_lo, w_hi, l_lo, l_hi, n);
            let moved = scan.value < best.value;
            if moved {
                best = scan;
            }
            // Interior incumbent: this scale is resolved. A pinned
            // incumbent that no longer improves is resolved too (it is
            // pressed against the caller's box and handled below).
            if !best.on_edge || !moved {
                break;
            }
        }
    }
    // The final grid step; an incumbent within one step of the caller's
    // box edge means the box failed to bracket the optimum.
    let w_step = w_span / (n - 1) as f64;
    let l_step = l_span / (n - 1) as f64;
    if best.w - g.w_lo <= w_step
        || g.w_hi - best.w <= w_step
        || best.l - g.l_lo <= l_step
        || g.l_hi - best.l <= l_step
    {
        return Err(OracleError::BracketTooNarrow {
            w_lo: g.w_lo,
            w_hi: g.w_hi,
            l_lo: g.l_lo,
            l_hi: g.l_hi,
            w: best.w,
            l: best.l,
        });
    }
    Ok((AffineEqualizer::new(best.w, best.l), best.value))
}

/// Numerically minimizes the worst-case MSE over `(w, l)`.
pub fn oracle_minimax(
    m: &SignalModel,
    b: &ChannelBelief,
    g: &GridSpec,
) -> Result<SolveReport, OracleError> {
    let objective = |w: f64, l: f64| worst_case_mse(&AffineEqualizer::new(w, l), m, b);
    let (equalizer, objective) = minimize_on_grid(&objective, g)?;
    Ok(SolveReport {
        equalizer,
        method: Method::Minimax,
        branch: "oracle",
        objective,
    })
}

/// Numerically minimizes the best-case MSE by exploiting min-interchange:
/// the inner minimum over `(w, l)` at a fixed channel is the analytic MMSE
/// pair, so only `dh` is scanned.
pub fn oracle_minimin(
    m: &SignalModel,
    b: &ChannelBelief,
    g: &GridSpec,
) -> Result<SolveReport, OracleError> {
    let value_at = |dh: f64| mmse_mse_at(m, b.h_est() + dh);
    let n = g.dh_points;
    let (mut lo, mut hi) = (-b.epsilon(), b.epsilon());
    let mut best_dh = 0.0;
    let mut best_value = f64::INFINITY;
    for _ in 0..=g.refine_rounds {
        for i in 0..n {
            let dh = grid_point(lo, hi, i, n);
            let value = value_at(dh);
            if value < best_value {
                best_value = value;
                best_dh = dh;
            }
        }
        let span = (hi - lo) / 10.0;
        // The favorable channel sits at an interval endpoint; keep the
        // zoom window inside the feasible interval.
        lo = (best_dh - span / 2.0).max(-b.epsilon());
        hi = (best_dh + span / 2.0).min(b.epsilon());
    }
    let h = b.h_est() + best_dh;
    let d = h * h * m.var_x() + m.var_n();
    let equalizer = AffineEqualizer::new(h * m.var_x() / d, m.mean_x() * m.var_n() / d);
    Ok(SolveReport {
        equalizer,
        method: Method::Minimin,
        branch: "oracle",
        objective: best_value,
    })
}

/// Numerically minimizes the worst-case linearized regret over `(w, l)`.
///
/// The surrogate is evaluated at `dh` in `{-epsilon, 0, +epsilon}`; the
/// endpoints suffice for the same quadratic-in-`dh` reason as the MSE, and
/// `dh = 0` is kept as a safeguard.
pub fn oracle_minimax_regret(
    m: &SignalModel,
    b: &ChannelBelief,
    g: &GridSpec,
) -> Result<SolveReport, OracleError> {
    let objective = |w: f64, l: f64| {
        let eq = AffineEqualizer::new(w, l);
        worst_surrogate_regret(&eq, m, b)
    };
    let (equalizer, objective) = minimize_on_grid(&objective, g)?;
    Ok(SolveReport {
        equalizer,
        method: Method::MinimaxRegret,
        branch: "oracle",
        objective,
    })
}

/// Maximum of the linearized regret over `dh` in `{-epsilon, 0, +epsilon}`.
pub fn worst_surrogate_regret(eq: &AffineEqualizer, m: &SignalModel, b: &ChannelBelief) -> f64 {
    crate::model::worst_linearized_regret(eq, m, b.h_est(), b.epsilon())
}

/// Checks that minimizing over `(x, y)` then `z` equals minimizing over
/// `z` then `(x, y)` on finite grids. Always true for finite minima; kept
/// as an executable sanity check of the interchange the minimin solver
/// rests on.
pub fn lemma1_check<F>(grid_x: &[f64], grid_y: &[f64], grid_z: &[f64], f: F) -> bool
where
    F: Fn(f64, f64, f64) -> f64,
{
    if grid_x.is_empty() || grid_y.is_empty() || grid_z.is_empty() {
        return false;
    }
    let min_over_xy = |z: f64| {
        let mut best = f64::INFINITY;
        for &x in grid_x {
            for &y in grid_y {
                best = best.min(f(x, y, z));
            }
        }
        best
    };
    let xy_then_z = grid_z.iter().fold(f64::INFINITY, |acc, &z| {
        acc.min(min_over_xy(z))
    });
    let mut z_then_xy = f64::INFINITY;
    for &x in grid_x {
        for &y in grid_y {
            for &z in grid_z {
                z_then_xy = z_then_xy.min(f(x, y, z));
            }
        }
    }
    xy_then_z == z_then_xy
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{regret, ChannelBelief, SignalModel};

    fn model(mean_x: f64, var_x: f64, var_n: f64) -> SignalModel {
        SignalModel::new(mean_x, var_x, var_n).unwrap()
    }

    fn belief(h_est: f64, epsilon: f64) -> ChannelBelief {
        ChannelBelief::new(h_est, epsilon).unwrap()
    }

    #[test]
    fn grid_spec_rejects_bad_parameters() {
        assert!(GridSpec::new(1.0, 1.0, 0.0, 1.0, 11, 2, 101).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 2, 2, 101).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 11, 2, 100).is_err());
        assert!(GridSpec::new(0.0, 1.0, 0.0, 1.0, 11, 0, 3).is_ok());
    }

    #[test]
    fn worst_case_with_no_uncertainty_is_pointwise_mse() {
        let m = model(0.1, 1.0, 1.0);
        let b = belief(1.2, 0.0);
        let eq = AffineEqualizer::new(0.3, 0.05);
        assert_eq!(worst_case_mse(&eq, &m, &b), mse(&eq, &m, 1.2));
        assert_eq!(best_case_mse(&eq, &m, &b), mse(&eq, &m, 1.2));
    }

    #[test]
    fn channel_independent_equalizer_bounds_are_flat() {
        let m = model(0.25, 1.0, 1.0);
        let b = belief(1.0, 0.7);
        let zero = AffineEqualizer::new(0.0, 0.0);
        assert_eq!(worst_case_mse(&zero, &m, &b), m.second_moment_x());
        assert_eq!(best_case_mse(&zero, &m, &b), m.second_moment_x());
        let mean = AffineEqualizer::new(0.0, m.mean_x());
        assert!((best_case_mse(&mean, &m, &b) - m.var_x()).abs() < 1e-15);
    }

    #[test]
    fn endpoint_worst_case_matches_dense_dh_grid() {
        let m = model(0.0, 1.0, 1.0);
        let b = belief(1.0, 0.5);
        let eq = AffineEqualizer::new(0.4, 0.0);
        let endpoint = worst_case_mse(&eq, &m, &b);
        let expected = mse(&eq, &m, 0.5).max(mse(&eq, &m, 1.5));
        assert_eq!(endpoint, expected);
        let mut grid_max = f64::NEG_INFINITY;
        let mut grid_min = f64::INFINITY;
        for i in 0..1001 {
            let dh = -0.5 + 1.0 * i as f64 / 1000.0;
            let v = mse(&eq, &m, 1.0 + dh);
            grid_max = grid_max.max(v);
            grid_min = grid_min.min(v);
        }
        assert!((grid_max - endpoint).abs() < 1e-12);
        assert!(best_case_mse(&eq, &m, &b) <= grid_min + 1e-15);
    }

    #[test]
    fn best_case_hits_interior_vertex_when_it_is_feasible() {
        // Equalizer tuned to h_est + epsilon with zero mean: the most
        // favorable channel for it is that endpoint.
        let m = model(0.0, 1.0, 1.0);
        let b = belief(1.0, 0.5);
        let h_fav = 1.5;
        let d = h_fav * h_fav + 1.0;
        let eq = AffineEqualizer::new(h_fav / d, 0.0);
        let best = best_case_mse(&eq, &m, &b);
        assert!(
            (best - mmse_mse_at(&m, h_fav)).abs() < 1e-15,
            "got {best}"
        );
        // A mistuned equalizer whose vertex lies strictly inside: the
        // interior minimum must undercut both endpoints.
        let eq = AffineEqualizer::new(1.0, 0.0);
        let vertex = 1.0; // (x2 - l mean) / (w x2) = 1
        let best = best_case_mse(&eq, &m, &b);
        assert_eq!(best, mse(&eq, &m, vertex));
        assert!(best < mse(&eq, &m, 0.5) && best < mse(&eq, &m, 1.5));
    }

    #[test]
    fn interval_bounds_order_and_equality_conditions() {
        let m = model(0.3, 2.0, 0.5);
        for (w, l, h_est, eps) in [
            (0.4, 0.1, 1.0, 0.3),
            (0.0, 0.3, 1.0, 0.3),
            (-0.7, 0.0, -1.5, 0.9),
            (0.5, 0.2, 0.8, 0.0),
        ] {
            let eq = AffineEqualizer::new(w, l);
            let b = belief(h_est, eps);
            let worst = worst_case_mse(&eq, &m, &b);
            let best = best_case_mse(&eq, &m, &b);
            assert!(worst >= best);
            if eps == 0.0 || w == 0.0 {
                assert_eq!(worst, best);
            } else {
                assert!(worst > best);
            }
        }
    }

    #[test]
    fn minimax_oracle_with_no_uncertainty_recovers_mmse() {
        let m = model(0.2, 1.0, 1.0);
        let b = belief(1.1, 0.0);
        let g = GridSpec::default_for(&m, &b);
        let report = oracle_minimax(&m, &b, &g).unwrap();
        let d = 1.1 * 1.1 + 1.0;
        assert!((report.equalizer.w - 1.1 / d).abs() < 1e-6);
        assert!((report.equalizer.l - 0.2 / d).abs() < 1e-6);
        assert!((report.objective - mmse_mse_at(&m, 1.1)).abs() < 1e-8);
    }

    #[test]
    fn minimax_oracle_matches_worked_instance() {
        // Known pessimistic-endpoint solution: w = 0.5/1.25 = 0.4, l = 0.
        let m = model(0.0, 1.0, 1.0);
        let b = belief(1.0, 0.5);
        let g = GridSpec::default_for(&m, &b);
        let report = oracle_minimax(&m, &b, &g).unwrap();
        assert!(
            (report.equalizer.w - 0.4).abs() < 1e-4,
            "w = {}",
            report.equalizer.w
        );
        assert!(report.equalizer.l.abs() < 1e-4);
    }

    #[test]
    fn minimax_oracle_objective_lower_bounds_the_coarse_scan() {
        let m = model(0.01, 1.0, 1.0);
        let b = belief(1.05, 0.3);
        let g = GridSpec::default_for(&m, &b);
        let report = oracle_minimax(&m, &b, &g).unwrap();
        let n = g.coarse_points;
        for i in 0..n {
            let w = g.w_lo + (g.w_hi - g.w_lo) * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let l = g.l_lo + (g.l_hi - g.l_lo) * j as f64 / (n - 1) as f64;
                let v = worst_case_mse(&AffineEqualizer::new(w, l), &m, &b);
                assert!(report.objective <= v + 1e-12);
            }
        }
    }

    #[test]
    fn minimin_oracle_finds_the_favorable_endpoint() {
        let m = model(0.0, 1.0, 1.0);
        let b = belief(1.0, 0.5);
        let g = GridSpec::default_for(&m, &b);
        let report = oracle_minimin(&m, &b, &g).unwrap();
        assert!(
            (report.equalizer.w - 1.5 / 3.25).abs() < 1e-4,
            "w = {}",
            report.equalizer.w
        );
        assert!(report.equalizer.l.abs() < 1e-12);
        assert!((report.objective - mmse_mse_at(&m, 1.5)).abs() < 1e-9);

        // Mirror instance.
        let b = belief(-1.0, 0.5);
        let report = oracle_minimin(&m, &b, &g).unwrap();
        assert!((report.equalizer.w + 1.5 / 3.25).abs() < 1e-4);
    }

    #[test]
    fn regret_oracle_with_no_uncertainty_recovers_mmse() {
        let m = model(0.0, 1.0, 1.0);
        let b = belief(1.0, 0.0);
        let g = GridSpec::default_for(&m, &b);
        let report = oracle_minimax_regret(&m, &b, &g).unwrap();
        assert!((report.equalizer.w - 0.5).abs() < 1e-6);
        assert!(report.equalizer.l.abs() < 1e-6);
        assert!(report.objective.abs() < 1e-10);
    }

    #[test]
    fn oracle_is_deterministic_for_a_fixed_spec() {
        let m = model(0.01, 1.0, 1.0);
        let b = belief(1.05, 0.3);
        let g = GridSpec::default_for(&m, &b);
        let a = oracle_minimax(&m, &b, &g).unwrap();
        let c = oracle_minimax(&m, &b, &g).unwrap();
        assert_eq!(a.equalizer.w.to_bits(), c.equalizer.w.to_bits());
        assert_eq!(a.equalizer.l.to_bits(), c.equalizer.l.to_bits());
        assert_eq!(a.objective.to_bits(), c.objective.to_bits());
    }

    #[test]
    fn off_center_box_reports_missing_bracket() {
        let m = model(0.0, 1.0, 1.0);
        let b = belief(1.0, 0.5);
        // Optimum w is ~0.4; a box entirely to its right pins the
        // incumbent to the box edge.
        let g = GridSpec::new(2.0, 3.0, -0.5, 0.5, 21, 3, 101).unwrap();
        let err = oracle_minimax(&m, &b, &g).unwrap_err();
        assert!(matches!(err, OracleError::BracketTooNarrow { .. }));
    }

    #[test]
    fn refinement_never_worsens_the_coarse_scan() {
        let m = model(0.4, 2.0, 0.7);
        let b = belief(-1.3, 0.6);
        let coarse = GridSpec {
            refine_rounds: 0,
            ..GridSpec::default_for(&m, &b)
        };
        let refined = GridSpec::default_for(&m, &b);
        let v_coarse = oracle_minimax(&m, &b, &coarse).unwrap().objective;
        let v_refined = oracle_minimax(&m, &b, &refined).unwrap().objective;
        assert!(v_refined <= v_coarse);
    }

    #[test]
    fn lemma1_holds_on_singletons_and_random_grids() {
        assert!(lemma1_check(&[1.0], &[2.0], &[3.0], |x, y, z| x * y + z));

        // A fixed quadratic over modest grids.
        let xs: Vec<f64> = (0..10).map(|i| -1.0 + 0.2 * i as f64).collect();
        let ys: Vec<f64> = (0..10).map(|i| -0.5 + 0.1 * i as f64).collect();
        let zs: Vec<f64> = (0..10).map(|i| 0.3 * i as f64).collect();
        assert!(lemma1_check(&xs, &ys, &zs, |x, y, z| {
            (x - 0.3) * (x - 0.3) + 2.0 * (y + z) * (y + z) - x * y
        }));

        // The objective of the robust problem itself over (w, l, dh).
        let m = model(0.2, 1.0, 0.8);
        let dhs: Vec<f64> = (0..11).map(|i| -0.3 + 0.06 * i as f64).collect();
        assert!(lemma1_check(&xs, &ys, &dhs, |w, l, dh| {
            mse(&AffineEqualizer::new(w, l), &m, 1.05 + dh)
        }));

        assert!(!lemma1_check(&[], &[1.0], &[1.0], |x, _, _| x));
    }

    #[test]
    fn surrogate_worst_case_dominates_center_regret() {
        let m = model(0.1, 1.0, 1.0);
        let b = belief(0.9, 0.25);
        let eq = AffineEqualizer::new(0.37, 0.02);
        let worst = worst_surrogate_regret(&eq, &m, &b);
        assert!(worst >= regret(&eq, &m, b.h_est()) - 1e-15);
    }
}
