//! Monte Carlo harness: truncated-Gaussian channel perturbations,
//! per-trial MSEs for each method, sorted-MSE curves and epsilon sweeps.
//!
//! Determinism contract: every random draw comes from a stream derived
//! statelessly from `(seed, trial_index, purpose)`, so results are
//! bit-identical across runs and across thread counts. Trials run in
//! parallel; aggregation is a deterministic reduce in trial order.
//!
//! The per-trial protocol mirrors the experiment layout: the true gain is
//! fixed, the estimate is `h_est = true_h + dh` with `dh` drawn from a
//! zero-mean Gaussian with standard deviation `epsilon` truncated to
//! `[-epsilon, epsilon]`, each solver sees `(h_est, epsilon)`, and the
//! resulting equalizers are scored at the true gain - analytically, and
//! empirically over `samples_per_trial` simulated symbol/noise draws.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::equalizers::solve;
use crate::error::SimError;
use crate::model::{mse, ChannelBelief, Method, SignalModel};

/// What a derived stream is consumed for; part of the stream key so the
/// perturbation draw of a trial is unaffected by how many samples the
/// empirical pass consumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    /// The channel perturbation of a trial.
    Perturbation = 0,
    /// The symbol/noise draws of the empirical MSE estimate.
    Samples = 1,
}

/// Stateless per-trial stream: one ChaCha stream per `(trial, purpose)`
/// pair under a fixed seed.
pub fn stream(seed: u64, trial: u64, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial * 2 + purpose as u64);
    rng
}

/// Zero-mean Gaussian draw with standard deviation `sigma`, rejection-
/// truncated to `[-bound, bound]`. Returns 0 when `sigma` or `bound` is 0.
///
/// For `sigma == bound` the per-draw acceptance probability is about
/// 0.6827, so the loop terminates quickly.
pub fn sample_truncated_gaussian<R: Rng + ?Sized>(rng: &mut R, sigma: f64, bound: f64) -> f64 {
    assert!(sigma >= 0.0 && bound >= 0.0, "sigma and bound must be >= 0");
    if sigma == 0.0 || bound == 0.0 {
        return 0.0;
    }
    let normal = Normal::new(0.0, sigma).expect("sigma is positive and finite");
    loop {
        let z = normal.sample(rng);
        if z.abs() <= bound {
            return z;
        }
    }
}

/// Monte Carlo run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    /// True channel gain.
    pub true_h: f64,
    /// Perturbation bound; also the solvers' uncertainty radius.
    pub epsilon: f64,
    pub mean_x: f64,
    pub var_x: f64,
    pub var_n: f64,
    pub trials: usize,
    /// Symbol/noise draws per trial for the empirical MSE.
    pub samples_per_trial: usize,
    pub seed: u64,
    /// Methods to run, in reporting order.
    pub methods: Vec<Method>,
}

impl Default for SimConfig {
    /// The sorted-curves experiment preset: `true_h = 1.05`,
    /// `epsilon = 0.3`, `mean_x = 0.01`, unit variances, 200 trials of
    /// 10^4 samples, seed 1, all four methods.
    fn default() -> Self {
        Self {
            true_h: 1.05,
            epsilon: 0.3,
            mean_x: 0.01,
            var_x: 1.0,
            var_n: 1.0,
            trials: 200,
            samples_per_trial: 10_000,
            seed: 1,
            methods: Method::ALL.to_vec(),
        }
    }
}

impl SimConfig {
    /// The sweep experiment preset: as [`Default`] but with a zero-mean
    /// signal.
    pub fn zero_mean_preset() -> Self {
        Self {
            mean_x: 0.0,
            ..Self::default()
        }
    }

    /// Checks the configuration invariants and returns the signal model.
    pub fn validate(&self) -> Result<SignalModel, SimError> {
        if self.trials < 1 {
            return Err(SimError::InvalidConfig {
                reason: format!("trials must be >= 1, got {}", self.trials),
            });
        }
        if self.samples_per_trial < 1 {
            return Err(SimError::InvalidConfig {
                reason: format!(
                    "samples_per_trial must be >= 1, got {}",
                    self.samples_per_trial
                ),
            });
        }
        if !(self.epsilon >= 0.0 && self.epsilon.is_finite()) {
            return Err(SimError::InvalidConfig {
                reason: format!("epsilon must be finite and >= 0, got {}", self.epsilon),
            });
        }
        if !self.true_h.is_finite() {
            return Err(SimError::InvalidConfig {
                reason: format!("true_h must be finite, got {}", self.true_h),
            });
        }
        if self.methods.is_empty() {
            return Err(SimError::InvalidConfig {
                reason: "methods must not be empty".into(),
            });
        }
        let mut seen = [false; 4];
        for m in &self.methods {
            let idx = *m as usize;
            if seen[idx] {
                return Err(SimError::InvalidConfig {
                    reason: format!("duplicate method '{m}'"),
                });
            }
            seen[idx] = true;
        }
        Ok(SignalModel::new(self.mean_x, self.var_x, self.var_n)?)
    }
}

/// Analytic and empirical score of one method in one trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MethodMse {
    pub method: Method,
    /// Branch taken by the solver for this trial's belief.
    pub branch: &'static str,
    /// Exact MSE of the solved equalizer at the true gain.
    pub analytic: f64,
    /// Sample mean of the squared error over `samples_per_trial` draws.
    pub empirical: f64,
    /// Standard error of that sample mean.
    pub empirical_se: f64,
}

/// Everything measured in one trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub trial: usize,
    /// Drawn perturbation; the estimate handed to the solvers is
    /// `true_h + dh`.
    pub dh: f64,
    pub h_est: f64,
    /// One entry per configured method, in configuration order.
    pub mses: Vec<MethodMse>,
}

/// Per-method series over a whole run, paired by trial index.
#[derive(Debug, Clone, PartialEq)]
pub struct MethodSeries {
    pub method: Method,
    pub analytic: Vec<f64>,
    pub empirical: Vec<f64>,
    pub empirical_se: Vec<f64>,
}

/// A full run: drawn perturbations plus per-method MSE series, with the
/// configuration echoed for auditability.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialBatch {
    pub config: SimConfig,
    pub dh: Vec<f64>,
    pub series: Vec<MethodSeries>,
}

impl TrialBatch {
    /// Returns a copy with each method's analytic and empirical series
    /// independently sorted ascending (the construction behind sorted-MSE
    /// curves). Standard errors stay paired with their empirical values.
    pub fn sorted_ascending(&self) -> TrialBatch {
        let series = self
            .series
            .iter()
            .map(|s| {
                let mut analytic = s.analytic.clone();
                analytic.sort_by(|a, b| a.partial_cmp(b).expect("MSEs are finite"));
                let mut emp: Vec<(f64, f64)> = s
                    .empirical
                    .iter()
                    .copied()
                    .zip(s.empirical_se.iter().copied())
                    .collect();
                emp.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("MSEs are finite"));
                MethodSeries {
                    method: s.method,
                    analytic,
                    empirical: emp.iter().map(|p| p.0).collect(),
                    empirical_se: emp.iter().map(|p| p.1).collect(),
                }
            })
            .collect();
        TrialBatch {
            config: self.config.clone(),
            dh: self.dh.clone(),
            series,
        }
    }
}

/// Averaged analytic MSE per method over a grid of perturbation bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub config: SimConfig,
    pub epsilons: Vec<f64>,
    /// `avg_mse[k][j]` is the average for method `k` at grid point `j`.
    pub methods: Vec<Method>,
    pub avg_mse: Vec<Vec<f64>>,
}

/// Runs one trial: solves every configured method for the belief
/// `(true_h + dh, epsilon)` and scores each equalizer at the true gain,
/// both analytically and over `samples_per_trial` simulated draws.
///
/// The empirical mean is expected to lie within a few standard errors of
/// the analytic value; the returned record carries the standard error so
/// callers can assert that gate.
pub fn run_trial(cfg: &SimConfig, trial: usize, dh: f64) -> Result<TrialRecord, SimError> {
    let model = cfg.validate()?;
    if !(dh.abs() <= cfg.epsilon) {
        return Err(SimError::Model(
            crate::error::ModelError::PerturbationOutOfRange {
                dh,
                epsilon: cfg.epsilon,
            },
        ));
    }
    let h_est = cfg.true_h + dh;
    let belief = ChannelBelief::new(h_est, cfg.epsilon)?;

    let mut reports = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let report = solve(&model, &belief, method)
            .map_err(|source| SimError::Trial { trial, source })?;
        reports.push(report);
    }

    // Shared symbol/noise draws for all methods (paired comparison), with
    // running mean and M2 per method for the standard error.
    let mut rng = stream(cfg.seed, trial as u64, StreamPurpose::Samples);
    let x_dist = Normal::new(model.mean_x(), model.var_x().sqrt()).expect("validated");
    let n_dist = Normal::new(0.0, model.var_n().sqrt()).expect("validated");
    let mut mean = vec![0.0_f64; reports.len()];
    let mut m2 = vec![0.0_f64; reports.len()];
    let n = cfg.samples_per_trial;
    for count in 1..=n {
        let x = x_dist.sample(&mut rng);
        let noise = n_dist.sample(&mut rng);
        let y = cfg.true_h * x + noise;
        for (k, report) in reports.iter().enumerate() {
            let err = x - report.equalizer.estimate(y);
            let sq = err * err;
            let delta = sq - mean[k];
            mean[k] += delta / count as f64;
            m2[k] += delta * (sq - mean[k]);
        }
    }

    let mses = reports
        .iter()
        .enumerate()
        .map(|(k, report)| {
            let variance = if n > 1 { m2[k] / (n - 1) as f64 } else { 0.0 };
            MethodMse {
                method: report.method,
                branch: report.branch,
                analytic: mse(&report.equalizer, &model, cfg.true_h),
                empirical: mean[k],
                empirical_se: (variance / n as f64).sqrt(),
            }
        })
        .collect();

    Ok(TrialRecord {
        trial,
        dh,
        h_est,
        mses,
    })
}

/// Draws the perturbation of trial `i` under the configuration's seed.
fn draw_dh(cfg: &SimConfig, trial: usize, epsilon: f64) -> f64 {
    let mut rng = stream(cfg.seed, trial as u64, StreamPurpose::Perturbation);
    sample_truncated_gaussian(&mut rng, epsilon, epsilon)
}

/// Runs all trials (in parallel, deterministically) and returns the
/// paired, unsorted batch.
pub fn run_trials(cfg: &SimConfig) -> Result<TrialBatch, SimError> {
    cfg.validate()?;
    let records: Vec<TrialRecord> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| run_trial(cfg, i, draw_dh(cfg, i, cfg.epsilon)))
        .collect::<Result<_, _>>()?;
    Ok(batch_from_records(cfg.clone(), &records))
}

fn batch_from_records(config: SimConfig, records: &[TrialRecord]) -> TrialBatch {
    let dh = records.iter().map(|r| r.dh).collect();
    let series = config
        .methods
        .iter()
        .enumerate()
        .map(|(k, &method)| MethodSeries {
            method,
            analytic: records.iter().map(|r| r.mses[k].analytic).collect(),
            empirical: records.iter().map(|r| r.mses[k].empirical).collect(),
            empirical_se: records.iter().map(|r| r.mses[k].empirical_se).collect(),
        })
        .collect();
    TrialBatch { config, dh, series }
}

/// Sorted-MSE curves: a full run with each method's series sorted
/// ascending, independently per method.
pub fn sorted_mse_curves(cfg: &SimConfig) -> Result<TrialBatch, SimError> {
    Ok(run_trials(cfg)?.sorted_ascending())
}

/// Averaged analytic MSE per method for each perturbation bound in
/// `eps_grid`. The per-trial perturbation streams are keyed by trial
/// index only, so grid points share their underlying draws (common random
/// numbers) and extending the grid never changes earlier columns.
///
/// Only analytic MSEs are averaged; no symbol draws are consumed.
pub fn epsilon_sweep(cfg: &SimConfig, eps_grid: &[f64]) -> Result<SweepResult, SimError> {
    let model = cfg.validate()?;
    if eps_grid.is_empty() {
        return Err(SimError::InvalidConfig {
            reason: "epsilon grid must not be empty".into(),
        });
    }
    for pair in eps_grid.windows(2) {
        if !(pair[0] < pair[1]) {
            return Err(SimError::InvalidConfig {
                reason: format!(
                    "epsilon grid must be strictly increasing, got {} then {}",
                    pair[0], pair[1]
                ),
            });
        }
    }
    if !(eps_grid[0] >= 0.0 && eps_grid.iter().all(|e| e.is_finite())) {
        return Err(SimError::InvalidConfig {
            reason: "epsilon grid values must be finite and >= 0".into(),
        });
    }

    let mut avg_mse = vec![Vec::with_capacity(eps_grid.len()); cfg.methods.len()];
    for &eps in eps_grid {
        let per_trial: Vec<Vec<f64>> = (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let dh = draw_dh(cfg, i, eps);
                let belief = ChannelBelief::new(cfg.true_h + dh, eps)?;
                cfg.methods
                    .iter()
                    .map(|&method| {
                        solve(&model, &belief, method)
                            .map(|report| mse(&report.equalizer, &model, cfg.true_h))
                            .map_err(|source| SimError::Trial { trial: i, source })
                    })
                    .collect()
            })
            .collect::<Result<_, _>>()?;
        for (k, column) in avg_mse.iter_mut().enumerate() {
            let sum: f64 = per_trial.iter().map(|row| row[k]).sum();
            column.push(sum / cfg.trials as f64);
        }
    }
    Ok(SweepResult {
        config: cfg.clone(),
        epsilons: eps_grid.to_vec(),
        methods: cfg.methods.clone(),
        avg_mse,
    })
}
