//! Monte Carlo estimation of the probability that appraisals stay bounded
//! away from zero.
//!
//! A trial draws `X(0)`, iterates the model up to `horizon_check_end`, and
//! scores `Z = 1` iff `min_abs(X(t)) >= floor` for every `t` in
//! `[horizon_check_start, horizon_check_end]`. Trials run in parallel; each
//! owns an RNG derived from `(master_seed, trial index)`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::{gen_rs_symm, gen_uniform_interval, gen_uniform_nzrow};
use super::rng::RngStream;
use crate::dynamics::{simulate, ModelKind, SimConfig, StopReason};
use crate::error::{Error, Result};
use crate::matrix::{AppraisalMatrix, ToleranceConfig};

/// Least `N` with `N >= ln(2 / xi) / (2 epsilon^2)`.
pub fn chernoff_sample_size(epsilon: f64, xi: f64) -> Result<u64> {
    for (name, v) in [("epsilon", epsilon), ("xi", xi)] {
        if !(v > 0.0 && v < 1.0) {
            return Err(Error::ParameterOutOfRange(format!("{name} = {v} not in (0, 1)")));
        }
    }
    Ok(((2.0 / xi).ln() / (2.0 * epsilon * epsilon)).ceil() as u64)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InitKind {
    UniformNzRow { a: f64 },
    RsSymm,
    UniformInterval { x_min: f64, x_max: f64 },
}

impl InitKind {
    pub fn sample(&self, n: usize, stream: RngStream, tol: &ToleranceConfig) -> Result<AppraisalMatrix> {
        let mut rng = stream.rng();
        match *self {
            Self::UniformNzRow { a } => gen_uniform_nzrow(n, a, &mut rng, tol),
            Self::RsSymm => gen_rs_symm(n, &mut rng),
            Self::UniformInterval { x_min, x_max } => gen_uniform_interval(n, x_min, x_max, &mut rng),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct McConfig {
    pub n: usize,
    pub model: ModelKind,
    pub trials: u64,
    pub horizon_check_start: usize,
    pub horizon_check_end: usize,
    pub floor: f64,
    pub master_seed: u64,
    pub init_kind: InitKind,
    pub record_trials: bool,
}

impl McConfig {
    pub fn new(n: usize, model: ModelKind, init_kind: InitKind, trials: u64, master_seed: u64) -> Self {
        Self {
            n,
            model,
            trials,
            horizon_check_start: 100,
            horizon_check_end: 1000,
            floor: 1e-3,
            master_seed,
            init_kind,
            record_trials: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::ParameterOutOfRange(msg.to_string()));
        if self.n == 0 {
            return bad("n must be at least 1");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.horizon_check_start >= self.horizon_check_end {
            return bad("horizon_check_start must be below horizon_check_end");
        }
        if !(self.floor > 0.0) {
            return bad("floor must be positive");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub z: u8,
    pub balance_time: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McResult {
    pub p_hat: f64,
    pub std_err: f64,
    pub trials: u64,
    pub successes: u64,
    pub per_trial: Option<Vec<TrialRecord>>,
}

impl McResult {
    pub fn from_counts(successes: u64, trials: u64, per_trial: Option<Vec<TrialRecord>>) -> Self {
        let p_hat = successes as f64 / trials as f64;
        Self {
            p_hat,
            std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(),
            trials,
            successes,
            per_trial,
        }
    }
}

/// Non-vanishing indicator `Z` of a single initial condition, plus the time
/// from which the trajectory stayed balanced (if it ended balanced).
pub fn non_vanishing_indicator(
    x0: &AppraisalMatrix,
    model: ModelKind,
    cfg: &McConfig,
    tol: &ToleranceConfig,
) -> Result<(u8, Option<usize>)> {
    cfg.validate()?;
    let sim = SimConfig {
        max_steps: cfg.horizon_check_end,
        // only stop early on an exact fixed point
        convergence_tol: 0.0,
        record_every: cfg.horizon_check_end,
        balance_check: true,
    };
    let traj = simulate(x0, model, &sim, tol)?;
    if let StopReason::ZeroRowEncountered { .. } = traj.stop_reason {
        return Ok((0, None));
    }
    // A trajectory that stopped early sits on an exact fixed point, so its
    // final value persists through the rest of the window.
    let window_min = traj
        .summaries
        .iter()
        .filter(|s| s.t >= cfg.horizon_check_start)
        .map(|s| s.min_abs)
        .chain(std::iter::once(traj.final_state().min_abs()))
        .fold(f64::INFINITY, f64::min);
    Ok((u8::from(window_min >= cfg.floor), traj.balance_time))
}

pub fn run_trial(cfg: &McConfig, trial: u64, tol: &ToleranceConfig) -> Result<TrialRecord> {
    let stream = RngStream::for_trial(cfg.master_seed, trial);
    let x0 = cfg.init_kind.sample(cfg.n, stream, tol)?;
    let (z, balance_time) = non_vanishing_indicator(&x0, cfg.model, cfg, tol)?;
    Ok(TrialRecord {
        trial,
        seed: stream.seed,
        z,
        balance_time,
    })
}

pub fn mc_convergence_probability(cfg: &McConfig, tol: &ToleranceConfig) -> Result<McResult> {
    cfg.validate()?;
    let records = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_trial(cfg, trial, tol))
        .collect::<Result<Vec<_>>>()?;
    let successes = records.iter().map(|r| u64::from(r.z)).sum();
    Ok(McResult::from_counts(
        successes,
        cfg.trials,
        cfg.record_trials.then_some(records),
    ))
}
