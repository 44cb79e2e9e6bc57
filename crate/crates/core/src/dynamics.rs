//! Discrete-time appraisal dynamics.
//!
//! Both models normalize each row by its L1 norm:
//!
//! * homophily: `X+ = diag(|X| 1)^-1 X X^T`
//! * influence: `X+ = diag(|X| 1)^-1 X X`
//! * homophily with memory: `X+ = eps * hbm(X) + (1 - eps) * X`
//!
//! A row whose L1 norm falls to `zero_tol * max_norm(X)` or below makes the
//! map undefined; the step then reports [`StepOutcome::ZeroRow`].

use serde::{Deserialize, Serialize};

use crate::balance::is_socially_balanced;
use crate::error::{Error, Result};
use crate::matrix::{AppraisalMatrix, SignPattern, ToleranceConfig};

/// Which update map to iterate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelKind {
    Hbm,
    Ibm,
    HbmMemory { epsilon: f64 },
}

impl ModelKind {
    pub fn hbm_memory(epsilon: f64) -> Result<Self> {
        check_epsilon(epsilon)?;
        Ok(Self::HbmMemory { epsilon })
    }

    pub fn step(&self, x: &AppraisalMatrix, tol: &ToleranceConfig) -> Result<StepOutcome> {
        match *self {
            Self::Hbm => Ok(hbm_step(x, tol)),
            Self::Ibm => Ok(ibm_step(x, tol)),
            Self::HbmMemory { epsilon } => hbm_memory_step(x, epsilon, tol),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Hbm => "hbm",
            Self::Ibm => "ibm",
            Self::HbmMemory { .. } => "hbm-memory",
        }
    }
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon <= 1.0 {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(epsilon))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum StepOutcome {
    Next(AppraisalMatrix),
    /// Row `0` of the input had (numerically) zero L1 norm.
    ZeroRow(usize),
}

impl StepOutcome {
    pub fn next(self) -> Option<AppraisalMatrix> {
        match self {
            Self::Next(x) => Some(x),
            Self::ZeroRow(_) => None,
        }
    }
}

/// Row L1 norms, or the first row whose norm is at or below the threshold.
fn row_norms(x: &AppraisalMatrix, tol: &ToleranceConfig) -> std::result::Result<Vec<f64>, usize> {
    let thr = tol.zero_threshold(x);
    let norms: Vec<f64> = (0..x.n()).map(|i| x.row_abs_sum(i)).collect();
    match norms.iter().position(|&s| s <= thr || s == 0.0) {
        Some(i) => Err(i),
        None => Ok(norms),
    }
}

pub fn hbm_step(x: &AppraisalMatrix, tol: &ToleranceConfig) -> StepOutcome {
    let norms = match row_norms(x, tol) {
        Ok(v) => v,
        Err(i) => return StepOutcome::ZeroRow(i),
    };
    let n = x.n();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        let ri = x.row(i);
        for j in i..n {
            let g: f64 = ri.iter().zip(x.row(j)).map(|(a, b)| a * b).sum();
            out[i * n + j] = g / norms[i];
            out[j * n + i] = g / norms[j];
        }
    }
    finish(n, out)
}

pub fn ibm_step(x: &AppraisalMatrix, tol: &ToleranceConfig) -> StepOutcome {
    let norms = match row_norms(x, tol) {
        Ok(v) => v,
        Err(i) => return StepOutcome::ZeroRow(i),
    };
    let n = x.n();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        let dst = &mut out[i * n..(i + 1) * n];
        for (k, &xik) in x.row(i).iter().enumerate() {
            if xik == 0.0 {
                continue;
            }
            for (d, &xkj) in dst.iter_mut().zip(x.row(k)) {
                *d += xik * xkj;
            }
        }
        let inv = norms[i].recip();
        dst.iter_mut().for_each(|d| *d *= inv);
    }
    finish(n, out)
}

pub fn hbm_memory_step(
    x: &AppraisalMatrix,
    epsilon: f64,
    tol: &ToleranceConfig,
) -> Result<StepOutcome> {
    check_epsilon(epsilon)?;
    let h = match hbm_step(x, tol) {
        StepOutcome::Next(h) => h,
        zero => return Ok(zero),
    };
    if epsilon == 1.0 {
        return Ok(StepOutcome::Next(h));
    }
    let data = h
        .as_slice()
        .iter()
        .zip(x.as_slice())
        .map(|(a, b)| epsilon * a + (1.0 - epsilon) * b)
        .collect();
    Ok(finish(x.n(), data))
}

fn finish(n: usize, data: Vec<f64>) -> StepOutcome {
    // Row normalization keeps every entry bounded by max_norm(X), so a
    // non-finite value cannot appear from finite input.
    StepOutcome::Next(AppraisalMatrix::from_parts(n, data).expect("step map produced non-finite entry"))
}

/// Iteration limits and recording options for [`simulate`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub max_steps: usize,
    /// Stop once `max_norm(X(t+1) - X(t)) <= convergence_tol * max_norm(X(0))`.
    pub convergence_tol: f64,
    /// Keep every `record_every`-th state (the final state is always kept).
    pub record_every: usize,
    pub balance_check: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            max_steps: 10_000,
            convergence_tol: 1e-12,
            record_every: 1,
            balance_check: true,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_steps == 0 || self.record_every == 0 {
            return Err(Error::ParameterOutOfRange(
                "max_steps and record_every must be at least 1".into(),
            ));
        }
        if !(self.convergence_tol >= 0.0) {
            return Err(Error::ParameterOutOfRange(
                "convergence_tol must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepSummary {
    pub t: usize,
    pub max_norm: f64,
    pub min_abs: f64,
    pub balanced: bool,
    pub sign_changed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StopReason {
    Converged,
    BudgetExhausted,
    /// The state at time `t` had a zero row, so `X(t + 1)` is undefined.
    ZeroRowEncountered { t: usize, row: usize },
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub model: ModelKind,
    /// `(t, X(t))` for every recorded state, in order.
    pub states: Vec<(usize, AppraisalMatrix)>,
    pub summaries: Vec<StepSummary>,
    pub stop_reason: StopReason,
    pub balance_time: Option<usize>,
    /// Set when the influence model was started outside its invariant domain.
    pub outside_domain: bool,
}

impl Trajectory {
    pub fn final_state(&self) -> &AppraisalMatrix {
        &self.states.last().expect("trajectory always records X(0)").1
    }

    /// Time index of the last recorded state.
    pub fn final_time(&self) -> usize {
        self.summaries.last().map_or(0, |s| s.t)
    }
}

fn summarize(
    t: usize,
    x: &AppraisalMatrix,
    prev: Option<&SignPattern>,
    cfg: &SimConfig,
    tol: &ToleranceConfig,
) -> (StepSummary, SignPattern) {
    let signs = x.sign_pattern(tol);
    let summary = StepSummary {
        t,
        max_norm: x.max_norm(),
        min_abs: x.min_abs(),
        balanced: cfg.balance_check && is_socially_balanced(x, tol).balanced,
        sign_changed: prev.is_some_and(|p| *p != signs),
    };
    (summary, signs)
}

/// Iterates `model` from `x0` until convergence, the step budget, or a zero row.
pub fn simulate(
    x0: &AppraisalMatrix,
    model: ModelKind,
    cfg: &SimConfig,
    tol: &ToleranceConfig,
) -> Result<Trajectory> {
    cfg.validate()?;
    if let ModelKind::HbmMemory { epsilon } = model {
        check_epsilon(epsilon)?;
    }
    let outside_domain = matches!(model, ModelKind::Ibm) && !x0.is_rs_symm_pos(tol);
    let stop_at = cfg.convergence_tol * x0.max_norm();

    let (first, mut signs) = summarize(0, x0, None, cfg, tol);
    let mut summaries = vec![first];
    let mut states = vec![(0, x0.clone())];
    let mut x = x0.clone();
    let mut last_recorded = 0;
    let mut stop_reason = StopReason::BudgetExhausted;

    for t in 1..=cfg.max_steps {
        let next = match model.step(&x, tol)? {
            StepOutcome::Next(next) => next,
            StepOutcome::ZeroRow(row) => {
                stop_reason = StopReason::ZeroRowEncountered { t: t - 1, row };
                break;
            }
        };
        let diff = next.max_abs_diff(&x);
        let (summary, next_signs) = summarize(t, &next, Some(&signs), cfg, tol);
        summaries.push(summary);
        signs = next_signs;
        x = next;
        if t % cfg.record_every == 0 {
            states.push((t, x.clone()));
            last_recorded = t;
        }
        if diff <= stop_at {
            stop_reason = StopReason::Converged;
            break;
        }
    }
    let final_t = summaries.last().map_or(0, |s| s.t);
    if last_recorded != final_t {
        states.push((final_t, x));
    }

    let balance_time = if summaries.last().is_some_and(|s| s.balanced) {
        let run = summaries.iter().rev().take_while(|s| s.balanced).count();
        Some(summaries[summaries.len() - run].t)
    } else {
        None
    };

    Ok(Trajectory {
        model,
        states,
        summaries,
        stop_reason,
        balance_time,
        outside_domain,
    })
}

/// `max_norm` never increases between consecutive summaries, up to a
/// relative slack of `rel_tol`.
pub fn max_norm_monotone_check(traj: &Trajectory, tol: &ToleranceConfig) -> bool {
    traj.summaries
        .windows(2)
        .all(|w| w[1].max_norm <= w[0].max_norm * (1.0 + tol.rel_tol) + tol.abs_tol)
}

/// Two-step contraction factor of `max_norm - min_abs` for the homophily
/// model once the sign pattern is balanced: `1 - min_abs^2 / (n^2 max_norm^2)`.
pub fn contraction_rate_bound_hbm(x: &AppraisalMatrix) -> Result<f64> {
    let (lo, hi) = nonzero_extremes(x)?;
    let n = x.n() as f64;
    Ok(1.0 - (lo * lo) / (n * n * hi * hi))
}

/// One-step contraction factor of every column spread
/// `max_l |X_lj| - min_l |X_lj|` for the influence model once balanced:
/// `1 - min_abs / (n max_norm)`.
pub fn contraction_rate_bound_ibm(x: &AppraisalMatrix) -> Result<f64> {
    let (lo, hi) = nonzero_extremes(x)?;
    Ok(1.0 - lo / (x.n() as f64 * hi))
}

fn nonzero_extremes(x: &AppraisalMatrix) -> Result<(f64, f64)> {
    let lo = x.min_abs();
    if lo == 0.0 {
        return Err(Error::ZeroEntry);
    }
    Ok((lo, x.max_norm()))
}

/// `max_l |X_lj| - min_l |X_lj|` for every column `j`.
pub fn column_spreads(x: &AppraisalMatrix) -> Vec<f64> {
    (0..x.n())
        .map(|j| {
            let (lo, hi) = (0..x.n()).fold((f64::INFINITY, 0.0f64), |(lo, hi), i| {
                let v = x.get(i, j).abs();
                (lo.min(v), hi.max(v))
            });
            hi - lo
        })
        .collect()
}
