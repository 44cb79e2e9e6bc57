//! Faction formation as a function of network size and initial bias.
//!
//! For every `(n, ave)` cell, entries of `X(0)` are drawn uniformly from
//! `[ave - 1, ave + 1]`, the homophily model runs for `horizon` steps and the
//! factions of the final state are counted.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generators::gen_uniform_interval;
use super::rng::{trial_seed, RngStream};
use crate::balance::{faction_count, FactionCount};
use crate::dynamics::{simulate, ModelKind, SimConfig};
use crate::error::{Error, Result};
use crate::matrix::ToleranceConfig;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepGrid {
    pub n_values: Vec<usize>,
    pub ave_values: Vec<f64>,
    pub samples_per_cell: usize,
    pub horizon: usize,
}

impl Default for SweepGrid {
    fn default() -> Self {
        Self {
            n_values: vec![4, 8, 16, 32],
            ave_values: vec![0.0, 0.25, 0.5, 0.75, 1.0],
            samples_per_cell: 30,
            horizon: 500,
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::ParameterOutOfRange(m));
        if self.n_values.is_empty() || self.n_values.contains(&0) {
            return bad("n_values must be nonempty and positive".into());
        }
        if let Some(a) = self.ave_values.iter().find(|a| !(**a >= 0.0) || !a.is_finite()) {
            return bad(format!("ave {a} must be finite and nonnegative"));
        }
        if self.ave_values.is_empty() || self.samples_per_cell == 0 || self.horizon == 0 {
            return bad("ave_values, samples_per_cell and horizon must be nonempty/positive".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellClass {
    AllOneFaction,
    AllTwoFactions,
    Mixed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepCell {
    pub n: usize,
    pub ave: f64,
    pub x_min: f64,
    pub x_max: f64,
    pub samples: usize,
    pub one_faction: usize,
    pub two_factions: usize,
    /// Final states that were not a single balanced component.
    pub indeterminate: usize,
    pub class: CellClass,
}

impl SweepCell {
    pub fn two_faction_fraction(&self) -> f64 {
        self.two_factions as f64 / self.samples as f64
    }
}

/// Faction count of the final state when it is one balanced component.
fn sample_outcome(
    n: usize,
    ave: f64,
    horizon: usize,
    stream: RngStream,
    tol: &ToleranceConfig,
) -> Result<Option<usize>> {
    let x0 = gen_uniform_interval(n, ave - 1.0, ave + 1.0, &mut stream.rng())?;
    let cfg = SimConfig {
        max_steps: horizon,
        convergence_tol: 0.0,
        record_every: horizon,
        balance_check: false,
    };
    let traj = simulate(&x0, ModelKind::Hbm, &cfg, tol)?;
    Ok(match faction_count(traj.final_state(), tol).as_slice() {
        [FactionCount::Count(k)] => Some(*k),
        _ => None,
    })
}

pub fn faction_sweep(grid: &SweepGrid, master_seed: u64, tol: &ToleranceConfig) -> Result<Vec<SweepCell>> {
    grid.validate()?;
    let mut cells = Vec::with_capacity(grid.n_values.len() * grid.ave_values.len());
    for (ni, &n) in grid.n_values.iter().enumerate() {
        for (ai, &ave) in grid.ave_values.iter().enumerate() {
            let cell_seed = trial_seed(master_seed, (ni * grid.ave_values.len() + ai) as u64);
            let outcomes = (0..grid.samples_per_cell as u64)
                .into_par_iter()
                .map(|s| sample_outcome(n, ave, grid.horizon, RngStream::for_trial(cell_seed, s), tol))
                .collect::<Result<Vec<_>>>()?;
            let count = |k| outcomes.iter().filter(|o| **o == Some(k)).count();
            let (one, two) = (count(1), count(2));
            let samples = grid.samples_per_cell;
            let class = if one == samples {
                CellClass::AllOneFaction
            } else if two == samples {
                CellClass::AllTwoFactions
            } else {
                CellClass::Mixed
            };
            cells.push(SweepCell {
                n,
                ave,
                x_min: ave - 1.0,
                x_max: ave + 1.0,
                samples,
                one_faction: one,
                two_factions: two,
                indeterminate: samples - one - two,
                class,
            });
        }
    }
    Ok(cells)
}
