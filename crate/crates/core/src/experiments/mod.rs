//! Randomized and scripted experiments built on the dynamics.

pub mod generators;
pub mod monte_carlo;
pub mod perturbation;
pub mod rng;
pub mod sweep;

pub use generators::{gen_rs_symm, gen_rs_symm_with_gamma, gen_uniform_interval, gen_uniform_nzrow, RsSymmSample};
pub use monte_carlo::{
    chernoff_sample_size, mc_convergence_probability, non_vanishing_indicator, run_trial, InitKind, McConfig,
    McResult, TrialRecord,
};
pub use perturbation::{
    ally_competition_scenario, apply_single_link, build_block_balanced, relation_is, two_subgraph_base, AllyParams,
    AllyPredictions, BlockSpec, PerturbationScenario, TwoSubgraphBase,
};
pub use rng::{trial_seed, RngStream};
pub use sweep::{faction_sweep, CellClass, SweepCell, SweepGrid};
