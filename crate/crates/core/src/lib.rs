//! Birthday-problem collision probabilities for very large discrete spaces.
//!
//! The central quantity is `B(t, p)`, the probability that `p` uniform draws
//! with replacement from `t` equally likely items contain a repeat. The crate
//! evaluates it (in log-survival form, with error bounds), inverts it in
//! either argument, and applies it to fingerprint feature spaces as a random
//! overlap probability for named populations.

pub mod collision;
pub mod dataset;
mod error;
pub mod faulhaber;
pub mod galton;
pub mod rop;
pub mod solve;
mod space;
pub mod summation;

pub use collision::{
    collision_probability, is_pigeonhole, pair_count, survival_log_exact, survival_log_series,
    EvalMethod, EvalResult, Evaluator, SeriesEstimate,
};
pub use dataset::{load_populations, read_populations, write_populations, LoadOptions};
pub use error::{DatasetError, Error, Result};
pub use galton::{space_size, FeatureSpace, GaltonModel, RegionModel};
pub use rop::{display_probability, format_percent, rop, rop_table, PopulationRecord, RopEntry};
pub use solve::{
    gamma_x, solve_population, solve_space, SolveTarget, WorldPopulation, DEFAULT_WORLD_POPULATION,
};
pub use space::{Population, SpaceSize, MAX_SPACE};
