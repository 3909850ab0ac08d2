//! flagmine mines fuzzy lagged co-clusters from real-valued matrices.
//!
//! A fuzzy lagged co-cluster is a set of rows with per-row lags over a set of
//! columns, where each entry may additionally drift a bounded number of
//! columns off its lagged position, and the values follow an additive
//! row-plus-column model up to a Chebyshev error bound. The miner grows
//! random seeds with a sliding-window test, which keeps every iteration
//! polynomial and makes the runs embarrassingly parallel.
//!
//! The crate ships the miner itself ([`miner`]), the data model and
//! verification ([`matrix`], [`cluster`], [`profile`], [`verify`]),
//! synthetic benchmarks ([`synth`]), quality metrics with a density-based
//! baseline ([`eval`]), post-processing ([`postprocess`]), file formats
//! ([`io`]) and the batch CLI ([`cli`]). See the `examples/` directory for
//! one runnable program per capability.

pub mod cli;
pub mod cluster;
pub mod eval;
pub mod io;
pub mod matrix;
pub mod miner;
pub mod postprocess;
pub mod profile;
pub mod synth;
pub mod verify;

pub use cluster::{objective_score, FuzzyLaggedCluster, Objective};
pub use matrix::{DataMatrix, Domain};
pub use miner::{
    default_disc_set_size, default_iterations, disc_prob, expected_hit_rate, mine, FuzzBound,
    MinerConfig,
};
pub use profile::{brute_force_error, fit_profiles, two_row_error, ProfilePair, TwoRowFit};
pub use synth::{artifact_probability, gen_random_matrix, gen_trajectory_groups, plant_cluster};
pub use verify::{verify_cluster, VerifyOutcome};
