//! Plant a fuzzy lagged cluster into a random matrix and mine it back.
//!
//!     cargo run --release --example mine_planted

use flagmine::cluster::Objective;
use flagmine::eval::rnia_complement;
use flagmine::matrix::Domain;
use flagmine::miner::{default_iterations, mine, FuzzBound, MinerConfig};
use flagmine::synth::{gen_random_matrix, plant_cluster, PlantSpec};

fn main() {
    let (rows, cols) = (80, 80);
    let error = 0.004; // Chebyshev bound in the additive domain
    let base = gen_random_matrix(rows, cols, 0.0, 1.0, 42, Domain::AdditiveLogged);
    let spec = PlantSpec::new(0.5, 0.5, error, 1, 7);
    let (matrix, truth) = plant_cluster(&base, &spec).expect("plant fits");
    println!(
        "planted {} rows x {} cols at fuzziness {} (anchor row {})",
        truth.cluster.size_i(),
        truth.cluster.size_j(),
        truth.cluster.max_fuzz,
        truth.cluster.anchor
    );

    let config = MinerConfig {
        error,
        fuzz: FuzzBound::Uniform(1),
        min_row_fraction: 0.5,
        min_col_fraction: 0.5,
        disc_set_size: 4,
        zero_fuzz_size: 2,
        iterations: default_iterations(0.5, 0.5, 4, flagmine::miner::disc_prob(4))
            .expect("within the cap"),
        objective: Objective::Area,
        anti_correlation: false,
        min_present_fraction: 0.5,
        seed: 1,
        theoretical_col_fraction: None,
    };
    println!("mining with {} iterations...", config.iterations);
    let output = mine(&matrix, &config).expect("valid config");
    println!(
        "mined {} clusters ({} candidates, row phase {:.1} ms)",
        output.clusters.len(),
        output.stats.candidates,
        output.stats.row_phase_nanos as f64 / 1e6
    );

    let truth_cells = truth.cluster.cells(cols);
    let best = output
        .clusters
        .iter()
        .map(|c| (rnia_complement(&c.cells(cols), &truth_cells).unwrap_or(0.0), c))
        .max_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    match best {
        Some((score, cluster)) => {
            println!(
                "best recovery: 1-RNIA {score:.3}, {} rows x {} cols, error {:.4}",
                cluster.size_i(),
                cluster.size_j(),
                cluster.achieved_error
            );
            println!("rows match the plant: {}", cluster.rows == truth.cluster.rows);
        }
        None => println!("no cluster recovered; try more iterations"),
    }
}
