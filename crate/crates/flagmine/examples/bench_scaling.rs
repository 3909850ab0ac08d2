//! Per-phase timings across matrix widths: the row phase grows roughly
//! linearly in the column count.
//!
//!     cargo run --release --example bench_scaling

use flagmine::cluster::Objective;
use flagmine::matrix::Domain;
use flagmine::miner::{mine, FuzzBound, MinerConfig};
use flagmine::synth::gen_random_matrix;

fn main() {
    let rows = 200;
    println!("{:>6} {:>14} {:>14}", "n", "row phase ms", "col phase ms");
    let mut previous: Option<f64> = None;
    for n in [250usize, 500, 1000, 2000] {
        let matrix = gen_random_matrix(rows, n, 0.0, 1.0, 3, Domain::AdditiveLogged);
        let config = MinerConfig {
            error: 0.002,
            fuzz: FuzzBound::Uniform(1),
            min_row_fraction: 0.3,
            min_col_fraction: 0.3,
            disc_set_size: 5,
            zero_fuzz_size: 3,
            iterations: 60,
            objective: Objective::Area,
            anti_correlation: false,
            min_present_fraction: 0.5,
            seed: 9,
            theoretical_col_fraction: None,
        };
        let output = mine(&matrix, &config).expect("valid config");
        let row_ms = output.stats.row_phase_nanos as f64 / 1e6;
        let col_ms = output.stats.col_phase_nanos as f64 / 1e6;
        print!("{n:>6} {row_ms:>14.2} {col_ms:>14.2}");
        if let Some(prev) = previous {
            print!("   x{:.2} vs previous n", row_ms / prev);
        }
        println!();
        previous = Some(row_ms);
    }
}
