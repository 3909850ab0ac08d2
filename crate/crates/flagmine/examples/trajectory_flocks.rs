//! Classify interleaved synthetic flocks: the fuzzy miner separates them,
//! the fuzzless miner and a density baseline do not.
//!
//!     cargo run --release --example trajectory_flocks

use flagmine::cluster::Objective;
use flagmine::eval::{dbscan, labeling_f1, labeling_groups, DbscanConfig};
use flagmine::miner::{mine, FuzzBound, MinerConfig};
use flagmine::postprocess::merge_clusters;
use flagmine::synth::{gen_trajectory_groups, TrajectoryAxis, TrajectoryConfig};

fn config(fuzz: u32) -> MinerConfig {
    MinerConfig {
        error: 0.006,
        fuzz: FuzzBound::Uniform(fuzz),
        min_row_fraction: 0.2,
        min_col_fraction: 0.5,
        disc_set_size: 5,
        zero_fuzz_size: 0,
        iterations: 400,
        objective: Objective::Area,
        anti_correlation: false,
        min_present_fraction: 1.0,
        seed: 11,
        theoretical_col_fraction: None,
    }
}

fn main() {
    let data = gen_trajectory_groups(&TrajectoryConfig {
        groups: 4,
        members: 8,
        timesteps: 240,
        lag_spread: 4,
        fuzz_spread: 2,
        noise: 0.005,
        seed: 0,
        axis: TrajectoryAxis::XOnly,
    });
    println!("4 flocks x 8 members, followers lag 1-4 steps with jitter +-2");

    for fuzz in [2, 0] {
        let output = mine(&data.matrix, &config(fuzz)).expect("valid config");
        let groups = merge_clusters(&output.clusters);
        println!(
            "miner fuzziness {fuzz}: {} clusters merge into {} groups",
            output.clusters.len(),
            groups.len()
        );
    }

    // Density baseline over whole trajectories (columns present everywhere).
    let full_cols: Vec<usize> = (0..data.matrix.cols())
        .filter(|&j| (0..data.matrix.rows()).all(|i| !data.matrix.is_missing(i, j)))
        .collect();
    let points: Vec<Vec<f64>> = (0..data.matrix.rows())
        .map(|i| full_cols.iter().map(|&j| data.matrix.get(i, j).unwrap()).collect())
        .collect();
    let mut best = (0.0f64, 0.0, 0);
    for eps in [1.0, 2.0, 4.0, 8.0, 16.0, 32.0] {
        for min_pts in [2, 3, 4] {
            let labels = dbscan(&points, &DbscanConfig { eps, min_pts });
            let f1 = labeling_f1(&labeling_groups(&labels), &data.labels);
            if f1 > best.0 {
                best = (f1, eps, min_pts);
            }
        }
    }
    println!(
        "density baseline best F1 over the grid: {:.3} (eps {}, min_pts {})",
        best.0, best.1, best.2
    );
}
