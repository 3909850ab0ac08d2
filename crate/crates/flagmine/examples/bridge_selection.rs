//! Resolve conflicting fuzziness settings: each cluster column traces a
//! bridge across the rows, and the maximum non-intersecting bridge set is a
//! temporally consistent column selection.
//!
//!     cargo run --release --example bridge_selection

use std::collections::{BTreeMap, BTreeSet};

use flagmine::cluster::FuzzyLaggedCluster;
use flagmine::postprocess::{bridges_intersect, bridges_of, max_nonintersecting_columns};

fn main() {
    // Five columns over four rows; the last bridge snakes across the rest.
    let bases = [3usize, 4, 5, 6, 7];
    let paths: [Vec<i64>; 5] = [
        vec![3, 3, 4, 3],
        vec![2, 2, 2, 2],
        vec![4, 4, 3, 4],
        vec![6, 6, 6, 6],
        vec![1, 5, 7, 5],
    ];
    let mut fuzz = BTreeMap::new();
    for (k, path) in paths.iter().enumerate() {
        for (row, &pos) in path.iter().enumerate() {
            let f = pos - bases[k] as i64;
            if f != 0 {
                fuzz.insert((row, bases[k]), f);
            }
        }
    }
    let cluster = FuzzyLaggedCluster {
        rows: vec![0, 1, 2, 3],
        lags: vec![0; 4],
        anchor: 0,
        cols: bases.to_vec(),
        fuzz,
        max_fuzz: 6,
        anti_rows: BTreeSet::new(),
        achieved_error: 0.0,
    };

    let bridges = bridges_of(&cluster, 10);
    for (a, bridge) in bridges.iter().enumerate() {
        let crossings: Vec<usize> = bridges
            .iter()
            .enumerate()
            .filter(|&(b, other)| a != b && bridges_intersect(bridge, other).unwrap())
            .map(|(b, _)| bases[b])
            .collect();
        println!("column {:>2} path {:?} crosses {:?}", bridge.col, bridge.path, crossings);
    }
    let picked = max_nonintersecting_columns(&cluster, 10);
    println!("maximum non-intersecting column set: {picked:?}");
}
