//! The evaluation toolbox: cell-level agreement, F1, normalized entropy,
//! coverage, and the density baseline on a toy geometry.
//!
//!     cargo run --release --example evaluate_metrics

use std::collections::BTreeSet;

use flagmine::eval::{
    coverage, dbscan, f1_score, labeling_groups, normalized_entropy, rnia_complement, CellSet,
    DbscanConfig,
};

fn main() {
    let a: CellSet = [(0, 0), (0, 1), (1, 0), (1, 1)].into_iter().collect();
    let b: CellSet = [(0, 1), (1, 1), (0, 2), (1, 2)].into_iter().collect();
    println!("cell agreement of two overlapping 2x2 clusters: {:.3}", rnia_complement(&a, &b).unwrap());

    let truth: BTreeSet<usize> = (0..4).collect();
    let wide: BTreeSet<usize> = (0..8).collect();
    println!("F1 with recall 1.0 and precision 0.5: {:.3}", f1_score(&wide, &truth));

    let labels = vec![0, 0, 0, 1, 1, 1, 1, 1];
    for group in [vec![0, 1, 3, 4], vec![0, 1, 2, 3]] {
        println!(
            "entropy of a {:?} split: {:.3}",
            group,
            normalized_entropy(&[group.clone()], &labels, 2).unwrap()
        );
    }

    let members: BTreeSet<usize> = (0..37).collect();
    println!("coverage of 10/37 members: {:.3}", coverage(&[(0..10).collect()], &members));

    // Two tight blobs and one stray point.
    let mut points: Vec<Vec<f64>> = Vec::new();
    for i in 0..5 {
        points.push(vec![0.1 * i as f64, 0.0]);
        points.push(vec![10.0 + 0.1 * i as f64, 5.0]);
    }
    points.push(vec![100.0, 100.0]);
    let assignment = dbscan(&points, &DbscanConfig { eps: 0.5, min_pts: 3 });
    let groups = labeling_groups(&assignment);
    println!(
        "density clustering found {} blobs and {} noise point(s)",
        groups.len(),
        assignment.iter().filter(|l| l.is_none()).count()
    );
}
