//! Property tests for the pure-function invariants.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use flagmine::cluster::{objective_score, FuzzyLaggedCluster, Objective};
use flagmine::eval::{f1_score, normalized_entropy, rnia_complement, CellSet};
use flagmine::postprocess::merge_clusters;
use flagmine::profile::{brute_force_error, fit_profiles, two_row_error};
use flagmine::synth::artifact_probability;

fn rows_cluster(rows: Vec<usize>) -> FuzzyLaggedCluster {
    FuzzyLaggedCluster {
        lags: vec![0; rows.len()],
        anchor: rows[0],
        rows,
        cols: vec![0, 1],
        fuzz: BTreeMap::new(),
        max_fuzz: 0,
        anti_rows: BTreeSet::new(),
        achieved_error: 0.0,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn two_row_error_is_half_the_diff_spread(
        pairs in prop::collection::vec((-1e3f64..1e3, -1e3f64..1e3), 2..12),
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let fit = two_row_error(&a, &b, None).unwrap();
        let diffs: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let spread = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
            - diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        prop_assert!((fit.error - spread / 2.0).abs() <= 1e-9 * (1.0 + spread));
    }

    #[test]
    fn two_row_error_ignores_column_order(
        pairs in prop::collection::vec((-10f64..10.0, -10f64..10.0), 2..10),
        seed in 0u64..1000,
    ) {
        use rand::prelude::*;
        let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let base = two_row_error(&a, &b, None).unwrap();
        let mut idx: Vec<usize> = (0..a.len()).collect();
        idx.shuffle(&mut rand_chacha::ChaCha12Rng::seed_from_u64(seed));
        let pa: Vec<f64> = idx.iter().map(|&j| a[j]).collect();
        let pb: Vec<f64> = idx.iter().map(|&j| b[j]).collect();
        let perm = two_row_error(&pa, &pb, None).unwrap();
        prop_assert!((base.error - perm.error).abs() <= 1e-12);
        prop_assert!((base.diff_midrange - perm.diff_midrange).abs() <= 1e-12);
    }

    #[test]
    fn shifting_a_row_moves_only_the_midrange(
        pairs in prop::collection::vec((-10f64..10.0, -10f64..10.0), 2..10),
        shift in -50f64..50.0,
    ) {
        let a: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let b: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        let moved: Vec<f64> = b.iter().map(|v| v + shift).collect();
        let base = two_row_error(&a, &b, None).unwrap();
        let after = two_row_error(&a, &moved, None).unwrap();
        prop_assert!((base.error - after.error).abs() <= 1e-9);
        prop_assert!((after.diff_midrange - (base.diff_midrange - shift)).abs() <= 1e-9);
    }

    #[test]
    fn anchored_fit_never_beats_its_grid_oracle(
        values in prop::collection::vec(-5f64..5.0, 12),
    ) {
        let missing = vec![false; 12];
        let fit = fit_profiles(&values, &missing, 3, 4, 1e-9, 500).unwrap();
        let grid = brute_force_error(&values, &missing, 3, 4, 1e-3).unwrap();
        prop_assert!(fit.error <= grid + 1e-9);
    }

    #[test]
    fn objective_scores_grow_in_both_dimensions(
        a in 2usize..30,
        b in 2usize..30,
        psi in 0.05f64..0.95,
    ) {
        for kind in [Objective::Area, Objective::Perimeter, Objective::Psi(psi)] {
            let base = objective_score(a, b, kind).unwrap();
            prop_assert!(objective_score(a + 1, b, kind).unwrap() > base);
            prop_assert!(objective_score(a, b + 1, kind).unwrap() > base);
        }
    }

    #[test]
    fn rnia_symmetric_and_exact_only_on_equal_sets(
        a in prop::collection::btree_set((0usize..12, 0usize..12), 1..20),
        b in prop::collection::btree_set((0usize..12, 0usize..12), 1..20),
    ) {
        let a: CellSet = a.into_iter().collect();
        let b: CellSet = b.into_iter().collect();
        let ab = rnia_complement(&a, &b).unwrap();
        let ba = rnia_complement(&b, &a).unwrap();
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        prop_assert_eq!(ab == 1.0, a == b);
    }

    #[test]
    fn f1_symmetric_under_error_swap_and_bounded(
        a in prop::collection::btree_set(0usize..30, 0..20),
        b in prop::collection::btree_set(0usize..30, 0..20),
    ) {
        let ab = f1_score(&a, &b);
        let ba = f1_score(&b, &a);
        prop_assert_eq!(ab, ba);
        prop_assert!((0.0..=1.0).contains(&ab));
        if !a.is_empty() && !b.is_empty() {
            let tp = a.intersection(&b).count() as f64;
            let precision = tp / a.len() as f64;
            let recall = tp / b.len() as f64;
            prop_assert!(ab <= (2.0 * precision).min(2.0 * recall) + 1e-12);
        }
    }

    #[test]
    fn entropy_in_range_and_refinement_never_increases(
        labels in prop::collection::vec(0usize..3, 6..24),
        split_at in 1usize..5,
    ) {
        let objects: Vec<usize> = (0..labels.len()).collect();
        let whole = normalized_entropy(&[objects.clone()], &labels, 3).unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&whole));
        // Split into pure per-class groups: entropy drops to zero.
        let mut pure: Vec<Vec<usize>> = vec![Vec::new(); 3];
        for (obj, &label) in labels.iter().enumerate() {
            pure[label].push(obj);
        }
        let pure: Vec<Vec<usize>> = pure.into_iter().filter(|g| !g.is_empty()).collect();
        let refined = normalized_entropy(&pure, &labels, 3).unwrap();
        prop_assert!(refined <= whole + 1e-12);
        prop_assert!(refined.abs() <= 1e-12);
        // Any two-way split is no worse than the single cluster on average.
        let cut = split_at.min(labels.len() - 1);
        let parts = vec![objects[..cut].to_vec(), objects[cut..].to_vec()];
        let split = normalized_entropy(&parts, &labels, 3).unwrap();
        prop_assert!(split <= whole + 1e-12);
    }

    #[test]
    fn merging_is_idempotent_and_order_free(
        groups in prop::collection::vec(prop::collection::btree_set(0usize..20, 2..6), 1..8),
    ) {
        let clusters: Vec<FuzzyLaggedCluster> =
            groups.iter().map(|g| rows_cluster(g.iter().copied().collect())).collect();
        let merged = merge_clusters(&clusters);
        let again: Vec<FuzzyLaggedCluster> =
            merged.iter().map(|g| rows_cluster(g.rows.clone())).collect();
        let twice = merge_clusters(&again);
        let rows_of = |gs: &[flagmine::postprocess::MergedGroup]| -> Vec<Vec<usize>> {
            gs.iter().map(|g| g.rows.clone()).collect()
        };
        prop_assert_eq!(rows_of(&merged), rows_of(&twice));

        let mut reversed = clusters.clone();
        reversed.reverse();
        prop_assert_eq!(rows_of(&merged), rows_of(&merge_clusters(&reversed)));
    }

    #[test]
    fn artifact_probability_is_a_monotone_probability(
        w in 0f64..0.6,
        fuzz in 0u32..4,
        size in 2usize..10,
    ) {
        let p = artifact_probability(60, 60, size, size, w, fuzz);
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!(artifact_probability(60, 60, size, size, w + 0.05, fuzz) >= p - 1e-12);
        prop_assert!(artifact_probability(60, 60, size, size, w, fuzz + 1) >= p - 1e-12);
        prop_assert!(artifact_probability(120, 120, size, size, w, fuzz) >= p - 1e-12);
        prop_assert!(artifact_probability(60, 60, size + 1, size, w, fuzz) <= p + 1e-12);
    }
}
