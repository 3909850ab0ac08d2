//! Cluster-quality metrics and the density-based baseline.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::cluster::FuzzyLaggedCluster;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("both cell sets are empty")]
    BothEmpty,
    #[error("entropy needs at least 2 classes, got {0}")]
    TooFewClasses(usize),
    #[error("object {0} has no label")]
    Unlabeled(usize),
}

/// Matrix cells covered by a cluster.
pub type CellSet = BTreeSet<(usize, usize)>;

pub fn cluster_cells(cluster: &FuzzyLaggedCluster, n_cols: usize) -> CellSet {
    cluster.cells(n_cols)
}

/// Cell-level agreement `|intersection| / |union|`, the complement of the
/// relative non-intersecting area: 1 for equal sets, 0 for disjoint ones.
pub fn rnia_complement(a: &CellSet, b: &CellSet) -> Result<f64, EvalError> {
    if a.is_empty() && b.is_empty() {
        return Err(EvalError::BothEmpty);
    }
    let inter = a.intersection(b).count();
    let union = a.len() + b.len() - inter;
    Ok(inter as f64 / union as f64)
}

/// Standard F1 over row membership: `2 tp / (2 tp + fn + fp)`; zero when the
/// denominator vanishes.
pub fn f1_score(predicted: &BTreeSet<usize>, truth: &BTreeSet<usize>) -> f64 {
    let tp = predicted.intersection(truth).count();
    let fp = predicted.len() - tp;
    let fng = truth.len() - tp;
    let denom = 2 * tp + fp + fng;
    if denom == 0 {
        0.0
    } else {
        2.0 * tp as f64 / denom as f64
    }
}

/// Size-weighted mean over groups of the best per-class F1. This is the
/// score used to compare whole labelings (e.g. a density clustering) against
/// ground-truth classes; a single all-in cluster over `k` equal classes
/// scores `2/(k+1)`.
pub fn labeling_f1(groups: &[Vec<usize>], labels: &[usize]) -> f64 {
    let mut by_class: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
    for (obj, &label) in labels.iter().enumerate() {
        by_class.entry(label).or_default().insert(obj);
    }
    let total: usize = groups.iter().map(|g| g.len()).sum();
    if total == 0 {
        return 0.0;
    }
    let mut acc = 0.0;
    for group in groups {
        let set: BTreeSet<usize> = group.iter().copied().collect();
        let best = by_class
            .values()
            .map(|class| f1_score(&set, class))
            .fold(0.0f64, f64::max);
        acc += best * group.len() as f64;
    }
    acc / total as f64
}

/// Size-weighted average cluster entropy, normalized by `ln k` to `[0, 1]`.
pub fn normalized_entropy(
    groups: &[Vec<usize>],
    labels: &[usize],
    classes: usize,
) -> Result<f64, EvalError> {
    if classes < 2 {
        return Err(EvalError::TooFewClasses(classes));
    }
    let mut weighted = 0.0;
    let mut total = 0usize;
    for group in groups {
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for &obj in group {
            let label = *labels.get(obj).ok_or(EvalError::Unlabeled(obj))?;
            *counts.entry(label).or_insert(0) += 1;
        }
        let size = group.len();
        if size == 0 {
            continue;
        }
        let mut h = 0.0;
        for &c in counts.values() {
            let p = c as f64 / size as f64;
            h -= p * p.ln();
        }
        weighted += h * size as f64;
        total += size;
    }
    if total == 0 {
        return Ok(0.0);
    }
    Ok((weighted / total as f64) / (classes as f64).ln())
}

/// Fraction of ground-truth members appearing in some mined group.
pub fn coverage(groups: &[Vec<usize>], truth_members: &BTreeSet<usize>) -> f64 {
    if truth_members.is_empty() {
        return 0.0;
    }
    let covered: BTreeSet<usize> = groups.iter().flatten().copied().collect();
    truth_members.intersection(&covered).count() as f64 / truth_members.len() as f64
}

/// Density clustering parameters: neighborhood radius and minimum points.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DbscanConfig {
    pub eps: f64,
    pub min_pts: usize,
}

/// Classic density-based clustering with the L2 metric. Deterministic for a
/// fixed input order: border points go to the first core cluster that
/// reaches them; `None` marks noise. A point's neighborhood includes itself.
pub fn dbscan(points: &[Vec<f64>], cfg: &DbscanConfig) -> Vec<Option<usize>> {
    let n = points.len();
    let dist2 = |a: &[f64], b: &[f64]| -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
    };
    let eps2 = cfg.eps * cfg.eps;
    let neighbors = |i: usize| -> Vec<usize> {
        (0..n).filter(|&j| dist2(&points[i], &points[j]) <= eps2).collect()
    };
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut visited = vec![false; n];
    let mut next_id = 0usize;
    for i in 0..n {
        if visited[i] {
            continue;
        }
        visited[i] = true;
        let seed = neighbors(i);
        if seed.len() < cfg.min_pts {
            continue; // stays noise unless reached later
        }
        let id = next_id;
        next_id += 1;
        labels[i] = Some(id);
        let mut queue: std::collections::VecDeque<usize> = seed.into_iter().collect();
        while let Some(j) = queue.pop_front() {
            if labels[j].is_none() {
                labels[j] = Some(id);
            }
            if visited[j] {
                continue;
            }
            visited[j] = true;
            let reach = neighbors(j);
            if reach.len() >= cfg.min_pts {
                for r in reach {
                    if labels[r].is_none() || !visited[r] {
                        queue.push_back(r);
                    }
                }
            }
        }
    }
    labels
}

/// Group a labeling into clusters (noise dropped).
pub fn labeling_groups(labels: &[Option<usize>]) -> Vec<Vec<usize>> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (obj, label) in labels.iter().enumerate() {
        if let Some(id) = label {
            groups.entry(*id).or_default().push(obj);
        }
    }
    groups.into_values().collect()
}

/// Metric bundle for one mining run against ground truth.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct EvalReport {
    pub cluster_count: usize,
    /// Best cell-level agreement of any mined cluster with the truth.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub one_minus_rnia: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coverage: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub merged_groups: Option<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(pairs: &[(usize, usize)]) -> CellSet {
        pairs.iter().copied().collect()
    }

    #[test]
    fn rnia_unit_values() {
        let a = cells(&[(1, 1), (1, 2)]);
        assert_eq!(rnia_complement(&a, &a.clone()).unwrap(), 1.0);
        let b = cells(&[(2, 1), (2, 2)]);
        assert_eq!(rnia_complement(&a, &b).unwrap(), 0.0);
        let c = cells(&[(1, 2), (1, 3)]);
        assert!((rnia_complement(&a, &c).unwrap() - 1.0 / 3.0).abs() < 1e-12);
        assert!(matches!(
            rnia_complement(&CellSet::new(), &CellSet::new()),
            Err(EvalError::BothEmpty)
        ));
    }

    #[test]
    fn rnia_symmetry() {
        let a = cells(&[(0, 0), (0, 1), (2, 3)]);
        let b = cells(&[(0, 1), (5, 5)]);
        assert_eq!(rnia_complement(&a, &b).unwrap(), rnia_complement(&b, &a).unwrap());
    }

    #[test]
    fn f1_values() {
        let truth: BTreeSet<usize> = (0..4).collect();
        assert_eq!(f1_score(&truth.clone(), &truth), 1.0);
        // recall 1.0, precision 0.5
        let wide: BTreeSet<usize> = (0..8).collect();
        assert!((f1_score(&wide, &truth) - 0.667).abs() < 1e-3);
        // tp=2 fp=1 fn=1
        let pred: BTreeSet<usize> = [0, 1, 9].into_iter().collect();
        let t: BTreeSet<usize> = [0, 1, 2].into_iter().collect();
        assert!((f1_score(&pred, &t) - 4.0 / 6.0).abs() < 1e-12);
        assert_eq!(f1_score(&BTreeSet::new(), &BTreeSet::new()), 0.0);
    }

    #[test]
    fn f1_swapping_fp_fn_is_symmetric() {
        let a: BTreeSet<usize> = [0, 1, 2, 3].into_iter().collect();
        let b: BTreeSet<usize> = [2, 3, 4, 5, 6].into_iter().collect();
        assert_eq!(f1_score(&a, &b), f1_score(&b, &a));
    }

    #[test]
    fn entropy_values() {
        let labels = vec![0, 0, 0, 0, 1, 1, 1, 1];
        // one pure cluster
        assert_eq!(normalized_entropy(&[vec![0, 1, 2]], &labels, 2).unwrap(), 0.0);
        // 50/50 cluster is maximal
        let h = normalized_entropy(&[vec![0, 1, 4, 5]], &labels, 2).unwrap();
        assert!((h - 1.0).abs() < 1e-12);
        // 75/25
        let h = normalized_entropy(&[vec![0, 1, 2, 4]], &labels, 2).unwrap();
        assert!((h - 0.811).abs() < 1e-3);
    }

    #[test]
    fn entropy_never_grows_under_refinement() {
        let labels = vec![0, 0, 1, 1, 0, 1, 0, 1];
        let mixed = normalized_entropy(&[(0..8).collect()], &labels, 2).unwrap();
        let split = normalized_entropy(&[vec![0, 1, 4, 6], vec![2, 3, 5, 7]], &labels, 2).unwrap();
        assert!(split <= mixed + 1e-12);
        assert!((0.0..=1.0).contains(&split));
    }

    #[test]
    fn coverage_counts_members() {
        let truth: BTreeSet<usize> = (0..37).collect();
        let groups: Vec<Vec<usize>> = vec![(0..10).collect()];
        assert!((coverage(&groups, &truth) - 10.0 / 37.0).abs() < 1e-12);
        assert_eq!(coverage(&[], &truth), 0.0);
        let all: Vec<Vec<usize>> = vec![(0..37).collect()];
        assert_eq!(coverage(&all, &truth), 1.0);
    }

    #[test]
    fn dbscan_degenerate_settings() {
        let points: Vec<Vec<f64>> = (0..5).map(|i| vec![i as f64, 0.0]).collect();
        let all_noise = dbscan(&points, &DbscanConfig { eps: 0.1, min_pts: 7 });
        assert!(all_noise.iter().all(|l| l.is_none()));
        let one = dbscan(&points, &DbscanConfig { eps: 100.0, min_pts: 2 });
        assert!(one.iter().all(|l| *l == Some(0)));
    }

    #[test]
    fn dbscan_separates_two_blobs() {
        let mut points = Vec::new();
        for i in 0..6 {
            points.push(vec![i as f64 * 0.1, 0.0]);
        }
        for i in 0..6 {
            points.push(vec![50.0 + i as f64 * 0.1, 0.0]);
        }
        let labels = dbscan(&points, &DbscanConfig { eps: 0.15, min_pts: 3 });
        let groups = labeling_groups(&labels);
        assert_eq!(groups.len(), 2);
        assert_eq!(groups[0], (0..6).collect::<Vec<_>>());
        assert_eq!(groups[1], (6..12).collect::<Vec<_>>());
    }

    #[test]
    fn dbscan_is_isometry_invariant() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(4);
        let points: Vec<Vec<f64>> =
            (0..30).map(|_| vec![rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]).collect();
        let cfg = DbscanConfig { eps: 0.4, min_pts: 3 };
        let base = dbscan(&points, &cfg);
        let angle = 1.1f64;
        let moved: Vec<Vec<f64>> = points
            .iter()
            .map(|p| {
                vec![
                    p[0] * angle.cos() - p[1] * angle.sin() + 5.0,
                    p[0] * angle.sin() + p[1] * angle.cos() - 3.0,
                ]
            })
            .collect();
        assert_eq!(base, dbscan(&moved, &cfg));
    }

    #[test]
    fn labeling_f1_degenerate_all_in_one() {
        // two equal classes, single all-in cluster: recall 1, precision 0.5
        let labels = vec![0, 0, 0, 1, 1, 1];
        let f1 = labeling_f1(&[(0..6).collect()], &labels);
        assert!((f1 - 2.0 / 3.0).abs() < 1e-12);
    }
}
