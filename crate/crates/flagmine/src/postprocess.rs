//! Post-processing: non-intersecting column selection and cluster merging.
//!
//! Each cluster column induces a bridge, the per-row path of absolute matrix
//! positions its fuzziness settings land on. Two bridges intersect when
//! their paths cross or touch; a maximum non-intersecting subset gives a
//! temporally consistent column selection. The intersection graph of bridges
//! is perfect, so the exact search below stays cheap at practical sizes.

use thiserror::Error;

use crate::cluster::FuzzyLaggedCluster;

#[derive(Debug, Error)]
pub enum PostprocessError {
    #[error("bridges are defined over different row sets ({0} vs {1} rows)")]
    RowSetMismatch(usize, usize),
}

/// The monotone path of one cluster column across the cluster rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bridge {
    pub col: usize,
    /// Absolute matrix position per cluster row; `None` when the alignment
    /// leaves the matrix.
    pub path: Vec<Option<i64>>,
}

/// One bridge per cluster column, rows in cluster order.
pub fn bridges_of(cluster: &FuzzyLaggedCluster, n_cols: usize) -> Vec<Bridge> {
    cluster
        .cols
        .iter()
        .map(|&col| Bridge {
            col,
            path: cluster
                .rows
                .iter()
                .zip(&cluster.lags)
                .map(|(&row, &lag)| {
                    let pos = col as i64 + lag + cluster.fuzz_at(row, col);
                    (pos >= 0 && pos < n_cols as i64).then_some(pos)
                })
                .collect(),
        })
        .collect()
}

/// Bridges intersect when their paths touch at any row or change relative
/// order between rows. Rows where either path is absent are skipped.
pub fn bridges_intersect(a: &Bridge, b: &Bridge) -> Result<bool, PostprocessError> {
    if a.path.len() != b.path.len() {
        return Err(PostprocessError::RowSetMismatch(a.path.len(), b.path.len()));
    }
    let mut seen_left = false;
    let mut seen_right = false;
    for (pa, pb) in a.path.iter().zip(&b.path) {
        let (Some(x), Some(y)) = (pa, pb) else { continue };
        match x.cmp(y) {
            std::cmp::Ordering::Equal => return Ok(true),
            std::cmp::Ordering::Less => seen_left = true,
            std::cmp::Ordering::Greater => seen_right = true,
        }
        if seen_left && seen_right {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Maximum-cardinality subset of the cluster's columns whose bridges are
/// pairwise non-intersecting; ties broken toward the lexicographically
/// smallest column set. Falls back to a greedy sweep past 5000 columns.
pub fn max_nonintersecting_columns(cluster: &FuzzyLaggedCluster, n_cols: usize) -> Vec<usize> {
    let bridges = bridges_of(cluster, n_cols);
    let k = bridges.len();
    if k == 0 {
        return Vec::new();
    }
    // Compatibility adjacency: edge when bridges do NOT intersect.
    let mut compat = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let ok = !bridges_intersect(&bridges[i], &bridges[j]).expect("same row set");
            compat[i][j] = ok;
            compat[j][i] = ok;
        }
    }
    if k > 5000 {
        eprintln!("flagmine: {k} columns exceed the exact bridge-selection guard; using greedy");
        return greedy_noncrossing(&bridges, &compat);
    }

    let mut best: Vec<usize> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    // Bron-Kerbosch with pivoting on the compatibility graph; equal-size
    // candidates are kept so the lexicographic tie-break sees them all.
    fn extend(
        compat: &[Vec<bool>],
        bridges: &[Bridge],
        current: &mut Vec<usize>,
        candidates: Vec<usize>,
        excluded: Vec<usize>,
        best: &mut Vec<usize>,
    ) {
        if candidates.is_empty() && excluded.is_empty() {
            let cols: Vec<usize> = {
                let mut c: Vec<usize> = current.iter().map(|&i| bridges[i].col).collect();
                c.sort_unstable();
                c
            };
            if cols.len() > best.len() || (cols.len() == best.len() && cols < *best) {
                *best = cols;
            }
            return;
        }
        if current.len() + candidates.len() < best.len() {
            return;
        }
        let pivot = candidates
            .iter()
            .chain(excluded.iter())
            .copied()
            .max_by_key(|&u| candidates.iter().filter(|&&v| compat[u][v]).count())
            .unwrap();
        let branch: Vec<usize> =
            candidates.iter().copied().filter(|&v| !compat[pivot][v]).collect();
        let mut candidates = candidates;
        let mut excluded = excluded;
        for v in branch {
            current.push(v);
            let next_cand: Vec<usize> =
                candidates.iter().copied().filter(|&u| compat[v][u]).collect();
            let next_excl: Vec<usize> =
                excluded.iter().copied().filter(|&u| compat[v][u]).collect();
            extend(compat, bridges, current, next_cand, next_excl, best);
            current.pop();
            candidates.retain(|&u| u != v);
            excluded.push(v);
        }
    }
    extend(&compat, &bridges, &mut current, (0..k).collect(), Vec::new(), &mut best);
    best
}

fn greedy_noncrossing(bridges: &[Bridge], compat: &[Vec<bool>]) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    for i in 0..bridges.len() {
        if picked.iter().all(|&p| compat[p][i]) {
            picked.push(i);
        }
    }
    let mut cols: Vec<usize> = picked.into_iter().map(|i| bridges[i].col).collect();
    cols.sort_unstable();
    cols
}

/// A group of clusters connected through shared rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedGroup {
    /// Union of the member clusters' rows, ascending.
    pub rows: Vec<usize>,
    /// Indices into the input cluster list, ascending.
    pub members: Vec<usize>,
}

/// Union-find merge of clusters sharing at least one row. The group count is
/// what the classification experiments report.
pub fn merge_clusters(clusters: &[FuzzyLaggedCluster]) -> Vec<MergedGroup> {
    let mut parent: Vec<usize> = (0..clusters.len()).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut owner: std::collections::HashMap<usize, usize> = std::collections::HashMap::new();
    for (idx, cluster) in clusters.iter().enumerate() {
        for &row in &cluster.rows {
            match owner.entry(row) {
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(idx);
                }
                std::collections::hash_map::Entry::Occupied(e) => {
                    let a = find(&mut parent, *e.get());
                    let b = find(&mut parent, idx);
                    if a != b {
                        parent[b.max(a)] = b.min(a);
                    }
                }
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, MergedGroup> =
        std::collections::BTreeMap::new();
    for idx in 0..clusters.len() {
        let root = find(&mut parent, idx);
        let entry = groups
            .entry(root)
            .or_insert_with(|| MergedGroup { rows: Vec::new(), members: Vec::new() });
        entry.members.push(idx);
        entry.rows.extend(clusters[idx].rows.iter().copied());
    }
    let mut out: Vec<MergedGroup> = groups
        .into_values()
        .map(|mut g| {
            g.rows.sort_unstable();
            g.rows.dedup();
            g.members.sort_unstable();
            g
        })
        .collect();
    out.sort_by(|a, b| a.rows.cmp(&b.rows));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::{BTreeMap, BTreeSet};

    fn cluster_with_paths(bases: &[usize], paths: &[Vec<i64>], max_fuzz: u32) -> FuzzyLaggedCluster {
        // paths[k][r] is the absolute position of column k at row r.
        let rows: Vec<usize> = (0..paths[0].len()).collect();
        let mut fuzz = BTreeMap::new();
        for (k, path) in paths.iter().enumerate() {
            for (r, &pos) in path.iter().enumerate() {
                let f = pos - bases[k] as i64;
                if f != 0 {
                    fuzz.insert((r, bases[k]), f);
                }
            }
        }
        FuzzyLaggedCluster {
            lags: vec![0; rows.len()],
            anchor: usize::MAX, // no neutral anchor in these synthetic fixtures
            rows,
            cols: bases.to_vec(),
            fuzz,
            max_fuzz,
            anti_rows: BTreeSet::new(),
            achieved_error: 0.0,
        }
    }

    #[test]
    fn identical_bridges_touch() {
        let b = Bridge { col: 0, path: vec![Some(1), Some(2)] };
        assert!(bridges_intersect(&b, &b.clone()).unwrap());
    }

    #[test]
    fn strictly_ordered_bridges_do_not_intersect() {
        let a = Bridge { col: 0, path: vec![Some(1), Some(2), Some(1)] };
        let b = Bridge { col: 1, path: vec![Some(3), Some(4), Some(2)] };
        assert!(!bridges_intersect(&a, &b).unwrap());
    }

    #[test]
    fn crossing_bridges_intersect() {
        let a = Bridge { col: 0, path: vec![Some(1), Some(4)] };
        let b = Bridge { col: 1, path: vec![Some(2), Some(3)] };
        assert!(bridges_intersect(&a, &b).unwrap());
    }

    #[test]
    fn absent_rows_are_skipped() {
        let a = Bridge { col: 0, path: vec![Some(1), None, Some(5)] };
        let b = Bridge { col: 1, path: vec![Some(2), Some(0), Some(6)] };
        assert!(!bridges_intersect(&a, &b).unwrap());
    }

    #[test]
    fn mismatched_row_sets_error() {
        let a = Bridge { col: 0, path: vec![Some(1)] };
        let b = Bridge { col: 1, path: vec![Some(1), Some(2)] };
        assert!(matches!(
            bridges_intersect(&a, &b),
            Err(PostprocessError::RowSetMismatch(1, 2))
        ));
    }

    /// Five-bridge fixture shaped after the classic example: the fifth
    /// bridge crosses everything, the first and third cross each other, and
    /// the two maximum selections share columns two and four.
    #[test]
    fn five_bridge_fixture_selects_three_columns() {
        let bases = [3usize, 4, 5, 6, 7];
        let paths = vec![
            vec![3, 3, 4, 3], // j1
            vec![2, 2, 2, 2], // j2
            vec![4, 4, 3, 4], // j3
            vec![6, 6, 6, 6], // j4
            vec![1, 5, 7, 5], // j5 crosses all
        ];
        let cluster = cluster_with_paths(&bases, &paths, 6);
        let bridges = bridges_of(&cluster, 10);
        assert!(bridges_intersect(&bridges[0], &bridges[2]).unwrap());
        for k in 0..4 {
            assert!(bridges_intersect(&bridges[4], &bridges[k]).unwrap(), "j5 crosses j{k}");
        }
        assert!(!bridges_intersect(&bridges[1], &bridges[3]).unwrap());
        let selected = max_nonintersecting_columns(&cluster, 10);
        assert_eq!(selected.len(), 3);
        // Both {j1,j2,j4} and {j2,j3,j4} are maximum; lexicographic
        // preference lands on the first.
        assert_eq!(selected, vec![3, 4, 6]);
    }

    #[test]
    fn zero_fuzz_cluster_keeps_all_columns() {
        let cluster = cluster_with_paths(&[1, 3, 5], &[vec![1; 4], vec![3; 4], vec![5; 4]], 0);
        let selected = max_nonintersecting_columns(&cluster, 8);
        assert_eq!(selected, vec![1, 3, 5]);
    }

    #[test]
    fn exact_selection_matches_exhaustive_search() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(77);
        for _ in 0..100 {
            let k = 8usize;
            let rows = 4usize;
            let bases: Vec<usize> = (0..k).map(|i| 4 * i + 4).collect();
            let paths: Vec<Vec<i64>> = bases
                .iter()
                .map(|&b| (0..rows).map(|_| b as i64 + rng.gen_range(-4i64..=4)).collect())
                .collect();
            let cluster = cluster_with_paths(&bases, &paths, 4);
            let got = max_nonintersecting_columns(&cluster, 64);

            // Exhaustive oracle over all subsets.
            let bridges = bridges_of(&cluster, 64);
            let mut best = 0usize;
            for mask in 0u32..(1 << k) {
                let chosen: Vec<usize> =
                    (0..k).filter(|&i| mask & (1 << i) != 0).collect();
                let ok = chosen.iter().enumerate().all(|(a, &i)| {
                    chosen[a + 1..]
                        .iter()
                        .all(|&j| !bridges_intersect(&bridges[i], &bridges[j]).unwrap())
                });
                if ok {
                    best = best.max(chosen.len());
                }
            }
            assert_eq!(got.len(), best);
            // Sanity: the returned set really is pairwise non-intersecting.
            let by_col: Vec<&Bridge> =
                got.iter().map(|&c| bridges.iter().find(|b| b.col == c).unwrap()).collect();
            for a in 0..by_col.len() {
                for b in a + 1..by_col.len() {
                    assert!(!bridges_intersect(by_col[a], by_col[b]).unwrap());
                }
            }
            // And no smaller than a greedy sweep.
            let mut compat = vec![vec![false; k]; k];
            for i in 0..k {
                for j in i + 1..k {
                    let ok = !bridges_intersect(&bridges[i], &bridges[j]).unwrap();
                    compat[i][j] = ok;
                    compat[j][i] = ok;
                }
            }
            assert!(got.len() >= greedy_noncrossing(&bridges, &compat).len());
        }
    }

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

    #[test]
    fn disjoint_clusters_stay_separate() {
        let cs = vec![rows_cluster(vec![0, 1]), rows_cluster(vec![2, 3])];
        let groups = merge_clusters(&cs);
        assert_eq!(groups.len(), 2);
    }

    #[test]
    fn chains_collapse_transitively() {
        let cs = vec![
            rows_cluster(vec![1, 2]),
            rows_cluster(vec![2, 3]),
            rows_cluster(vec![3, 4]),
        ];
        let groups = merge_clusters(&cs);
        assert_eq!(groups.len(), 1);
        assert_eq!(groups[0].rows, vec![1, 2, 3, 4]);
        assert_eq!(groups[0].members, vec![0, 1, 2]);
    }

    #[test]
    fn merge_is_idempotent_and_order_free() {
        let cs = vec![
            rows_cluster(vec![0, 1]),
            rows_cluster(vec![5, 6]),
            rows_cluster(vec![1, 2]),
            rows_cluster(vec![8, 9]),
        ];
        let a = merge_clusters(&cs);
        let mut reversed = cs.clone();
        reversed.reverse();
        let b = merge_clusters(&reversed);
        let rows_a: Vec<Vec<usize>> = a.iter().map(|g| g.rows.clone()).collect();
        let rows_b: Vec<Vec<usize>> = b.iter().map(|g| g.rows.clone()).collect();
        assert_eq!(rows_a, rows_b);
    }

    #[test]
    fn planted_partition_recovers_group_count() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(5);
        let mut clusters = Vec::new();
        for g in 0..4usize {
            let members: Vec<usize> = (g * 10..(g + 1) * 10).collect();
            for _ in 0..5 {
                let mut rows: Vec<usize> = members
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.6))
                    .collect();
                if rows.len() < 2 {
                    rows = members[..3].to_vec();
                }
                clusters.push(rows_cluster(rows));
            }
        }
        // Overlap within each group is near-certain with 5 draws of 60%.
        assert_eq!(merge_clusters(&clusters).len(), 4);
    }
}
