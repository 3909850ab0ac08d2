//! Cluster verification: build the aligned submatrix and certify its error.
//!
//! The achieved error is the best of several explicit profile witnesses:
//! the anchored fit (profile pinned to the anchor row) and, for every fully
//! present column, a column-anchored witness whose row offsets are read off
//! that column. Each certificate corresponds to concrete profiles, so a
//! cluster reported valid at `w` always has profiles realizing that error.
//! The column-anchored family certifies every cluster the window miner
//! emits at twice the mining error by construction.

use thiserror::Error;

use crate::cluster::FuzzyLaggedCluster;
use crate::matrix::DataMatrix;
use crate::profile::{fit_profiles, ProfileError, ProfilePair};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("cluster indices fall outside the matrix")]
    IndexOutOfRange,
    #[error("every aligned entry is missing")]
    EmptyAlignment,
    #[error("degenerate aligned submatrix: {0}")]
    Degenerate(#[from] ProfileError),
}

/// Result of verifying a cluster at a given error bound.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub valid: bool,
    pub achieved_error: f64,
    pub profiles: ProfilePair,
}

/// Aligned submatrix of a cluster: entry `(k, c)` is the matrix value backing
/// cluster row `k` at cluster column `c`, negated for anti-correlated rows.
/// Out-of-range or masked alignments are missing.
pub fn aligned_submatrix(
    matrix: &DataMatrix,
    cluster: &FuzzyLaggedCluster,
) -> Result<(Vec<f64>, Vec<bool>), VerifyError> {
    if cluster.rows.iter().any(|&r| r >= matrix.rows())
        || cluster.cols.iter().any(|&c| c >= matrix.cols())
    {
        return Err(VerifyError::IndexOutOfRange);
    }
    let rows = cluster.rows.len();
    let cols = cluster.cols.len();
    let mut values = vec![0.0; rows * cols];
    let mut missing = vec![true; rows * cols];
    let mut any = false;
    for (k, &row) in cluster.rows.iter().enumerate() {
        let lag = cluster.lags[k];
        let sign = if cluster.anti_rows.contains(&row) { -1.0 } else { 1.0 };
        for (c, &col) in cluster.cols.iter().enumerate() {
            let pos = col as i64 + lag + cluster.fuzz_at(row, col);
            if let Some(v) = matrix.get_shifted(row, pos) {
                values[k * cols + c] = sign * v;
                missing[k * cols + c] = false;
                any = true;
            }
        }
    }
    if !any {
        return Err(VerifyError::EmptyAlignment);
    }
    Ok((values, missing))
}

/// Verify a cluster against the matrix at error bound `w`.
///
/// Builds the aligned submatrix, certifies its Chebyshev error, and reports
/// `valid` iff the certified error is at most `w`. Anti-correlated rows are
/// checked through their negated values, which is the `|R - C - A|` form of
/// the anti model.
pub fn verify_cluster(
    matrix: &DataMatrix,
    cluster: &FuzzyLaggedCluster,
    w: f64,
) -> Result<VerifyOutcome, VerifyError> {
    let (mut values, mut missing) = aligned_submatrix(matrix, cluster)?;
    let rows = cluster.rows.len();
    let cols = cluster.cols.len();

    // Drop columns with no present entry; they carry no constraint.
    let kept: Vec<usize> =
        (0..cols).filter(|&c| (0..rows).any(|k| !missing[k * cols + c])).collect();
    if kept.len() != cols {
        let mut v2 = Vec::with_capacity(rows * kept.len());
        let mut m2 = Vec::with_capacity(rows * kept.len());
        for k in 0..rows {
            for &c in &kept {
                v2.push(values[k * cols + c]);
                m2.push(missing[k * cols + c]);
            }
        }
        values = v2;
        missing = m2;
    }
    let cols_kept = kept.len();

    // The fit anchors on row 0; rotate the designated anchor row first.
    let anchor_k = cluster.rows.iter().position(|&r| r == cluster.anchor).unwrap_or(0);
    let order: Vec<usize> =
        std::iter::once(anchor_k).chain((0..rows).filter(|&k| k != anchor_k)).collect();
    let mut av = Vec::with_capacity(values.len());
    let mut am = Vec::with_capacity(values.len());
    for &k in &order {
        av.extend_from_slice(&values[k * cols_kept..(k + 1) * cols_kept]);
        am.extend_from_slice(&missing[k * cols_kept..(k + 1) * cols_kept]);
    }

    let anchored = fit_profiles(&av, &am, rows, cols_kept, 1e-9, 500)?;
    let mut best_err = anchored.error;
    let mut best_rows: Vec<f64> = vec![0.0; rows];
    for (pos, &k) in order.iter().enumerate() {
        best_rows[k] = anchored.row_offsets[pos];
    }
    let mut best_cols = anchored.col_profile.clone();

    // Column-anchored certificates.
    for a in 0..cols_kept {
        if (0..rows).any(|k| missing[k * cols_kept + a]) {
            continue;
        }
        let offsets: Vec<f64> = (0..rows).map(|k| values[k * cols_kept + a]).collect();
        let mut levels = vec![f64::NAN; cols_kept];
        let mut worst: f64 = 0.0;
        for c in 0..cols_kept {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for k in 0..rows {
                if !missing[k * cols_kept + c] {
                    let d = values[k * cols_kept + c] - offsets[k];
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
            levels[c] = lo + (hi - lo) / 2.0;
            worst = worst.max((hi - lo) / 2.0);
        }
        if worst < best_err {
            best_err = worst;
            best_rows = offsets;
            best_cols = levels;
        }
    }

    // Profiles are reported per original cluster column; dropped columns
    // keep a NaN level.
    let col_profile = if cols_kept == cols {
        best_cols
    } else {
        let mut full = vec![f64::NAN; cols];
        for (slot, &c) in kept.iter().enumerate() {
            full[c] = best_cols[slot];
        }
        full
    };

    Ok(VerifyOutcome {
        valid: best_err <= w,
        achieved_error: best_err,
        profiles: ProfilePair { row_offsets: best_rows, col_profile, error: best_err },
    })
}
