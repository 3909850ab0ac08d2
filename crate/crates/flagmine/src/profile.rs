//! Chebyshev profile fitting for aligned submatrices.
//!
//! All fits here are anchored: the row profile is pinned to the first row of
//! the input, and each remaining row gets the midrange offset that minimizes
//! its max residual. For a two-row matrix this is exactly the closed-form
//! construction behind the miner's sliding window, so the window width, the
//! two-row formula, the alternating fit and the grid oracle all measure the
//! same quantity. Columns where the anchor is missing are fitted by
//! alternating midrange updates until the error stops improving.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("need at least 2 jointly present columns, got {0}")]
    TooFewColumns(usize),
    #[error("row {0} has no present entry in the aligned submatrix")]
    EmptyRow(usize),
    #[error("column {0} has no present entry in the aligned submatrix")]
    EmptyColumn(usize),
    #[error("brute force accepts at most 4x6 submatrices, got {rows}x{cols}")]
    TooLarge { rows: usize, cols: usize },
    #[error("grid step must be positive")]
    BadGridStep,
}

/// Closed-form two-row fit: sorted pairwise differences split at the
/// midrange.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoRowFit {
    /// Achieved Chebyshev error: half the spread of the differences.
    pub error: f64,
    /// Midrange of the differences.
    pub diff_midrange: f64,
    /// Smallest 1-based count of sorted columns on the `+error` side.
    pub split: usize,
    /// Offsets for the two rows; the first is pinned to zero.
    pub row_offsets: [f64; 2],
    /// Per-column profile (input order); `NaN` where either row is missing.
    pub col_profile: Vec<f64>,
}

/// Profiles fitted to an aligned submatrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfilePair {
    /// Additive offset per row; the anchor row is pinned to zero.
    pub row_offsets: Vec<f64>,
    /// Level per column; `NaN` for columns with no present entry.
    pub col_profile: Vec<f64>,
    /// Max absolute residual over present entries.
    pub error: f64,
}

fn midrange(min: f64, max: f64) -> f64 {
    min + (max - min) / 2.0
}

/// Exact two-row Chebyshev fit over jointly present columns.
///
/// Sorts the differences `d_j = a_j - b_j`, returns half their spread as the
/// error, the midrange `h`, the split index, `row_offsets = [0, -h]` and the
/// profile `a_j + error` left of the split / `a_j - error` right of it.
pub fn two_row_error(
    row_a: &[f64],
    row_b: &[f64],
    missing: Option<(&[bool], &[bool])>,
    ) -> Result<TwoRowFit, ProfileError> {
    assert_eq!(row_a.len(), row_b.len());
    let present = |j: usize| match missing {
        Some((ma, mb)) => !ma[j] && !mb[j],
        None => true,
    };
    let mut order: Vec<usize> = (0..row_a.len()).filter(|&j| present(j)).collect();
    if order.len() < 2 {
        return Err(ProfileError::TooFewColumns(order.len()));
    }
    let diff = |j: usize| row_a[j] - row_b[j];
    order.sort_by(|&x, &y| diff(x).partial_cmp(&diff(y)).unwrap().then(x.cmp(&y)));

    let d_min = diff(order[0]);
    let d_max = diff(*order.last().unwrap());
    let error = (d_max - d_min) / 2.0;
    let h = midrange(d_min, d_max);
    // Smallest l with d_{l+1} >= h (1-based over the sorted order).
    let split = (1..order.len()).find(|&l| diff(order[l]) >= h).unwrap_or(order.len() - 1);

    let mut col_profile = vec![f64::NAN; row_a.len()];
    for (rank, &j) in order.iter().enumerate() {
        col_profile[j] = if rank < split { row_a[j] + error } else { row_a[j] - error };
    }
    Ok(TwoRowFit { error, diff_midrange: h, split, row_offsets: [0.0, -h], col_profile })
}

/// Anchored alternating fit of `rows x cols` flat row-major data.
///
/// The column profile starts pinned to row 0; row offsets are midranges of
/// the per-row residuals. Only columns where row 0 is missing keep moving in
/// later sweeps, so fully anchored inputs converge in one pass.
pub fn fit_profiles(
    values: &[f64],
    missing: &[bool],
    rows: usize,
    cols: usize,
    tol: f64,
    max_iter: usize,
) -> Result<ProfilePair, ProfileError> {
    assert_eq!(values.len(), rows * cols);
    assert_eq!(missing.len(), rows * cols);
    let at = |i: usize, j: usize| values[i * cols + j];
    let gone = |i: usize, j: usize| missing[i * cols + j];

    for i in 0..rows {
        if (0..cols).all(|j| gone(i, j)) {
            return Err(ProfileError::EmptyRow(i));
        }
    }
    for j in 0..cols {
        if (0..rows).all(|i| gone(i, j)) {
            return Err(ProfileError::EmptyColumn(j));
        }
    }

    let mut col_profile = vec![f64::NAN; cols];
    let mut free_cols = Vec::new();
    for j in 0..cols {
        if gone(0, j) {
            free_cols.push(j);
        } else {
            col_profile[j] = at(0, j);
        }
    }
    // Seed free columns from their column midrange so the first row sweep
    // sees finite levels everywhere.
    for &j in &free_cols {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..rows {
            if !gone(i, j) {
                lo = lo.min(at(i, j));
                hi = hi.max(at(i, j));
            }
        }
        col_profile[j] = midrange(lo, hi);
    }

    let mut row_offsets = vec![0.0; rows];
    let residual = |row_offsets: &[f64], col_profile: &[f64]| {
        let mut worst: f64 = 0.0;
        for i in 0..rows {
            for j in 0..cols {
                if !gone(i, j) {
                    worst = worst.max((row_offsets[i] + col_profile[j] - at(i, j)).abs());
                }
            }
        }
        worst
    };

    let mut prev = f64::INFINITY;
    for _ in 0..max_iter {
        for i in 0..rows {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for j in 0..cols {
                if !gone(i, j) {
                    let d = at(i, j) - col_profile[j];
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
            row_offsets[i] = midrange(lo, hi);
        }
        for &j in &free_cols {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for i in 0..rows {
                if !gone(i, j) {
                    let d = at(i, j) - row_offsets[i];
                    lo = lo.min(d);
                    hi = hi.max(d);
                }
            }
            col_profile[j] = midrange(lo, hi);
        }
        let err = residual(&row_offsets, &col_profile);
        debug_assert!(err <= prev + 1e-12, "alternating fit must not regress");
        if prev - err < tol {
            prev = err;
            break;
        }
        prev = err;
    }
    Ok(ProfilePair { row_offsets, col_profile, error: prev })
}

/// Grid-search oracle for the anchored error: the column profile is pinned to
/// row 0 and each remaining row offset is scanned over a grid. Exceeds the
/// optimum by at most `grid_step`. Columns where row 0 is missing are
/// excluded. Restricted to tiny inputs.
pub fn brute_force_error(
    values: &[f64],
    missing: &[bool],
    rows: usize,
    cols: usize,
    grid_step: f64,
) -> Result<f64, ProfileError> {
    if rows > 4 || cols > 6 {
        return Err(ProfileError::TooLarge { rows, cols });
    }
    if grid_step <= 0.0 {
        return Err(ProfileError::BadGridStep);
    }
    let at = |i: usize, j: usize| values[i * cols + j];
    let gone = |i: usize, j: usize| missing[i * cols + j] || missing[j];

    let anchored: Vec<usize> = (0..cols).filter(|&j| !missing[j]).collect();
    if anchored.is_empty() {
        return Err(ProfileError::EmptyRow(0));
    }

    let mut worst: f64 = 0.0;
    for i in 1..rows {
        let diffs: Vec<f64> = anchored
            .iter()
            .filter(|&&j| !gone(i, j))
            .map(|&j| at(i, j) - at(0, j))
            .collect();
        if diffs.is_empty() {
            return Err(ProfileError::EmptyRow(i));
        }
        let lo = diffs.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = diffs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let steps = ((hi - lo) / grid_step).ceil() as usize + 1;
        let mut best = f64::INFINITY;
        for k in 0..=steps {
            let offset = lo + k as f64 * grid_step;
            let err = diffs.iter().map(|d| (d - offset).abs()).fold(0.0, f64::max);
            best = best.min(err);
        }
        worst = worst.max(best);
    }
    Ok(worst)
}
