//! Fuzzy lagged co-clusters and the objective functions that rank them.

use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ClusterError {
    #[error("psi objective requires 0 < psi < 1, got {0}")]
    InvalidPsi(f64),
    #[error("objective needs at least 2 rows and 2 columns, got {rows}x{cols}")]
    InvalidSize { rows: usize, cols: usize },
    #[error("cluster has {rows} rows but {lags} lags")]
    LagCountMismatch { rows: usize, lags: usize },
    #[error("lag {lag} for row {row} outside [-n, n]")]
    LagOutOfRange { row: usize, lag: i64 },
    #[error("anchor row {0} is not a member of the cluster")]
    AnchorNotMember(usize),
    #[error("anchor row {0} must have lag 0")]
    AnchorNotNeutral(usize),
    #[error("fuzz {fuzz} at ({row},{col}) exceeds the bound {bound}")]
    FuzzOutOfBound { row: usize, col: usize, fuzz: i64, bound: u32 },
    #[error("row or column index out of matrix range")]
    IndexOutOfRange,
}

/// Monotone objective ranking cluster sizes.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Objective {
    /// `|I| * |J|`
    Area,
    /// `|I| + |J|`
    Perimeter,
    /// `|I| / psi^|J|` with `0 < psi < 1`; favors columns over rows.
    Psi(f64),
}

/// Score a cluster size under an objective. Strictly increasing in both
/// arguments for every kind.
pub fn objective_score(
    size_i: usize,
    size_j: usize,
    kind: Objective,
) -> Result<f64, ClusterError> {
    if size_i < 2 || size_j < 2 {
        return Err(ClusterError::InvalidSize { rows: size_i, cols: size_j });
    }
    match kind {
        Objective::Area => Ok(size_i as f64 * size_j as f64),
        Objective::Perimeter => Ok(size_i as f64 + size_j as f64),
        Objective::Psi(psi) => {
            if !(psi > 0.0 && psi < 1.0) {
                return Err(ClusterError::InvalidPsi(psi));
            }
            Ok(size_i as f64 / psi.powi(size_j as i32))
        }
    }
}

/// A mined or planted fuzzy lagged co-cluster.
///
/// Rows carry per-row lags normalized so the anchor row has lag 0; columns
/// are positions in the anchor's pure-lag frame. The entry of row `i`
/// backing cluster column `j` sits at matrix column `j + lag[i] + fuzz(i,j)`,
/// and like any other row the anchor may deviate from its pure-lag position
/// by bounded fuzz. The sparse fuzz map stores only nonzero deviations.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyLaggedCluster {
    /// Member row indices, ascending.
    pub rows: Vec<usize>,
    /// Lag per member, parallel to `rows`.
    pub lags: Vec<i64>,
    /// The row all lags and fuzz are relative to.
    pub anchor: usize,
    /// Member column indices, ascending, in anchor coordinates.
    pub cols: Vec<usize>,
    /// Sparse `(row, col) -> fuzz`; absent entries mean zero.
    pub fuzz: BTreeMap<(usize, usize), i64>,
    /// Bound every `|fuzz|` respects.
    pub max_fuzz: u32,
    /// Rows participating through the anti-correlated (negated) model.
    pub anti_rows: BTreeSet<usize>,
    /// Verified Chebyshev error of the aligned submatrix.
    pub achieved_error: f64,
}

impl FuzzyLaggedCluster {
    pub fn size_i(&self) -> usize {
        self.rows.len()
    }

    pub fn size_j(&self) -> usize {
        self.cols.len()
    }

    pub fn fuzz_at(&self, row: usize, col: usize) -> i64 {
        self.fuzz.get(&(row, col)).copied().unwrap_or(0)
    }

    pub fn lag_of(&self, row: usize) -> Option<i64> {
        self.rows.iter().position(|&r| r == row).map(|k| self.lags[k])
    }

    /// Matrix column backing `(row, col)`; may fall outside `[0, n)`.
    pub fn aligned_position(&self, row: usize, col: usize) -> Option<i64> {
        self.lag_of(row).map(|lag| col as i64 + lag + self.fuzz_at(row, col))
    }

    /// The matrix cells covered by this cluster: `(i, j + lag_i + fuzz_ij)`
    /// for every member pair whose aligned position is in range.
    pub fn cells(&self, n_cols: usize) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for (k, &row) in self.rows.iter().enumerate() {
            let lag = self.lags[k];
            for &col in &self.cols {
                let pos = col as i64 + lag + self.fuzz_at(row, col);
                if pos >= 0 && pos < n_cols as i64 {
                    out.insert((row, pos as usize));
                }
            }
        }
        out
    }

    /// Structural invariants against a matrix of the given dimensions.
    pub fn validate(&self, m: usize, n: usize) -> Result<(), ClusterError> {
        if self.rows.len() != self.lags.len() {
            return Err(ClusterError::LagCountMismatch {
                rows: self.rows.len(),
                lags: self.lags.len(),
            });
        }
        if self.rows.iter().any(|&r| r >= m) || self.cols.iter().any(|&c| c >= n) {
            return Err(ClusterError::IndexOutOfRange);
        }
        for (k, &lag) in self.lags.iter().enumerate() {
            if lag.unsigned_abs() > n as u64 {
                return Err(ClusterError::LagOutOfRange { row: self.rows[k], lag });
            }
        }
        match self.lag_of(self.anchor) {
            None => return Err(ClusterError::AnchorNotMember(self.anchor)),
            Some(0) => {}
            Some(_) => return Err(ClusterError::AnchorNotNeutral(self.anchor)),
        }
        for (&(row, col), &f) in &self.fuzz {
            if f.unsigned_abs() > u64::from(self.max_fuzz) {
                return Err(ClusterError::FuzzOutOfBound {
                    row,
                    col,
                    fuzz: f,
                    bound: self.max_fuzz,
                });
            }
        }
        Ok(())
    }

    /// Identity used for duplicate suppression: `(rows, lags, cols)`.
    pub fn identity(&self) -> (Vec<usize>, Vec<i64>, Vec<usize>) {
        (self.rows.clone(), self.lags.clone(), self.cols.clone())
    }
}
