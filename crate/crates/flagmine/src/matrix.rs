//! Real-valued data matrices with a missing-value mask.
//!
//! A matrix starts out either in the raw multiplicative domain (all
//! non-missing entries positive) or already additive. Mining always runs on
//! additive data; [`DataMatrix::log_transform`] moves raw data there.

use thiserror::Error;

/// Which domain the entries live in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Domain {
    /// Raw positive values; an additive structure only appears after `log`.
    MultiplicativeRaw,
    /// Natural-log values, or data that is natively additive.
    AdditiveLogged,
}

#[derive(Debug, Error)]
pub enum MatrixError {
    #[error("matrix must be at least 2x2, got {rows}x{cols}")]
    TooSmall { rows: usize, cols: usize },
    #[error("values/mask length {got} does not match {rows}x{cols}")]
    LengthMismatch { rows: usize, cols: usize, got: usize },
    #[error("non-finite value at ({row},{col})")]
    NonFinite { row: usize, col: usize },
    #[error("non-positive entry at ({row},{col}); log transform needs positive data")]
    NonPositiveEntry { row: usize, col: usize },
    #[error("matrix is already in the additive domain")]
    AlreadyAdditive,
}

/// An `m x n` matrix of reals plus a boolean missing mask, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    missing: Vec<bool>,
    has_missing: bool,
    domain: Domain,
}

impl DataMatrix {
    /// Build a fully-present matrix.
    pub fn from_values(
        rows: usize,
        cols: usize,
        values: Vec<f64>,
        domain: Domain,
    ) -> Result<Self, MatrixError> {
        let missing = vec![false; values.len()];
        Self::from_parts(rows, cols, values, missing, domain)
    }

    /// Build a matrix with an explicit missing mask. Masked entries may hold
    /// any placeholder; unmasked entries must be finite.
    pub fn from_parts(
        rows: usize,
        cols: usize,
        values: Vec<f64>,
        missing: Vec<bool>,
        domain: Domain,
    ) -> Result<Self, MatrixError> {
        if rows < 2 || cols < 2 {
            return Err(MatrixError::TooSmall { rows, cols });
        }
        if values.len() != rows * cols {
            return Err(MatrixError::LengthMismatch { rows, cols, got: values.len() });
        }
        if missing.len() != rows * cols {
            return Err(MatrixError::LengthMismatch { rows, cols, got: missing.len() });
        }
        for (idx, (&v, &miss)) in values.iter().zip(missing.iter()).enumerate() {
            if !miss && !v.is_finite() {
                return Err(MatrixError::NonFinite { row: idx / cols, col: idx % cols });
            }
        }
        let has_missing = missing.iter().any(|&b| b);
        Ok(Self { rows, cols, values, missing, has_missing, domain })
    }

    /// Build from per-row options; `None` marks a missing cell.
    pub fn from_rows(rows: &[Vec<Option<f64>>], domain: Domain) -> Result<Self, MatrixError> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.len());
        let mut values = Vec::with_capacity(m * n);
        let mut missing = Vec::with_capacity(m * n);
        for row in rows {
            if row.len() != n {
                return Err(MatrixError::LengthMismatch { rows: m, cols: n, got: row.len() });
            }
            for cell in row {
                match cell {
                    Some(v) => {
                        values.push(*v);
                        missing.push(false);
                    }
                    None => {
                        values.push(0.0);
                        missing.push(true);
                    }
                }
            }
        }
        Self::from_parts(m, n, values, missing, domain)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn has_missing(&self) -> bool {
        self.has_missing
    }

    pub fn is_missing(&self, row: usize, col: usize) -> bool {
        self.missing[row * self.cols + col]
    }

    /// Value at `(row, col)`, or `None` if masked.
    pub fn get(&self, row: usize, col: usize) -> Option<f64> {
        let idx = row * self.cols + col;
        if self.missing[idx] {
            None
        } else {
            Some(self.values[idx])
        }
    }

    /// Value at a signed column position; out-of-range counts as missing,
    /// mirroring how lag/fuzz alignments are treated.
    pub fn get_shifted(&self, row: usize, pos: i64) -> Option<f64> {
        if pos < 0 || pos >= self.cols as i64 {
            return None;
        }
        self.get(row, pos as usize)
    }

    /// One full row as a slice (including placeholder values in masked cells).
    pub fn row_values(&self, row: usize) -> &[f64] {
        &self.values[row * self.cols..(row + 1) * self.cols]
    }

    pub fn row_missing(&self, row: usize) -> &[bool] {
        &self.missing[row * self.cols..(row + 1) * self.cols]
    }

    /// Overwrite a cell and clear its missing flag.
    pub fn set(&mut self, row: usize, col: usize, value: f64) {
        let idx = row * self.cols + col;
        self.values[idx] = value;
        self.missing[idx] = false;
    }

    pub fn set_missing(&mut self, row: usize, col: usize) {
        self.missing[row * self.cols + col] = true;
        self.has_missing = true;
    }

    /// Element-wise natural log, taking the matrix into the additive domain.
    /// The missing mask is preserved.
    pub fn log_transform(&self) -> Result<DataMatrix, MatrixError> {
        if self.domain == Domain::AdditiveLogged {
            return Err(MatrixError::AlreadyAdditive);
        }
        let mut values = self.values.clone();
        for (idx, v) in values.iter_mut().enumerate() {
            if self.missing[idx] {
                continue;
            }
            if *v <= 0.0 {
                return Err(MatrixError::NonPositiveEntry {
                    row: idx / self.cols,
                    col: idx % self.cols,
                });
            }
            *v = v.ln();
        }
        Ok(DataMatrix {
            rows: self.rows,
            cols: self.cols,
            values,
            missing: self.missing.clone(),
            has_missing: self.has_missing,
            domain: Domain::AdditiveLogged,
        })
    }

    /// Element-wise exp, back to the raw domain.
    pub fn exp_transform(&self) -> DataMatrix {
        let mut values = self.values.clone();
        for (idx, v) in values.iter_mut().enumerate() {
            if !self.missing[idx] {
                *v = v.exp();
            }
        }
        DataMatrix {
            rows: self.rows,
            cols: self.cols,
            values,
            missing: self.missing.clone(),
            has_missing: self.has_missing,
            domain: Domain::MultiplicativeRaw,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn full(rows: usize, cols: usize, values: Vec<f64>, domain: Domain) -> DataMatrix {
        DataMatrix::from_values(rows, cols, values, domain).unwrap()
    }

    #[test]
    fn log_of_ones_is_zeros() {
        let m = full(2, 2, vec![1.0; 4], Domain::MultiplicativeRaw);
        let a = m.log_transform().unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(a.get(i, j), Some(0.0));
            }
        }
        assert_eq!(a.domain(), Domain::AdditiveLogged);
    }

    #[test]
    fn log_of_exponentials() {
        let e = std::f64::consts::E;
        let m = full(2, 2, vec![e, e * e, e, e], Domain::MultiplicativeRaw);
        let a = m.log_transform().unwrap();
        assert!((a.get(0, 0).unwrap() - 1.0).abs() < 1e-12);
        assert!((a.get(0, 1).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn log_rejects_non_positive() {
        let m = full(2, 2, vec![1.0, -3.0, 2.0, 2.0], Domain::MultiplicativeRaw);
        match m.log_transform() {
            Err(MatrixError::NonPositiveEntry { row: 0, col: 1 }) => {}
            other => panic!("expected NonPositiveEntry(0,1), got {other:?}"),
        }
    }

    #[test]
    fn log_then_exp_round_trips() {
        let vals: Vec<f64> = (0..12).map(|i| 0.5 + i as f64 * 3.7).collect();
        let m = full(3, 4, vals.clone(), Domain::MultiplicativeRaw);
        let back = m.log_transform().unwrap().exp_transform();
        for (i, v) in vals.iter().enumerate() {
            let got = back.get(i / 4, i % 4).unwrap();
            assert!((got - v).abs() / v <= 1e-12, "{got} vs {v}");
        }
    }

    #[test]
    fn missing_mask_preserved() {
        let m = DataMatrix::from_rows(
            &[vec![Some(1.0), None], vec![Some(2.0), Some(3.0)]],
            Domain::MultiplicativeRaw,
        )
        .unwrap();
        let a = m.log_transform().unwrap();
        assert!(a.is_missing(0, 1));
        assert_eq!(a.get(0, 1), None);
        assert!(a.has_missing());
    }

    #[test]
    fn rejects_tiny_and_ragged() {
        assert!(matches!(
            DataMatrix::from_values(1, 5, vec![0.0; 5], Domain::AdditiveLogged),
            Err(MatrixError::TooSmall { .. })
        ));
        assert!(matches!(
            DataMatrix::from_values(2, 2, vec![0.0; 3], Domain::AdditiveLogged),
            Err(MatrixError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn shifted_access_is_missing_out_of_range() {
        let m = full(2, 3, vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0], Domain::AdditiveLogged);
        assert_eq!(m.get_shifted(0, -1), None);
        assert_eq!(m.get_shifted(0, 3), None);
        assert_eq!(m.get_shifted(1, 2), Some(6.0));
    }
}
