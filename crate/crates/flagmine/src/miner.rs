//! The Monte-Carlo fuzzy lagged co-cluster miner.
//!
//! Each iteration seeds a random anchor row plus a small discriminating
//! column set, grows rows whose lagged-and-fuzzed alignment to the anchor
//! fits inside a `4w` window, then grows columns the same way against a
//! reference column. Iterations are independent; output is deduplicated and
//! deterministically ordered, so worker count never changes the result.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::cluster::{objective_score, FuzzyLaggedCluster, Objective};
use crate::matrix::DataMatrix;
use crate::verify::verify_cluster;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("{name} must lie in (0, 1], got {value}")]
    InvalidFraction { name: &'static str, value: f64 },
    #[error("error bound must be finite and non-negative, got {0}")]
    InvalidError(f64),
    #[error("minimum cluster side must be at least 2: ceil({beta} * {dim}) = {threshold}")]
    ThresholdTooSmall { beta: f64, dim: usize, threshold: usize },
    #[error("discriminating set of {size} does not fit {cols} columns")]
    DiscSetTooLarge { size: usize, cols: usize },
    #[error("zero-fuzz subset {zero} exceeds discriminating set {disc}")]
    ZeroFuzzTooLarge { zero: usize, disc: usize },
    #[error("discriminating set must be non-empty")]
    EmptyDiscSet,
    #[error("iteration count must be positive")]
    ZeroIterations,
    #[error("min present fraction must lie in [0, 1], got {0}")]
    InvalidPresentFraction(f64),
    #[error("per-row fuzz bounds: expected {expected} entries, got {got}")]
    PerRowFuzzLength { expected: usize, got: usize },
    #[error("psi objective requires 0 < psi < 1, got {0}")]
    InvalidPsi(f64),
    #[error("discriminating probability must lie in (0, 1], got {0}")]
    InvalidDiscProb(f64),
    #[error("required iterations {required:.3e} exceed the 2^48 cap; use a smaller discriminating set")]
    IterationCapExceeded { required: f64 },
}

/// Maximum fuzziness, shared or per matrix row.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum FuzzBound {
    Uniform(u32),
    PerRow(Vec<u32>),
}

impl FuzzBound {
    pub fn for_row(&self, row: usize) -> u32 {
        match self {
            FuzzBound::Uniform(f) => *f,
            FuzzBound::PerRow(v) => v[row],
        }
    }

    pub fn max(&self) -> u32 {
        match self {
            FuzzBound::Uniform(f) => *f,
            FuzzBound::PerRow(v) => v.iter().copied().max().unwrap_or(0),
        }
    }
}

/// All miner tunables.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MinerConfig {
    /// Maximum acceptable error `w` in the additive domain.
    pub error: f64,
    /// Fuzziness bound.
    pub fuzz: FuzzBound,
    /// Minimum row fraction of the matrix a cluster must cover.
    pub min_row_fraction: f64,
    /// Minimum column fraction.
    pub min_col_fraction: f64,
    /// Discriminating set size `|S|`.
    pub disc_set_size: usize,
    /// Size of the zero-fuzz subset of the discriminating set.
    pub zero_fuzz_size: usize,
    /// Number of Monte-Carlo iterations.
    pub iterations: u64,
    pub objective: Objective,
    /// Also admit rows whose negation fits (two-pass window).
    pub anti_correlation: bool,
    /// Fraction of witnesses that must come from present data when the
    /// matrix has missing values.
    pub min_present_fraction: f64,
    /// Master seed; every iteration derives its own stream from it.
    pub seed: u64,
    /// Optional upper bound on the optimal column fraction, enabling the
    /// theoretical discriminating-set bound.
    pub theoretical_col_fraction: Option<f64>,
}

impl MinerConfig {
    /// Sensible defaults for a given matrix size and error bound: formula
    /// discriminating set, zero-fuzz subset of 3, calibrated iterations.
    pub fn for_matrix(rows: usize, cols: usize, error: f64) -> Self {
        let disc = default_disc_set_size(rows, cols).recommended;
        let zero_fuzz = disc.min(3);
        let beta = 0.3;
        let iterations =
            default_iterations(beta, beta, disc, disc_prob(disc)).unwrap_or(u64::MAX >> 16);
        Self {
            error,
            fuzz: FuzzBound::Uniform(1),
            min_row_fraction: beta,
            min_col_fraction: beta,
            disc_set_size: disc,
            zero_fuzz_size: zero_fuzz,
            iterations,
            objective: Objective::Area,
            anti_correlation: false,
            min_present_fraction: 0.5,
            seed: 0,
            theoretical_col_fraction: None,
        }
    }

    pub fn validate(&self, rows: usize, cols: usize) -> Result<(), ConfigError> {
        if !(self.error >= 0.0 && self.error.is_finite()) {
            return Err(ConfigError::InvalidError(self.error));
        }
        for (name, value) in [
            ("min_row_fraction", self.min_row_fraction),
            ("min_col_fraction", self.min_col_fraction),
        ] {
            if !(value > 0.0 && value <= 1.0) {
                return Err(ConfigError::InvalidFraction { name, value });
            }
        }
        if min_count(self.min_row_fraction, rows) < 2 {
            return Err(ConfigError::ThresholdTooSmall {
                beta: self.min_row_fraction,
                dim: rows,
                threshold: min_count(self.min_row_fraction, rows),
            });
        }
        if min_count(self.min_col_fraction, cols) < 2 {
            return Err(ConfigError::ThresholdTooSmall {
                beta: self.min_col_fraction,
                dim: cols,
                threshold: min_count(self.min_col_fraction, cols),
            });
        }
        if self.disc_set_size == 0 {
            return Err(ConfigError::EmptyDiscSet);
        }
        if self.disc_set_size > cols {
            return Err(ConfigError::DiscSetTooLarge { size: self.disc_set_size, cols });
        }
        if self.zero_fuzz_size > self.disc_set_size {
            return Err(ConfigError::ZeroFuzzTooLarge {
                zero: self.zero_fuzz_size,
                disc: self.disc_set_size,
            });
        }
        if self.iterations == 0 {
            return Err(ConfigError::ZeroIterations);
        }
        if !(0.0..=1.0).contains(&self.min_present_fraction) {
            return Err(ConfigError::InvalidPresentFraction(self.min_present_fraction));
        }
        if let FuzzBound::PerRow(v) = &self.fuzz {
            if v.len() != rows {
                return Err(ConfigError::PerRowFuzzLength { expected: rows, got: v.len() });
            }
        }
        if let Objective::Psi(psi) = self.objective {
            if !(psi > 0.0 && psi < 1.0) {
                return Err(ConfigError::InvalidPsi(psi));
            }
        }
        Ok(())
    }
}

/// `ceil(beta * dim)` with a small tolerance so exact fractions of the
/// dimension do not tip over from float rounding.
pub fn min_count(beta: f64, dim: usize) -> usize {
    (beta * dim as f64 - 1e-9).ceil().max(0.0) as usize
}

/// Recommended discriminating set size for an `m x n` matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscSetSize {
    /// Raw fitted value `0.6197 * log2(4mn) - 1.0063`.
    pub exact: f64,
    /// Rounded half-up and clamped to `[2, n]`.
    pub recommended: usize,
}

/// Fitted formula for `|S|`, independent of the optimal column fraction.
pub fn default_disc_set_size(rows: usize, cols: usize) -> DiscSetSize {
    let exact = 0.6197 * (4.0 * rows as f64 * cols as f64).log2() - 1.0063;
    let rounded = (exact + 0.5).floor().max(0.0) as usize;
    DiscSetSize { exact, recommended: rounded.clamp(2, cols) }
}

/// Theoretical lower bound on `|S|` when an upper bound on the optimal
/// column fraction is known. `None` when `3 * bound * (2F + 1) >= 1`, where
/// the bound degenerates.
pub fn theoretical_disc_set_size(
    rows: usize,
    cols: usize,
    col_fraction_upper: f64,
    fuzz: u32,
) -> Option<f64> {
    let base = 3.0 * col_fraction_upper * (2.0 * fuzz as f64 + 1.0);
    if base <= 0.0 || base >= 1.0 {
        return None;
    }
    Some((4.0 * rows as f64 * cols as f64).ln() / (1.0 / base).ln())
}

/// Measured discriminating probabilities for `|S|` in 4..=9; clamped to the
/// nearest measured value outside that range.
const DISC_PROB_TABLE: [(usize, f64); 6] =
    [(4, 0.082), (5, 0.408), (6, 0.743), (7, 0.894), (8, 0.941), (9, 0.956)];

pub fn disc_prob(disc_size: usize) -> f64 {
    let first = DISC_PROB_TABLE[0];
    let last = DISC_PROB_TABLE[DISC_PROB_TABLE.len() - 1];
    if disc_size <= first.0 {
        return first.1;
    }
    if disc_size >= last.0 {
        return last.1;
    }
    DISC_PROB_TABLE.iter().find(|&&(s, _)| s == disc_size).map(|&(_, p)| p).unwrap()
}

/// Iterations needed for the success guarantee, compensated by the inverse
/// discriminating probability: `ceil((1/p) * 2 ln 2 / (beta_i * beta_j^|S|))`.
pub fn default_iterations(
    beta_i: f64,
    beta_j: f64,
    disc_size: usize,
    disc_prob: f64,
) -> Result<u64, ConfigError> {
    if !(beta_i > 0.0 && beta_i <= 1.0) {
        return Err(ConfigError::InvalidFraction { name: "beta_i", value: beta_i });
    }
    if !(beta_j > 0.0 && beta_j <= 1.0) {
        return Err(ConfigError::InvalidFraction { name: "beta_j", value: beta_j });
    }
    if !(disc_prob > 0.0 && disc_prob <= 1.0) {
        return Err(ConfigError::InvalidDiscProb(disc_prob));
    }
    let required =
        (1.0 / disc_prob) * 2.0 * std::f64::consts::LN_2 / (beta_i * beta_j.powi(disc_size as i32));
    if !required.is_finite() || required > (1u64 << 48) as f64 {
        return Err(ConfigError::IterationCapExceeded { required });
    }
    Ok((required.ceil() as u64).max(1))
}

/// Expected success probability of a full run when iterations are scaled by
/// the inverse discriminating probability `p`: `1 - 0.25^p`.
pub fn expected_hit_rate(disc_prob: f64) -> f64 {
    1.0 - 0.25f64.powf(disc_prob)
}

/// One iteration's random seed: anchor row, discriminating columns, the
/// zero-fuzz subset, and the reference column for the column phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedChoice {
    pub anchor_row: usize,
    pub disc_set: Vec<usize>,
    pub zero_fuzz_set: Vec<usize>,
    /// Drawn from the zero-fuzz subset when one exists: the column phase
    /// reads its reference values with no fuzz allowance.
    pub anchor_col: usize,
}

pub fn draw_seed(
    rng: &mut impl Rng,
    rows: usize,
    cols: usize,
    disc_size: usize,
    zero_fuzz_size: usize,
) -> SeedChoice {
    let anchor_row = rng.gen_range(0..rows);
    let mut disc_set = rand::seq::index::sample(rng, cols, disc_size).into_vec();
    disc_set.sort_unstable();
    let mut zero_fuzz_set: Vec<usize> =
        rand::seq::index::sample(rng, disc_size, zero_fuzz_size).iter().collect();
    zero_fuzz_set.sort_unstable();
    let zero_fuzz_set: Vec<usize> = zero_fuzz_set.into_iter().map(|k| disc_set[k]).collect();
    let anchor_col = if zero_fuzz_set.is_empty() {
        disc_set[rng.gen_range(0..disc_set.len())]
    } else {
        zero_fuzz_set[rng.gen_range(0..zero_fuzz_set.len())]
    };
    SeedChoice { anchor_row, disc_set, zero_fuzz_set, anchor_col }
}

/// A row accepted by the row phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowJoin {
    pub row: usize,
    pub lag: i64,
    pub anti: bool,
    /// Witness fuzz per discriminating column.
    pub fuzz_on_disc: Vec<(usize, i64)>,
}

/// A column accepted by the column phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColJoin {
    pub col: usize,
    /// Witness fuzz per member row (absent rows were excused).
    pub fuzz: Vec<(usize, i64)>,
}

#[derive(Default)]
struct WindowScratch {
    events: Vec<(f64, u32, i32)>,
    counts: Vec<u32>,
    candidates: Vec<i64>,
}

/// Minimal covering-window sweep: does a window of width `width` contain one
/// event from each of `n_slots` slots? Events must already be sorted by
/// value. On success returns the lo index of the first accepting window.
fn covering_window(
    events: &[(f64, u32, i32)],
    n_slots: usize,
    width: f64,
    counts: &mut Vec<u32>,
) -> Option<usize> {
    counts.clear();
    counts.resize(n_slots, 0);
    let mut covered = 0usize;
    let mut hi = 0usize;
    for lo in 0..events.len() {
        while hi < events.len() && covered < n_slots {
            let s = events[hi].1 as usize;
            if counts[s] == 0 {
                covered += 1;
            }
            counts[s] += 1;
            hi += 1;
        }
        if covered < n_slots {
            return None;
        }
        if events[hi - 1].0 - events[lo].0 <= width {
            return Some(lo);
        }
        let s = events[lo].1 as usize;
        counts[s] -= 1;
        if counts[s] == 0 {
            covered -= 1;
        }
    }
    None
}

/// Per-slot witness with the smallest `|f|` (ties to negative) inside the
/// accepting window starting at `lo`.
fn extract_witnesses(
    events: &[(f64, u32, i32)],
    lo: usize,
    width: f64,
    n_slots: usize,
) -> Vec<Option<i32>> {
    let limit = events[lo].0 + width;
    let mut best: Vec<Option<i32>> = vec![None; n_slots];
    for &(value, slot, f) in &events[lo..] {
        if value > limit + f64::EPSILON * limit.abs().max(1.0) {
            break;
        }
        let b = &mut best[slot as usize];
        match b {
            None => *b = Some(f),
            Some(cur) => {
                if (f.abs(), f) < (cur.abs(), *cur) {
                    *b = Some(f);
                }
            }
        }
    }
    best
}

struct RowPhase<'a> {
    matrix: &'a DataMatrix,
    anchor_vals: Vec<Option<f64>>,
    disc_set: &'a [usize],
    zero_fuzz: Vec<bool>,
    w4: f64,
    min_present: f64,
    events_seen: usize,
}

impl<'a> RowPhase<'a> {
    fn new(matrix: &'a DataMatrix, seed: &'a SeedChoice, cfg: &MinerConfig) -> Self {
        let anchor_vals =
            seed.disc_set.iter().map(|&s| matrix.get(seed.anchor_row, s)).collect();
        RowPhase {
            matrix,
            anchor_vals,
            disc_set: &seed.disc_set,
            zero_fuzz: seed.disc_set.iter().map(|s| seed.zero_fuzz_set.contains(s)).collect(),
            w4: 4.0 * cfg.error,
            min_present: cfg.min_present_fraction,
            events_seen: 0,
        }
    }

    fn slot_fuzz(&self, slot: usize, row_fuzz: i64) -> i64 {
        if self.zero_fuzz[slot] {
            0
        } else {
            row_fuzz
        }
    }

    /// Strict acceptance at lag `t`: every discriminating column must have an
    /// in-range candidate and be covered by one window. Used when the matrix
    /// has no missing values, where nothing can be excused.
    fn check_lag_strict(
        &mut self,
        row: usize,
        row_fuzz: i64,
        t: i64,
        anti: bool,
        scratch: &mut WindowScratch,
    ) -> Option<Vec<(usize, i64)>> {
        let n = self.matrix.cols() as i64;
        let values = self.matrix.row_values(row);
        scratch.events.clear();
        let mut lower = f64::NEG_INFINITY;
        let mut upper = f64::INFINITY;
        for (k, &s) in self.disc_set.iter().enumerate() {
            let aval = self.anchor_vals[k].expect("strict mode requires full data");
            let fz = self.slot_fuzz(k, row_fuzz);
            let base = t + s as i64;
            let (mut lo_v, mut hi_v) = (f64::INFINITY, f64::NEG_INFINITY);
            let mut any = false;
            for f in -fz..=fz {
                let pos = base + f;
                if pos < 0 || pos >= n {
                    continue;
                }
                let e = if anti { values[pos as usize] + aval } else { values[pos as usize] - aval };
                scratch.events.push((e, k as u32, f as i32));
                lo_v = lo_v.min(e);
                hi_v = hi_v.max(e);
                any = true;
            }
            if !any {
                return None;
            }
            lower = lower.max(lo_v);
            upper = upper.min(hi_v);
            if lower - upper > self.w4 {
                return None;
            }
        }
        self.events_seen += scratch.events.len();
        scratch
            .events
            .sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite event values"));
        let lo = covering_window(&scratch.events, self.disc_set.len(), self.w4, &mut scratch.counts)?;
        let witnesses = extract_witnesses(&scratch.events, lo, self.w4, self.disc_set.len());
        Some(
            witnesses
                .into_iter()
                .enumerate()
                .map(|(k, f)| (self.disc_set[k], i64::from(f.expect("covered slot"))))
                .collect(),
        )
    }

    /// Excusing acceptance at lag `t`: columns with no present candidate are
    /// excused, the rest must be covered, and at least `nu * |S|` must be
    /// witnessed from real data.
    fn check_lag_excusing(
        &mut self,
        row: usize,
        row_fuzz: i64,
        t: i64,
        anti: bool,
        scratch: &mut WindowScratch,
    ) -> Option<Vec<(usize, i64)>> {
        let n = self.matrix.cols() as i64;
        scratch.events.clear();
        let mut realizable = Vec::with_capacity(self.disc_set.len());
        for (k, &s) in self.disc_set.iter().enumerate() {
            let Some(aval) = self.anchor_vals[k] else { continue };
            let fz = self.slot_fuzz(k, row_fuzz);
            let base = t + s as i64;
            let slot = realizable.len() as u32;
            let mut any = false;
            for f in -fz..=fz {
                let pos = base + f;
                if pos < 0 || pos >= n {
                    continue;
                }
                let Some(v) = self.matrix.get(row, pos as usize) else { continue };
                let e = if anti { v + aval } else { v - aval };
                scratch.events.push((e, slot, f as i32));
                any = true;
            }
            if any {
                realizable.push(k);
            }
        }
        let needed = (self.min_present * self.disc_set.len() as f64 - 1e-9).ceil().max(1.0) as usize;
        if realizable.len() < needed {
            return None;
        }
        self.events_seen += scratch.events.len();
        scratch
            .events
            .sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite event values"));
        let lo = covering_window(&scratch.events, realizable.len(), self.w4, &mut scratch.counts)?;
        let witnesses = extract_witnesses(&scratch.events, lo, self.w4, realizable.len());
        Some(
            witnesses
                .into_iter()
                .enumerate()
                .filter_map(|(slot, f)| f.map(|f| (self.disc_set[realizable[slot]], i64::from(f))))
                .collect(),
        )
    }

    /// Lag range where every discriminating column stays realizable.
    fn strict_lag_range(&self, row_fuzz: i64) -> (i64, i64) {
        let n = self.matrix.cols() as i64;
        let mut lo = i64::MIN;
        let mut hi = i64::MAX;
        for (k, &s) in self.disc_set.iter().enumerate() {
            let fz = self.slot_fuzz(k, row_fuzz);
            lo = lo.max(-(s as i64) - fz);
            hi = hi.min(n - 1 - s as i64 + fz);
        }
        (lo, hi)
    }

    fn try_join(
        &mut self,
        row: usize,
        row_fuzz: i64,
        anti: bool,
        scratch: &mut WindowScratch,
    ) -> Option<(i64, Vec<(usize, i64)>)> {
        if !self.matrix.has_missing() {
            let (t_lo, t_hi) = self.strict_lag_range(row_fuzz);
            if t_lo > t_hi {
                return None;
            }
            // Fast path: two zero-fuzz columns pin a necessary pairwise
            // condition that filters candidate lags in one linear pass.
            let zf: Vec<usize> =
                (0..self.disc_set.len()).filter(|&k| self.slot_fuzz(k, row_fuzz) == 0).collect();
            if zf.len() >= 2 {
                let (k1, k2) = (zf[0], zf[1]);
                let (s1, s2) = (self.disc_set[k1] as i64, self.disc_set[k2] as i64);
                let a1 = self.anchor_vals[k1].unwrap();
                let a2 = self.anchor_vals[k2].unwrap();
                let target = if anti { a2 - a1 } else { a1 - a2 };
                let values = self.matrix.row_values(row);
                scratch.candidates.clear();
                for t in t_lo..=t_hi {
                    let d = values[(t + s1) as usize] - values[(t + s2) as usize];
                    if (d - target).abs() <= self.w4 {
                        scratch.candidates.push(t);
                    }
                }
                scratch.candidates.sort_unstable_by_key(|&t| (t.abs(), t));
                let candidates = std::mem::take(&mut scratch.candidates);
                let mut result = None;
                for &t in &candidates {
                    if let Some(w) = self.check_lag_strict(row, row_fuzz, t, anti, scratch) {
                        result = Some((t, w));
                        break;
                    }
                }
                scratch.candidates = candidates;
                return result;
            }
            for t in LagOrder::new(t_lo, t_hi) {
                if let Some(w) = self.check_lag_strict(row, row_fuzz, t, anti, scratch) {
                    return Some((t, w));
                }
            }
            None
        } else {
            let n = self.matrix.cols() as i64;
            for t in LagOrder::new(-n, n) {
                if let Some(w) = self.check_lag_excusing(row, row_fuzz, t, anti, scratch) {
                    return Some((t, w));
                }
            }
            None
        }
    }
}

/// Yields lags by ascending `|t|`, negative first on ties.
struct LagOrder {
    lo: i64,
    hi: i64,
    next: Option<i64>,
}

impl LagOrder {
    fn new(lo: i64, hi: i64) -> Self {
        let start = if lo <= 0 && hi >= 0 { Some(0) } else if lo > 0 { Some(lo) } else { Some(hi) };
        LagOrder { lo, hi, next: start.filter(|_| lo <= hi) }
    }
}

impl Iterator for LagOrder {
    type Item = i64;

    fn next(&mut self) -> Option<i64> {
        let cur = self.next?;
        // successor in the order 0, -1, 1, -2, 2, ... restricted to [lo, hi]
        let step = |x: i64| if x >= 0 { -(x + 1) } else { -x };
        let mut cand = step(cur);
        loop {
            if cand.abs() > self.hi.max(-self.lo) {
                self.next = None;
                break;
            }
            if cand >= self.lo && cand <= self.hi {
                self.next = Some(cand);
                break;
            }
            cand = step(cand);
        }
        Some(cur)
    }
}

/// Row phase of one iteration: returns joining rows with lags, anti flags and
/// witness fuzz over the discriminating set. The anchor row always joins at
/// lag zero.
pub fn row_addition(
    matrix: &DataMatrix,
    seed: &SeedChoice,
    cfg: &MinerConfig,
) -> (Vec<RowJoin>, usize) {
    let mut phase = RowPhase::new(matrix, seed, cfg);
    let mut scratch = WindowScratch::default();
    let mut joins = Vec::new();
    let mut max_events = 0usize;
    for row in 0..matrix.rows() {
        if row == seed.anchor_row {
            joins.push(RowJoin {
                row,
                lag: 0,
                anti: false,
                fuzz_on_disc: seed.disc_set.iter().map(|&s| (s, 0)).collect(),
            });
            continue;
        }
        phase.events_seen = 0;
        let row_fuzz = i64::from(cfg.fuzz.for_row(row));
        if let Some((lag, fuzz_on_disc)) = phase.try_join(row, row_fuzz, false, &mut scratch) {
            joins.push(RowJoin { row, lag, anti: false, fuzz_on_disc });
        } else if cfg.anti_correlation {
            if let Some((lag, fuzz_on_disc)) = phase.try_join(row, row_fuzz, true, &mut scratch) {
                joins.push(RowJoin { row, lag, anti: true, fuzz_on_disc });
            }
        }
        max_events = max_events.max(phase.events_seen);
    }
    (joins, max_events)
}

/// Column phase: accept columns where every member row (minus excused ones)
/// places an event inside a `4w` window around the reference column.
///
/// Each row's reference value is read at its witnessed fuzz for the
/// reference column, as found by the row phase. With a zero-fuzz reference
/// column the witnessed fuzz is zero and this is the plain lag-aligned read;
/// without one, the unfuzzed read would be offset per row and reject nearly
/// every column on fully fuzzy data.
pub fn column_addition(
    matrix: &DataMatrix,
    joins: &[RowJoin],
    anchor_col: usize,
    cfg: &MinerConfig,
) -> (Vec<ColJoin>, usize) {
    let n = matrix.cols() as i64;
    let w4 = 4.0 * cfg.error;
    let refs: Vec<Option<f64>> = joins
        .iter()
        .map(|j| {
            let sign = if j.anti { -1.0 } else { 1.0 };
            let witnessed = j
                .fuzz_on_disc
                .iter()
                .find(|&&(s, _)| s == anchor_col)
                .map_or(0, |&(_, f)| f);
            matrix
                .get_shifted(j.row, anchor_col as i64 + j.lag + witnessed)
                .map(|v| sign * v)
        })
        .collect();
    let mut out = Vec::new();
    let mut scratch = WindowScratch::default();
    let mut max_events = 0usize;
    for col in 0..matrix.cols() {
        scratch.events.clear();
        let mut realizable = Vec::with_capacity(joins.len());
        for (k, join) in joins.iter().enumerate() {
            let Some(refv) = refs[k] else { continue };
            let fz = i64::from(cfg.fuzz.for_row(join.row));
            let sign = if join.anti { -1.0 } else { 1.0 };
            let base = col as i64 + join.lag;
            let slot = realizable.len() as u32;
            let mut any = false;
            for f in -fz..=fz {
                let pos = base + f;
                if pos < 0 || pos >= n {
                    continue;
                }
                let Some(v) = matrix.get(join.row, pos as usize) else { continue };
                scratch.events.push((sign * v - refv, slot, f as i32));
                any = true;
            }
            if any {
                realizable.push(k);
            }
        }
        let needed =
            (cfg.min_present_fraction * joins.len() as f64 - 1e-9).ceil().max(1.0) as usize;
        if realizable.len() < needed {
            continue;
        }
        max_events = max_events.max(scratch.events.len());
        scratch
            .events
            .sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite event values"));
        // Several window positions may accept (e.g. a neighboring column's
        // cells form their own coherent window); take the witness set with
        // the least total fuzz so a column is explained by its own cells
        // whenever possible.
        let n_slots = realizable.len();
        scratch.counts.clear();
        scratch.counts.resize(n_slots, 0);
        let mut covered = 0usize;
        let mut hi = 0usize;
        let mut best: Option<(u64, Vec<Option<i32>>)> = None;
        let events = &scratch.events;
        for lo in 0..events.len() {
            while hi < events.len() && covered < n_slots {
                let s = events[hi].1 as usize;
                if scratch.counts[s] == 0 {
                    covered += 1;
                }
                scratch.counts[s] += 1;
                hi += 1;
            }
            if covered < n_slots {
                break;
            }
            if events[hi - 1].0 - events[lo].0 <= w4 {
                let wit = extract_witnesses(events, lo, w4, n_slots);
                let score: u64 =
                    wit.iter().map(|f| u64::from(f.expect("covered").unsigned_abs())).sum();
                if best.as_ref().is_none_or(|(s, _)| score < *s) {
                    best = Some((score, wit));
                    if score == 0 {
                        break;
                    }
                }
            }
            let s = events[lo].1 as usize;
            scratch.counts[s] -= 1;
            if scratch.counts[s] == 0 {
                covered -= 1;
            }
        }
        let Some((_, witnesses)) = best else { continue };
        out.push(ColJoin {
            col,
            fuzz: witnesses
                .into_iter()
                .enumerate()
                .filter_map(|(slot, f)| f.map(|f| (joins[realizable[slot]].row, i64::from(f))))
                .collect(),
        });
    }

    // One physical column can be accepted under several (column, fuzz)
    // relabelings: shifting the column index and compensating every fuzz
    // witness lands on the same matrix cells. Keep one column per witnessed
    // cell pattern, preferring the least-fuzzy labeling.
    let lag_of: std::collections::HashMap<usize, i64> =
        joins.iter().map(|j| (j.row, j.lag)).collect();
    let mut by_cells: BTreeMap<Vec<(usize, i64)>, usize> = BTreeMap::new();
    let mut keep = vec![false; out.len()];
    for (idx, cj) in out.iter().enumerate() {
        let mut cells: Vec<(usize, i64)> =
            cj.fuzz.iter().map(|&(row, f)| (row, cj.col as i64 + lag_of[&row] + f)).collect();
        cells.sort_unstable();
        let weight = |c: &ColJoin| c.fuzz.iter().map(|&(_, f)| f.unsigned_abs()).sum::<u64>();
        match by_cells.entry(cells) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(idx);
                keep[idx] = true;
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let cur = *e.get();
                if weight(cj) < weight(&out[cur]) {
                    keep[cur] = false;
                    keep[idx] = true;
                    e.insert(idx);
                }
            }
        }
    }
    let out: Vec<ColJoin> =
        out.into_iter().enumerate().filter_map(|(i, c)| keep[i].then_some(c)).collect();
    (out, max_events)
}

/// Counters and phase timings for one mining run.
#[derive(Debug, Default)]
pub struct MineStats {
    pub iterations: u64,
    pub row_phase_nanos: u64,
    pub col_phase_nanos: u64,
    /// Iterations whose grown cluster met both size thresholds.
    pub candidates: u64,
    /// Candidates discarded because verification at `2w` failed.
    pub discarded_unverified: u64,
    /// Largest per-row event count seen in the row phase.
    pub max_row_events: usize,
    /// Largest per-column event count seen in the column phase.
    pub max_col_events: usize,
}

#[derive(Debug)]
pub struct MineOutput {
    pub clusters: Vec<FuzzyLaggedCluster>,
    pub stats: MineStats,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic per-iteration RNG stream derived from the master seed.
pub fn iteration_rng(master_seed: u64, iteration: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(splitmix64(master_seed ^ splitmix64(iteration)))
}

fn assemble_cluster(
    matrix: &DataMatrix,
    seed: &SeedChoice,
    joins: &[RowJoin],
    cols: &[ColJoin],
    cfg: &MinerConfig,
) -> Option<FuzzyLaggedCluster> {
    let mut order: Vec<usize> = (0..joins.len()).collect();
    order.sort_unstable_by_key(|&k| joins[k].row);
    let rows: Vec<usize> = order.iter().map(|&k| joins[k].row).collect();
    let lags: Vec<i64> = order.iter().map(|&k| joins[k].lag).collect();
    let anti_rows: BTreeSet<usize> =
        joins.iter().filter(|j| j.anti).map(|j| j.row).collect();
    let mut fuzz = BTreeMap::new();
    for cj in cols {
        for &(row, f) in &cj.fuzz {
            if f != 0 {
                fuzz.insert((row, cj.col), f);
            }
        }
    }
    let max_fuzz = rows.iter().map(|&r| cfg.fuzz.for_row(r)).max().unwrap_or(0);
    let mut cluster = FuzzyLaggedCluster {
        rows,
        lags,
        anchor: seed.anchor_row,
        cols: cols.iter().map(|c| c.col).collect(),
        fuzz,
        max_fuzz,
        anti_rows,
        achieved_error: f64::NAN,
    };
    let outcome = verify_cluster(matrix, &cluster, 2.0 * cfg.error).ok()?;
    if !outcome.valid {
        return None;
    }
    cluster.achieved_error = outcome.achieved_error;
    Some(cluster)
}

/// Run the full Monte-Carlo miner.
///
/// Output clusters all meet the size thresholds and verify at error `2w`.
/// Duplicates (same rows, lags and columns) are suppressed keeping the
/// earliest iteration's instance; the final order is descending objective
/// score, then lexicographic rows/columns. Iterations run on the ambient
/// rayon pool; results do not depend on the worker count.
pub fn mine(matrix: &DataMatrix, cfg: &MinerConfig) -> Result<MineOutput, ConfigError> {
    cfg.validate(matrix.rows(), matrix.cols())?;
    let min_rows = min_count(cfg.min_row_fraction, matrix.rows());
    let min_cols = min_count(cfg.min_col_fraction, matrix.cols());

    let row_nanos = AtomicU64::new(0);
    let col_nanos = AtomicU64::new(0);
    let candidates = AtomicU64::new(0);
    let discarded = AtomicU64::new(0);
    let max_row_events = AtomicUsize::new(0);
    let max_col_events = AtomicUsize::new(0);

    let mut found: Vec<(u64, FuzzyLaggedCluster)> = (0..cfg.iterations)
        .into_par_iter()
        .filter_map(|k| {
            let mut rng = iteration_rng(cfg.seed, k);
            let seed = draw_seed(
                &mut rng,
                matrix.rows(),
                matrix.cols(),
                cfg.disc_set_size,
                cfg.zero_fuzz_size,
            );
            let t0 = Instant::now();
            let (joins, row_events) = row_addition(matrix, &seed, cfg);
            row_nanos.fetch_add(t0.elapsed().as_nanos() as u64, Ordering::Relaxed);
            max_row_events.fetch_max(row_events, Ordering::Relaxed);
            if joins.len() < min_rows {
                return None;
            }
            let t1 = Instant::now();
            let (cols, col_events) =
                column_addition(matrix, &joins, seed.anchor_col, cfg);
            col_nanos.fetch_add(t1.elapsed().as_nanos() as u64, Ordering::Relaxed);
            max_col_events.fetch_max(col_events, Ordering::Relaxed);
            if cols.len() < min_cols {
                return None;
            }
            candidates.fetch_add(1, Ordering::Relaxed);
            match assemble_cluster(matrix, &seed, &joins, &cols, cfg) {
                Some(cluster) => Some((k, cluster)),
                None => {
                    discarded.fetch_add(1, Ordering::Relaxed);
                    None
                }
            }
        })
        .collect();
    found.sort_by_key(|(k, _)| *k);

    // Deduplicate by (rows, lags, cols), keeping the earliest instance.
    let mut seen = BTreeSet::new();
    let mut clusters: Vec<FuzzyLaggedCluster> = Vec::new();
    for (_, cluster) in found {
        if seen.insert(cluster.identity()) {
            clusters.push(cluster);
        }
    }
    clusters.sort_by(|a, b| {
        let sa = objective_score(a.size_i(), a.size_j(), cfg.objective).unwrap_or(0.0);
        let sb = objective_score(b.size_i(), b.size_j(), cfg.objective).unwrap_or(0.0);
        sb.partial_cmp(&sa)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then_with(|| a.rows.cmp(&b.rows))
            .then_with(|| a.cols.cmp(&b.cols))
            .then_with(|| a.lags.cmp(&b.lags))
    });

    Ok(MineOutput {
        clusters,
        stats: MineStats {
            iterations: cfg.iterations,
            row_phase_nanos: row_nanos.into_inner(),
            col_phase_nanos: col_nanos.into_inner(),
            candidates: candidates.into_inner(),
            discarded_unverified: discarded.into_inner(),
            max_row_events: max_row_events.into_inner(),
            max_col_events: max_col_events.into_inner(),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::Domain;

    fn matrix_from(rows: &[&[f64]]) -> DataMatrix {
        let m = rows.len();
        let n = rows[0].len();
        let mut vals = Vec::with_capacity(m * n);
        for r in rows {
            vals.extend_from_slice(r);
        }
        DataMatrix::from_values(m, n, vals, Domain::AdditiveLogged).unwrap()
    }

    fn basic_cfg(w: f64, fuzz: u32) -> MinerConfig {
        MinerConfig {
            error: w,
            fuzz: FuzzBound::Uniform(fuzz),
            min_row_fraction: 0.5,
            min_col_fraction: 0.5,
            disc_set_size: 2,
            zero_fuzz_size: 0,
            iterations: 1,
            objective: Objective::Area,
            anti_correlation: false,
            min_present_fraction: 0.5,
            seed: 0,
            theoretical_col_fraction: None,
        }
    }

    fn seed(anchor: usize, disc: Vec<usize>, anchor_col: usize) -> SeedChoice {
        SeedChoice { anchor_row: anchor, disc_set: disc, zero_fuzz_set: vec![], anchor_col }
    }

    #[test]
    fn disc_set_size_formula() {
        let d = default_disc_set_size(100, 100);
        assert!((d.exact - 8.4675).abs() < 0.01, "exact {}", d.exact);
        assert_eq!(d.recommended, 8);

        let tiny = default_disc_set_size(2, 2);
        assert!((tiny.exact - 1.4725).abs() < 0.01);
        assert_eq!(tiny.recommended, 2);
    }

    #[test]
    fn theoretical_disc_bound() {
        // |S| >= ln(4mn) / ln(1 / (3 b (2F+1)))
        let b = theoretical_disc_set_size(100, 100, 0.05, 1).unwrap();
        let expected = (4.0f64 * 100.0 * 100.0).ln() / (1.0f64 / (3.0 * 0.05 * 3.0)).ln();
        assert!((b - expected).abs() < 1e-12);
        assert!(theoretical_disc_set_size(100, 100, 0.5, 1).is_none());
    }

    #[test]
    fn iteration_formula() {
        assert_eq!(default_iterations(0.5, 0.5, 5, 1.0).unwrap(), 89);
        assert_eq!(default_iterations(1.0, 1.0, 7, 1.0).unwrap(), 2);
        // Independent route: exp of the log-sum.
        let via_logs = ((2.0f64 * std::f64::consts::LN_2).ln() + (1.0f64 / 0.5).ln()
            - 0.3f64.ln()
            - 8.0 * 0.3f64.ln())
        .exp();
        let got = default_iterations(0.3, 0.3, 8, 0.5).unwrap();
        assert_eq!(got, via_logs.ceil() as u64);
        assert_eq!(got, 140_863);

        // Shrinking the set by one scales the count by 1/beta_j.
        let smaller = default_iterations(0.5, 0.5, 4, 1.0).unwrap() as f64;
        let larger = default_iterations(0.5, 0.5, 5, 1.0).unwrap() as f64;
        assert!((larger / smaller - 2.0).abs() < 0.05);
    }

    #[test]
    fn iteration_cap() {
        assert!(matches!(
            default_iterations(0.01, 0.01, 30, 0.01),
            Err(ConfigError::IterationCapExceeded { .. })
        ));
    }

    #[test]
    fn hit_rate_formula() {
        assert!((expected_hit_rate(0.408) - 0.432).abs() < 1e-3);
        assert_eq!(expected_hit_rate(0.0), 0.0);
        assert!((expected_hit_rate(1.0) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn shifted_row_joins_with_positive_lag() {
        // Row 1 shows row 0 one column later: its entry backing anchor
        // column s sits at s + 1.
        let base = [1.0, 5.0, 2.0, 7.0, 3.0, 8.0];
        let mut shifted = [0.0; 6];
        for j in 1..6 {
            shifted[j] = base[j - 1];
        }
        shifted[0] = -11.0;
        let m = matrix_from(&[&base, &shifted]);
        let cfg = basic_cfg(0.0, 0);
        let s = seed(0, vec![2, 3], 2);
        let (joins, _) = row_addition(&m, &s, &cfg);
        assert_eq!(joins.len(), 2);
        let join = joins.iter().find(|j| j.row == 1).unwrap();
        assert_eq!(join.lag, 1);
        assert!(join.fuzz_on_disc.iter().all(|&(_, f)| f == 0));
    }

    #[test]
    fn anchor_always_joins_at_zero() {
        let m = matrix_from(&[&[0.0, 1.0, 2.0, 3.0], &[9.0, 9.5, 9.1, 9.7]]);
        let cfg = basic_cfg(0.01, 0);
        let s = seed(0, vec![0, 2], 0);
        let (joins, _) = row_addition(&m, &s, &cfg);
        assert!(joins.iter().any(|j| j.row == 0 && j.lag == 0 && !j.anti));
    }

    #[test]
    fn random_rows_rarely_join_structured_anchor() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let n = 40;
        let anchor: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let w = 0.004;
        let fuzz = 1u32;
        let disc: Vec<usize> = vec![5, 14, 23, 31, 38];
        let mut accepted = 0usize;
        let trials = 1000;
        for _ in 0..trials {
            let row: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let m = matrix_from(&[&anchor, &row]);
            let mut cfg = basic_cfg(w, fuzz);
            cfg.disc_set_size = disc.len();
            let s = seed(0, disc.clone(), 5);
            let (joins, _) = row_addition(&m, &s, &cfg);
            if joins.len() > 1 {
                accepted += 1;
            }
        }
        // Union bound over lags of the per-lag acceptance probability:
        // (1 - (1 - min(2w,1))^(2F+1))^|S| per window position, summed over
        // event anchors and lags. Keep a wide margin over the estimate.
        let per_cell = 1.0 - (1.0 - (2.0 * w).min(1.0)).powi(2 * fuzz as i32 + 1);
        let per_lag =
            (disc.len() * (2 * fuzz as usize + 1)) as f64 * per_cell.powi(disc.len() as i32 - 1);
        let bound = (2 * n) as f64 * per_lag;
        assert!(
            (accepted as f64 / trials as f64) <= bound * 3.0 + 0.01,
            "accepted {accepted}/{trials}, bound {bound}"
        );
    }

    #[test]
    fn column_phase_accepts_reference_and_model_columns() {
        // Two-row cluster over an exact additive model.
        let profile = [1.0, 4.0, 2.0, 6.0, 3.0];
        let mut row1 = [0.0; 5];
        for j in 0..5 {
            row1[j] = profile[j] + 2.0;
        }
        let m = matrix_from(&[&profile, &row1]);
        let cfg = basic_cfg(0.0, 0);
        let joins = vec![
            RowJoin { row: 0, lag: 0, anti: false, fuzz_on_disc: vec![] },
            RowJoin { row: 1, lag: 0, anti: false, fuzz_on_disc: vec![] },
        ];
        let (cols, _) = column_addition(&m, &joins, 1, &cfg);
        let ids: Vec<usize> = cols.iter().map(|c| c.col).collect();
        assert_eq!(ids, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn column_needs_fuzz_when_entry_deviates() {
        // Column 2 of row 1 matches the model only one position later.
        let anchor = [0.0, 5.0, 2.0, 3.0];
        let row1 = [1.0, 2.0, 9.0, 3.0];
        let m = matrix_from(&[&anchor, &row1]);
        let joins = vec![
            RowJoin { row: 0, lag: 0, anti: false, fuzz_on_disc: vec![] },
            RowJoin { row: 1, lag: 0, anti: false, fuzz_on_disc: vec![] },
        ];
        let strict = basic_cfg(0.0, 0);
        let (cols, _) = column_addition(&m, &joins, 0, &strict);
        assert!(!cols.iter().any(|c| c.col == 2));

        let fuzzy = basic_cfg(0.0, 1);
        let (cols, _) = column_addition(&m, &joins, 0, &fuzzy);
        let c2 = cols.iter().find(|c| c.col == 2).expect("fuzz admits column 2");
        assert_eq!(c2.fuzz.iter().find(|&&(r, _)| r == 1).unwrap().1, 1);
    }

    #[test]
    fn zero_fuzz_set_equals_fuzzless_run() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(3);
        for _ in 0..20 {
            let rows = 6;
            let n = 12;
            let vals: Vec<f64> = (0..rows * n).map(|_| rng.gen_range(0.0..1.0)).collect();
            let m = DataMatrix::from_values(rows, n, vals, Domain::AdditiveLogged).unwrap();
            let disc = vec![2, 5, 9];
            let mut fz = basic_cfg(0.05, 2);
            fz.disc_set_size = 3;
            let all_zero = SeedChoice {
                anchor_row: 0,
                disc_set: disc.clone(),
                zero_fuzz_set: disc.clone(),
                anchor_col: 2,
            };
            let (a, _) = row_addition(&m, &all_zero, &fz);
            let mut no_fuzz = basic_cfg(0.05, 0);
            no_fuzz.disc_set_size = 3;
            let plain = seed(0, disc.clone(), 2);
            let (b, _) = row_addition(&m, &plain, &no_fuzz);
            let ka: Vec<(usize, i64)> = a.iter().map(|j| (j.row, j.lag)).collect();
            let kb: Vec<(usize, i64)> = b.iter().map(|j| (j.row, j.lag)).collect();
            assert_eq!(ka, kb);
        }
    }

    #[test]
    fn missing_witnesses_are_excused_down_to_the_present_floor() {
        // Row 1 tracks the anchor exactly but lost two of four
        // discriminating entries; row 2 lost three.
        let anchor = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0];
        let offset = 2.0;
        let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
        rows.push(anchor.iter().map(|&v| Some(v)).collect());
        let mut partial: Vec<Option<f64>> = anchor.iter().map(|&v| Some(v + offset)).collect();
        partial[1] = None;
        partial[4] = None;
        rows.push(partial);
        let mut sparse: Vec<Option<f64>> = anchor.iter().map(|&v| Some(v + offset)).collect();
        sparse[1] = None;
        sparse[4] = None;
        sparse[6] = None;
        rows.push(sparse);
        let m = DataMatrix::from_rows(&rows, Domain::AdditiveLogged).unwrap();

        let mut cfg = basic_cfg(0.0, 0);
        cfg.disc_set_size = 4;
        cfg.min_present_fraction = 0.5;
        let s = seed(0, vec![1, 3, 4, 6], 3);
        let (joins, _) = row_addition(&m, &s, &cfg);
        // Row 1 keeps 2 of 4 witnesses (the floor); row 2 only 1.
        assert_eq!(joins.iter().map(|j| j.row).collect::<Vec<_>>(), vec![0, 1]);

        cfg.min_present_fraction = 0.75;
        let (joins, _) = row_addition(&m, &s, &cfg);
        assert_eq!(joins.iter().map(|j| j.row).collect::<Vec<_>>(), vec![0]);
    }

    #[test]
    fn per_row_fuzz_bounds_apply() {
        // Row 1 needs fuzz 1 to align; row 2 is an exact translate.
        let anchor = [5.0, 1.0, 4.0, 2.0, 7.0, 3.0];
        let mut fuzzy = [0.0; 6];
        let mut exact = [0.0; 6];
        for j in 0..6 {
            fuzzy[j] = anchor[j] + 1.0;
            exact[j] = anchor[j] + 2.0;
        }
        fuzzy.swap(2, 3); // entries for columns 2 and 3 land one step off
        let m = matrix_from(&[&anchor, &fuzzy, &exact]);
        let mut cfg = basic_cfg(0.0, 0);
        cfg.disc_set_size = 3;
        let s = seed(0, vec![1, 2, 4], 1);

        cfg.fuzz = FuzzBound::PerRow(vec![0, 0, 0]);
        let (joins, _) = row_addition(&m, &s, &cfg);
        assert_eq!(joins.iter().map(|j| j.row).collect::<Vec<_>>(), vec![0, 2]);

        cfg.fuzz = FuzzBound::PerRow(vec![0, 1, 0]);
        let (joins, _) = row_addition(&m, &s, &cfg);
        assert_eq!(joins.iter().map(|j| j.row).collect::<Vec<_>>(), vec![0, 1, 2]);
        let f = joins.iter().find(|j| j.row == 1).unwrap();
        assert!(f.fuzz_on_disc.iter().any(|&(s, f)| s == 2 && f != 0));
    }

    #[test]
    fn negated_row_joins_in_anti_mode() {
        let base = [1.0, 5.0, 2.0, 7.0, 3.0];
        let negated: Vec<f64> = base.iter().map(|v| -v).collect();
        let m = matrix_from(&[&base, &negated]);
        let mut cfg = basic_cfg(0.0, 0);
        let s = seed(0, vec![1, 3], 1);
        let (joins, _) = row_addition(&m, &s, &cfg);
        assert_eq!(joins.len(), 1, "without anti mode the negated row stays out");
        cfg.anti_correlation = true;
        let (joins, _) = row_addition(&m, &s, &cfg);
        let j = joins.iter().find(|j| j.row == 1).expect("anti pass admits the row");
        assert!(j.anti);
        assert_eq!(j.lag, 0);
    }

    #[test]
    fn config_rejects_bad_fractions() {
        let m = 10;
        let n = 10;
        let mut cfg = basic_cfg(0.1, 0);
        cfg.min_col_fraction = 1.2;
        assert!(matches!(
            cfg.validate(m, n),
            Err(ConfigError::InvalidFraction { name: "min_col_fraction", .. })
        ));
        let mut cfg = basic_cfg(0.1, 0);
        cfg.min_row_fraction = 0.05;
        assert!(matches!(cfg.validate(m, n), Err(ConfigError::ThresholdTooSmall { .. })));
    }

    #[test]
    fn mine_is_seed_deterministic() {
        use rand::prelude::*;
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(17);
        let vals: Vec<f64> = (0..20 * 12).map(|_| rng.gen_range(0.0..1.0)).collect();
        let m = DataMatrix::from_values(20, 12, vals, Domain::AdditiveLogged).unwrap();
        let mut cfg = basic_cfg(0.2, 1);
        cfg.min_row_fraction = 0.2;
        cfg.min_col_fraction = 0.3;
        cfg.disc_set_size = 3;
        cfg.iterations = 200;
        cfg.seed = 42;
        let a = mine(&m, &cfg).unwrap();
        let b = mine(&m, &cfg).unwrap();
        assert_eq!(a.clusters, b.clusters);
    }

    #[test]
    fn lag_order_walks_outward() {
        let order: Vec<i64> = LagOrder::new(-3, 2).collect();
        assert_eq!(order, vec![0, -1, 1, -2, 2, -3]);
        let clipped: Vec<i64> = LagOrder::new(1, 3).collect();
        assert_eq!(clipped, vec![1, 2, 3]);
        let neg: Vec<i64> = LagOrder::new(-4, -2).collect();
        assert_eq!(neg, vec![-2, -3, -4]);
    }
}
