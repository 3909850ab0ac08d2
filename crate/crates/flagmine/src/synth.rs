//! Synthetic data: random matrices, planted clusters, trajectory groups, and
//! the closed-form artifact-probability bound.

use rand::prelude::*;
use rand_chacha::ChaCha12Rng;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

use crate::cluster::FuzzyLaggedCluster;
use crate::matrix::{DataMatrix, Domain};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("planted cluster does not fit the matrix: {0}")]
    InfeasiblePlant(String),
}

/// Uniform i.i.d. matrix in `[lo, hi)`, fully present, reproducible from the
/// seed.
pub fn gen_random_matrix(
    rows: usize,
    cols: usize,
    lo: f64,
    hi: f64,
    seed: u64,
    domain: Domain,
) -> DataMatrix {
    assert!(lo < hi, "empty value range");
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let values: Vec<f64> = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
    DataMatrix::from_values(rows, cols, values, domain).expect("valid dimensions")
}

/// How to plant a ground-truth cluster into a matrix.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct PlantSpec {
    pub beta_i: f64,
    pub beta_j: f64,
    /// Additive-domain error bound of the planted entries.
    pub error: f64,
    /// Maximum fuzziness of the planted alignment.
    pub fuzz: u32,
    /// Range the planted values (profile sums) land in.
    pub value_range: (f64, f64),
    /// Fraction of planted columns kept fuzz-free across every row, so that
    /// zero-fuzz discriminating subsets remain usable on the plant.
    pub zero_fuzz_col_fraction: f64,
    pub seed: u64,
}

impl PlantSpec {
    pub fn new(beta_i: f64, beta_j: f64, error: f64, fuzz: u32, seed: u64) -> Self {
        PlantSpec {
            beta_i,
            beta_j,
            error,
            fuzz,
            value_range: (0.0, 1.0),
            zero_fuzz_col_fraction: 0.7,
            seed,
        }
    }
}

/// The planted cluster and the seed that produced it.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub cluster: FuzzyLaggedCluster,
    pub seed: u64,
}

/// Plant a cluster into a copy of `matrix`, overriding existing values.
///
/// Entries follow the additive model: the value written at the aligned
/// position of `(row, col)` is `row_offset + col_level + noise` with noise
/// uniform in `(-w, w)`. The anchor row is written noise-free so the planted
/// cluster verifies at its own error bound by construction. Per-row fuzz
/// paths are monotone (no two cluster columns land on the same cell), with
/// the configured fraction of columns pinned to zero fuzz.
///
/// Raw-domain matrices are planted through their logs and exponentiated
/// back; `spec.error` is then the log-domain (relative) error.
pub fn plant_cluster(
    matrix: &DataMatrix,
    spec: &PlantSpec,
) -> Result<(DataMatrix, GroundTruth), SynthError> {
    if matrix.domain() == Domain::MultiplicativeRaw {
        let logged = matrix
            .log_transform()
            .map_err(|e| SynthError::InfeasiblePlant(format!("log transform failed: {e}")))?;
        let (planted, truth) = plant_cluster(&logged, spec)?;
        return Ok((planted.exp_transform(), truth));
    }

    let m = matrix.rows();
    let n = matrix.cols();
    let size_i = crate::miner::min_count(spec.beta_i, m);
    let size_j = crate::miner::min_count(spec.beta_j, n);
    if size_i < 2 || size_j < 2 {
        return Err(SynthError::InfeasiblePlant(format!(
            "cluster of {size_i}x{size_j} is too small"
        )));
    }
    let fuzz = i64::from(spec.fuzz);
    let lag_room = 2i64;
    let col_lo = (fuzz + lag_room) as usize;
    let col_hi = n as i64 - 1 - fuzz - lag_room;
    if col_hi < col_lo as i64 || (col_hi as usize - col_lo + 1) < size_j {
        return Err(SynthError::InfeasiblePlant(format!(
            "no room for {size_j} columns with fuzz {fuzz} in {n} columns"
        )));
    }

    let mut rng = ChaCha12Rng::seed_from_u64(spec.seed);
    let mut rows = rand::seq::index::sample(&mut rng, m, size_i).into_vec();
    rows.sort_unstable();
    let anchor = rows[0];
    let span = col_hi as usize - col_lo + 1;
    let mut cols: Vec<usize> = rand::seq::index::sample(&mut rng, span, size_j)
        .into_iter()
        .map(|k| k + col_lo)
        .collect();
    cols.sort_unstable();

    let zero_cols: BTreeSet<usize> = {
        let count = ((spec.zero_fuzz_col_fraction * size_j as f64).round() as usize).min(size_j);
        let mut picks = rand::seq::index::sample(&mut rng, size_j, count).into_vec();
        picks.sort_unstable();
        picks.into_iter().map(|k| cols[k]).collect()
    };

    let (lo, hi) = spec.value_range;
    let span_v = hi - lo;
    let margin = spec.error.min(span_v / 8.0);
    let offsets_hi = (span_v / 2.0 - margin).max(span_v / 100.0);
    let levels: BTreeMap<usize, f64> =
        cols.iter().map(|&c| (c, rng.gen_range(lo + margin..lo + span_v / 2.0))).collect();

    let mut lags = Vec::with_capacity(size_i);
    let mut fuzz_map: BTreeMap<(usize, usize), i64> = BTreeMap::new();
    let mut planted = matrix.clone();
    for &row in &rows {
        let lag = if row == anchor { 0 } else { rng.gen_range(-lag_room..=lag_room) };
        lags.push(lag);
        let offset = if row == anchor { 0.0 } else { rng.gen_range(0.0..offsets_hi) };
        // Collision-free fuzz path: a bounded-displacement permutation of
        // the column axis, with zero-fuzz columns pinned in place.
        let slot_of = if row == anchor || spec.fuzz == 0 {
            None
        } else {
            Some(banded_jitter(&mut rng, n, spec.fuzz, |c| zero_cols.contains(&c)))
        };
        for &col in &cols {
            let f = slot_of.as_ref().map_or(0, |s| s[col] as i64 - col as i64);
            debug_assert!(f.unsigned_abs() <= u64::from(spec.fuzz));
            let pos = col as i64 + lag + f;
            debug_assert!(pos >= 0 && pos < n as i64);
            let noise = if row == anchor || spec.error == 0.0 {
                0.0
            } else {
                rng.gen_range(-spec.error..spec.error)
            };
            planted.set(row, pos as usize, offset + levels[&col] + noise);
            if f != 0 {
                fuzz_map.insert((row, col), f);
            }
        }
    }

    let cluster = FuzzyLaggedCluster {
        rows,
        lags,
        anchor,
        cols,
        fuzz: fuzz_map,
        max_fuzz: spec.fuzz,
        anti_rows: BTreeSet::new(),
        achieved_error: spec.error,
    };
    Ok((planted, GroundTruth { cluster, seed: spec.seed }))
}

/// Random permutation of `0..n` with displacement at most `width`, leaving
/// pinned indices fixed: `width` sweeps of non-overlapping random adjacent
/// transpositions. Each sweep moves an element at most one slot, no element
/// crosses a pinned one, and the map is a bijection, so per-row fuzz paths
/// never collide.
fn banded_jitter(
    rng: &mut impl Rng,
    n: usize,
    width: u32,
    pinned: impl Fn(usize) -> bool,
) -> Vec<usize> {
    let mut by_slot: Vec<usize> = (0..n).collect();
    for _ in 0..width {
        let mut p = 0;
        while p + 1 < n {
            if !pinned(by_slot[p]) && !pinned(by_slot[p + 1]) && rng.gen_bool(0.5) {
                by_slot.swap(p, p + 1);
                p += 2;
            } else {
                p += 1;
            }
        }
    }
    let mut slot_of = vec![0usize; n];
    for (p, &c) in by_slot.iter().enumerate() {
        slot_of[c] = p;
    }
    slot_of
}

fn ln_choose(n: f64, k: f64) -> f64 {
    if k < 0.0 || k > n {
        return f64::NEG_INFINITY;
    }
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}

/// Upper-bound probability that a random `m x n` matrix contains an artifact
/// cluster of the given dimensions, error (as a fraction of the value range)
/// and fuzziness. Evaluated in log space; exactly 0 at `w = 0` and exactly 1
/// once `2w >= 1`.
pub fn artifact_probability(
    m: usize,
    n: usize,
    size_i: usize,
    size_j: usize,
    w: f64,
    fuzz: u32,
) -> f64 {
    let x = (2.0 * w).clamp(0.0, 1.0);
    if x <= 0.0 {
        return 0.0;
    }
    if x >= 1.0 {
        return 1.0;
    }
    let per_cell_miss = (2.0 * f64::from(fuzz) + 1.0) * (-x).ln_1p(); // ln((1-x)^(2F+1))
    let q_cell = -per_cell_miss.exp_m1();
    let ln_q_cluster = (size_i as f64) * (size_j as f64) * q_cell.ln();
    let ln_positions = ln_choose(2.0 * m as f64 * n as f64, size_i as f64)
        + ln_choose(3.0 * n as f64, size_j as f64);
    if ln_positions == f64::NEG_INFINITY {
        return 0.0;
    }
    // P = 1 - (1 - q_cluster)^N = -expm1(N * ln1p(-q_cluster))
    let q_cluster = ln_q_cluster.exp();
    let ln_neg_ln1p = if q_cluster > 1e-10 {
        (-(-q_cluster).ln_1p()).ln()
    } else {
        // -ln(1 - q) = q + O(q^2) for tiny q
        ln_q_cluster
    };
    let ln_t = ln_positions + ln_neg_ln1p;
    if ln_t > 50f64.ln() {
        return 1.0;
    }
    if ln_t < 1e-300f64.ln() {
        return ln_t.exp();
    }
    (-(-ln_t.exp()).exp_m1()).clamp(0.0, 1.0)
}

/// Which coordinate stream becomes the mining matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum TrajectoryAxis {
    XOnly,
    YOnly,
    /// `x` and `y` interleaved into `2n` columns.
    Interleaved,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TrajectoryConfig {
    pub groups: usize,
    pub members: usize,
    pub timesteps: usize,
    /// Followers lag their leader by 1..=lag_spread steps.
    pub lag_spread: u32,
    /// Per-entry horizontal jitter bound of follower alignments.
    pub fuzz_spread: u32,
    /// Additive measurement noise amplitude.
    pub noise: f64,
    pub seed: u64,
    pub axis: TrajectoryAxis,
}

/// Synthetic flock trajectories and their labels.
#[derive(Debug, Clone)]
pub struct TrajectoryData {
    pub matrix: DataMatrix,
    /// Group label per matrix row.
    pub labels: Vec<usize>,
    /// Raw `(x, y)` series per object, `None` where undefined.
    pub paths: Vec<(Vec<Option<f64>>, Vec<Option<f64>>)>,
}

/// Interleaved flock trajectories: per group a leader path (mean-reverting
/// walk around a shared center, so groups overlap spatially) and followers
/// that trail it by a per-member lag with per-entry jitter and additive
/// noise. Row 0 of each group is the leader itself.
pub fn gen_trajectory_groups(cfg: &TrajectoryConfig) -> TrajectoryData {
    assert!(cfg.groups * cfg.members >= 2, "need at least two objects");
    assert!(cfg.timesteps >= 4, "need at least four timesteps");
    let n = cfg.timesteps;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);
    let gauss = move |rng: &mut ChaCha12Rng| -> f64 {
        // Box-Muller
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        (-2.0 * u.ln()).sqrt() * v.cos()
    };

    let mut paths: Vec<(Vec<Option<f64>>, Vec<Option<f64>>)> = Vec::new();
    let mut labels = Vec::new();
    for group in 0..cfg.groups {
        // Mean-reverting leader keeps all groups near the shared origin, so
        // trajectories of different groups interleave.
        let mut lx = vec![0.0f64; n];
        let mut ly = vec![0.0f64; n];
        for t in 1..n {
            lx[t] = 0.7 * lx[t - 1] + gauss(&mut rng);
            ly[t] = 0.7 * ly[t - 1] + gauss(&mut rng);
        }
        for member in 0..cfg.members {
            labels.push(group);
            if member == 0 {
                paths.push((
                    lx.iter().map(|&v| Some(v)).collect(),
                    ly.iter().map(|&v| Some(v)).collect(),
                ));
                continue;
            }
            let lag = if cfg.lag_spread == 0 {
                0i64
            } else {
                rng.gen_range(1..=i64::from(cfg.lag_spread))
            };
            // One temporal jitter per follower, shared by both coordinates.
            let slot_of = banded_jitter(&mut rng, n, cfg.fuzz_spread, |_| false);
            let mut fx = vec![None; n];
            let mut fy = vec![None; n];
            let draw = |rng: &mut ChaCha12Rng| {
                if cfg.noise == 0.0 {
                    0.0
                } else {
                    rng.gen_range(-cfg.noise..cfg.noise)
                }
            };
            for c in 0..n {
                let pos = slot_of[c] as i64 + lag;
                if pos < 0 || pos >= n as i64 {
                    continue;
                }
                fx[pos as usize] = Some(lx[c] + draw(&mut rng));
                fy[pos as usize] = Some(ly[c] + draw(&mut rng));
            }
            paths.push((fx, fy));
        }
    }

    let rows: Vec<Vec<Option<f64>>> = paths
        .iter()
        .map(|(x, y)| match cfg.axis {
            TrajectoryAxis::XOnly => x.clone(),
            TrajectoryAxis::YOnly => y.clone(),
            TrajectoryAxis::Interleaved => {
                let mut row = Vec::with_capacity(2 * n);
                for t in 0..n {
                    row.push(x[t]);
                    row.push(y[t]);
                }
                row
            }
        })
        .collect();
    let matrix = DataMatrix::from_rows(&rows, Domain::AdditiveLogged).expect("valid dims");
    TrajectoryData { matrix, labels, paths }
}
