//! File formats: matrix CSV, cluster JSON/CSV, trajectories, labels,
//! reports and run manifests.
//!
//! Indices are 1-based in every file and 0-based in memory. Floats are
//! written in Rust's shortest round-trip form, so re-reading reproduces the
//! exact bit pattern and replays are byte-identical.

use std::collections::{BTreeMap, BTreeSet};
use std::io::{BufRead, Write};
use thiserror::Error;

use crate::cluster::FuzzyLaggedCluster;
use crate::eval::EvalReport;
use crate::matrix::{DataMatrix, Domain};
use crate::miner::MinerConfig;
use crate::postprocess::MergedGroup;
use crate::synth::GroundTruth;

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("schema mismatch: {0}")]
    Schema(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error("invalid matrix: {0}")]
    Matrix(#[from] crate::matrix::MatrixError),
}

fn parse_cell(token: &str) -> Result<Option<f64>, String> {
    let t = token.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("nan") {
        return Ok(None);
    }
    t.parse::<f64>().map(Some).map_err(|e| format!("bad number {t:?}: {e}"))
}

/// Read a matrix from CSV: one row per object, empty cells or `NaN` missing,
/// optional header row (detected by non-numeric fields).
pub fn read_matrix_csv(reader: impl BufRead, domain: Domain) -> Result<DataMatrix, IoError> {
    let mut rows: Vec<Vec<Option<f64>>> = Vec::new();
    let mut header_checked = false;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cells: Result<Vec<Option<f64>>, String> =
            line.split(',').map(parse_cell).collect();
        match cells {
            Ok(parsed) => rows.push(parsed),
            Err(message) => {
                if !header_checked && rows.is_empty() {
                    header_checked = true; // header row, skip
                    continue;
                }
                return Err(IoError::Parse { line: idx + 1, message });
            }
        }
        header_checked = true;
    }
    Ok(DataMatrix::from_rows(&rows, domain)?)
}

pub fn write_matrix_csv(mut writer: impl Write, matrix: &DataMatrix) -> Result<(), IoError> {
    for i in 0..matrix.rows() {
        let mut line = String::new();
        for j in 0..matrix.cols() {
            if j > 0 {
                line.push(',');
            }
            if let Some(v) = matrix.get(i, j) {
                line.push_str(&format!("{v}"));
            }
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    Ok(())
}

/// On-disk cluster record; indices 1-based.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ClusterJson {
    pub rows: Vec<usize>,
    pub lags: Vec<i64>,
    pub cols: Vec<usize>,
    /// `(row, col, fuzz)` triples for nonzero fuzz.
    pub fuzz: Vec<(usize, usize, i64)>,
    pub max_fuzz: u32,
    pub error: f64,
    pub anti: bool,
    #[serde(default)]
    pub anti_rows: Vec<usize>,
    pub objective: f64,
    pub anchor: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bridge_cols: Option<Vec<usize>>,
}

impl ClusterJson {
    pub fn from_cluster(cluster: &FuzzyLaggedCluster, objective: f64) -> Self {
        ClusterJson {
            rows: cluster.rows.iter().map(|r| r + 1).collect(),
            lags: cluster.lags.clone(),
            cols: cluster.cols.iter().map(|c| c + 1).collect(),
            fuzz: cluster.fuzz.iter().map(|(&(r, c), &f)| (r + 1, c + 1, f)).collect(),
            max_fuzz: cluster.max_fuzz,
            error: cluster.achieved_error,
            anti: !cluster.anti_rows.is_empty(),
            anti_rows: cluster.anti_rows.iter().map(|r| r + 1).collect(),
            objective,
            anchor: cluster.anchor + 1,
            bridge_cols: None,
        }
    }

    pub fn to_cluster(&self) -> Result<FuzzyLaggedCluster, IoError> {
        let off = |v: usize, what: &str| -> Result<usize, IoError> {
            v.checked_sub(1)
                .ok_or_else(|| IoError::Schema(format!("{what} index 0 in a 1-based file")))
        };
        Ok(FuzzyLaggedCluster {
            rows: self.rows.iter().map(|&r| off(r, "row")).collect::<Result<_, _>>()?,
            lags: self.lags.clone(),
            cols: self.cols.iter().map(|&c| off(c, "col")).collect::<Result<_, _>>()?,
            fuzz: self
                .fuzz
                .iter()
                .map(|&(r, c, f)| Ok(((off(r, "row")?, off(c, "col")?), f)))
                .collect::<Result<BTreeMap<_, _>, IoError>>()?,
            max_fuzz: self.max_fuzz,
            anti_rows: self
                .anti_rows
                .iter()
                .map(|&r| off(r, "row"))
                .collect::<Result<BTreeSet<_>, _>>()?,
            achieved_error: self.error,
            anchor: off(self.anchor, "anchor")?,
        })
    }
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct MergedGroupJson {
    pub rows: Vec<usize>,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ClustersFile {
    pub version: String,
    pub seed: u64,
    pub clusters: Vec<ClusterJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub merged_groups: Option<Vec<MergedGroupJson>>,
}

pub fn write_json_pretty<T: serde::Serialize>(
    mut writer: impl Write,
    value: &T,
) -> Result<(), IoError> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writer.write_all(b"\n")?;
    Ok(())
}

pub fn read_clusters_json(reader: impl std::io::Read) -> Result<ClustersFile, IoError> {
    Ok(serde_json::from_reader(reader)?)
}

/// Flat CSV form of a cluster list: one line per aligned (row, column) pair.
/// Redundant per-cluster fields repeat on every line; parsing takes the
/// first occurrence. Round-trips rows, lags, cols and fuzz exactly.
pub fn write_clusters_csv(
    mut writer: impl Write,
    clusters: &[ClusterJson],
) -> Result<(), IoError> {
    writer.write_all(b"cluster,row,lag,col,fuzz,anti,max_fuzz,error,objective,anchor\n")?;
    for (id, c) in clusters.iter().enumerate() {
        let fuzz: BTreeMap<(usize, usize), i64> =
            c.fuzz.iter().map(|&(r, cl, f)| ((r, cl), f)).collect();
        for (&row, &lag) in c.rows.iter().zip(&c.lags) {
            for &col in &c.cols {
                let f = fuzz.get(&(row, col)).copied().unwrap_or(0);
                let anti = c.anti_rows.contains(&row) as u8;
                writeln!(
                    writer,
                    "{},{row},{lag},{col},{f},{anti},{},{},{},{}",
                    id + 1,
                    c.max_fuzz,
                    c.error,
                    c.objective,
                    c.anchor
                )?;
            }
        }
    }
    Ok(())
}

pub fn read_clusters_csv(reader: impl BufRead) -> Result<Vec<ClusterJson>, IoError> {
    let mut by_id: BTreeMap<usize, ClusterJson> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        if idx == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 10 {
            return Err(IoError::Parse {
                line: idx + 1,
                message: format!("expected 10 fields, got {}", fields.len()),
            });
        }
        let parse = |k: usize| -> Result<f64, IoError> {
            fields[k].trim().parse().map_err(|e| IoError::Parse {
                line: idx + 1,
                message: format!("field {k}: {e}"),
            })
        };
        let id = parse(0)? as usize;
        let row = parse(1)? as usize;
        let lag = parse(2)? as i64;
        let col = parse(3)? as usize;
        let f = parse(4)? as i64;
        let anti = parse(5)? as u8;
        let entry = by_id.entry(id).or_insert_with(|| ClusterJson {
            rows: Vec::new(),
            lags: Vec::new(),
            cols: Vec::new(),
            fuzz: Vec::new(),
            max_fuzz: 0,
            error: 0.0,
            anti: false,
            anti_rows: Vec::new(),
            objective: 0.0,
            anchor: 0,
            bridge_cols: None,
        });
        entry.max_fuzz = parse(6)? as u32;
        entry.error = parse(7)?;
        entry.objective = parse(8)?;
        entry.anchor = parse(9)? as usize;
        if !entry.rows.contains(&row) {
            entry.rows.push(row);
            entry.lags.push(lag);
            if anti == 1 {
                entry.anti_rows.push(row);
                entry.anti = true;
            }
        }
        if !entry.cols.contains(&col) {
            entry.cols.push(col);
        }
        if f != 0 && !entry.fuzz.contains(&(row, col, f)) {
            entry.fuzz.push((row, col, f));
        }
    }
    Ok(by_id.into_values().collect())
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct TruthFile {
    pub seed: u64,
    pub error: f64,
    pub fuzz: u32,
    pub cluster: ClusterJson,
}

pub fn truth_to_file(truth: &GroundTruth, error: f64, fuzz: u32) -> TruthFile {
    TruthFile {
        seed: truth.seed,
        error,
        fuzz,
        cluster: ClusterJson::from_cluster(&truth.cluster, 0.0),
    }
}

/// Labels CSV: `object_id,label`, 1-based object ids, header optional.
pub fn read_labels_csv(reader: impl BufRead) -> Result<Vec<usize>, IoError> {
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let mut parts = t.split(',');
        let a = parts.next().unwrap_or("");
        let b = parts.next().unwrap_or("");
        match (a.trim().parse::<usize>(), b.trim().parse::<usize>()) {
            (Ok(obj), Ok(label)) => {
                let obj = obj.checked_sub(1).ok_or_else(|| IoError::Parse {
                    line: idx + 1,
                    message: "object ids are 1-based".into(),
                })?;
                pairs.push((obj, label));
            }
            _ if idx == 0 => continue, // header
            _ => {
                return Err(IoError::Parse {
                    line: idx + 1,
                    message: format!("bad label line {t:?}"),
                })
            }
        }
    }
    pairs.sort_unstable();
    let mut labels = Vec::with_capacity(pairs.len());
    for (k, (obj, label)) in pairs.iter().enumerate() {
        if *obj != k {
            return Err(IoError::Schema(format!("label rows must cover 1..=N, missing {}", k + 1)));
        }
        labels.push(*label);
    }
    Ok(labels)
}

pub fn write_labels_csv(mut writer: impl Write, labels: &[usize]) -> Result<(), IoError> {
    writer.write_all(b"object_id,label\n")?;
    for (obj, label) in labels.iter().enumerate() {
        writeln!(writer, "{},{label}", obj + 1)?;
    }
    Ok(())
}

/// Trajectory CSV: `object_id,t,x,y` with 1-based ids and timesteps; missing
/// readings are skipped lines.
pub fn write_trajectory_csv(
    mut writer: impl Write,
    paths: &[(Vec<Option<f64>>, Vec<Option<f64>>)],
) -> Result<(), IoError> {
    writer.write_all(b"object_id,t,x,y\n")?;
    for (obj, (xs, ys)) in paths.iter().enumerate() {
        for (t, (x, y)) in xs.iter().zip(ys).enumerate() {
            if let (Some(x), Some(y)) = (x, y) {
                writeln!(writer, "{},{},{x},{y}", obj + 1, t + 1)?;
            }
        }
    }
    Ok(())
}

/// Parse a trajectory CSV back into per-object coordinate series.
pub fn read_trajectory_csv(
    reader: impl BufRead,
) -> Result<Vec<(Vec<Option<f64>>, Vec<Option<f64>>)>, IoError> {
    let mut readings: BTreeMap<usize, BTreeMap<usize, (f64, f64)>> = BTreeMap::new();
    let mut max_t = 0usize;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let fields: Vec<&str> = t.split(',').collect();
        if fields.len() != 4 {
            return Err(IoError::Parse { line: idx + 1, message: "expected 4 fields".into() });
        }
        let parsed: Result<(usize, usize, f64, f64), _> = (|| {
            Ok::<_, std::num::ParseFloatError>((
                fields[0].trim().parse::<f64>().map_err(|e| e)? as usize,
                fields[1].trim().parse::<f64>()? as usize,
                fields[2].trim().parse::<f64>()?,
                fields[3].trim().parse::<f64>()?,
            ))
        })();
        match parsed {
            Ok((obj, t, x, y)) => {
                if obj == 0 || t == 0 {
                    return Err(IoError::Parse {
                        line: idx + 1,
                        message: "object ids and timesteps are 1-based".into(),
                    });
                }
                max_t = max_t.max(t);
                readings.entry(obj - 1).or_default().insert(t - 1, (x, y));
            }
            Err(_) if idx == 0 => continue, // header
            Err(e) => {
                return Err(IoError::Parse { line: idx + 1, message: e.to_string() });
            }
        }
    }
    let n_obj = readings.keys().max().map_or(0, |&k| k + 1);
    let mut out = Vec::with_capacity(n_obj);
    for obj in 0..n_obj {
        let mut xs = vec![None; max_t];
        let mut ys = vec![None; max_t];
        if let Some(series) = readings.get(&obj) {
            for (&t, &(x, y)) in series {
                xs[t] = Some(x);
                ys[t] = Some(y);
            }
        }
        out.push((xs, ys));
    }
    Ok(out)
}

pub fn write_report_csv(mut writer: impl Write, report: &EvalReport) -> Result<(), IoError> {
    writer.write_all(b"metric,value\n")?;
    writeln!(writer, "cluster_count,{}", report.cluster_count)?;
    let mut put = |name: &str, v: Option<f64>| -> Result<(), IoError> {
        if let Some(v) = v {
            writeln!(writer, "{name},{v}")?;
        }
        Ok(())
    };
    put("one_minus_rnia", report.one_minus_rnia)?;
    put("f1", report.f1)?;
    put("entropy", report.entropy)?;
    put("coverage", report.coverage)?;
    put("merged_groups", report.merged_groups.map(|g| g as f64))?;
    Ok(())
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ManifestTimings {
    pub wall_ms: f64,
    pub row_phase_ms: f64,
    pub col_phase_ms: f64,
}

/// Everything needed to reproduce a mining run byte-for-byte.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub matrix_path: String,
    pub additive: bool,
    pub config: MinerConfig,
    pub workers: usize,
    pub bridges: bool,
    pub merge: bool,
    pub clusters_path: String,
    pub timings: ManifestTimings,
}

pub fn merged_groups_json(groups: &[MergedGroup]) -> Vec<MergedGroupJson> {
    groups
        .iter()
        .map(|g| MergedGroupJson {
            rows: g.rows.iter().map(|r| r + 1).collect(),
            members: g.members.iter().map(|m| m + 1).collect(),
        })
        .collect()
}
