//! Batch front-end: every subcommand is a plain function over parsed
//! arguments, so the binary stays a thin dispatcher and tests can drive the
//! exact same paths.

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::cluster::{objective_score, Objective};
use crate::eval::{self, EvalReport};
use crate::io::{self, ClusterJson, ClustersFile, IoError, ManifestTimings, RunManifest};
use crate::matrix::{DataMatrix, Domain};
use crate::miner::{self, FuzzBound, MinerConfig};
use crate::postprocess;
use crate::synth::{self, PlantSpec, TrajectoryAxis, TrajectoryConfig};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(#[from] IoError),
    #[error("{0}")]
    File(#[from] std::io::Error),
    #[error("{0}")]
    Config(#[from] miner::ConfigError),
    #[error("{0}")]
    Synth(#[from] synth::SynthError),
    #[error("{0}")]
    Invalid(String),
}

impl CliError {
    /// Exit code contract: 2 for I/O and schema problems, 3 for config.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 3,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(IoError::Schema(_)) => "schema",
            _ => "io",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "flagmine", version, about = "Mine fuzzy lagged co-clusters from CSV matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mine clusters from a CSV matrix.
    Mine(MineArgs),
    /// Generate synthetic inputs.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Tabulate the artifact-probability bound over parameter grids.
    Probe(ProbeArgs),
    /// Score mined clusters against ground truth and labels.
    Eval(EvalArgs),
    /// Time the mining phases across matrix sizes.
    Bench(BenchArgs),
    /// Re-run a recorded manifest; output is byte-identical.
    Replay(ReplayArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ObjectiveArg {
    Area,
    Perimeter,
    Psi,
}

#[derive(Debug, Args, Clone)]
pub struct MineArgs {
    /// Input matrix CSV.
    pub matrix: PathBuf,
    /// Maximum error w (additive domain).
    #[arg(short = 'w', long)]
    pub error: f64,
    /// Maximum fuzziness.
    #[arg(short = 'F', long, default_value_t = 1)]
    pub fuzz: u32,
    /// Per-row fuzziness bounds: CSV file with one integer per matrix row,
    /// overriding --fuzz.
    #[arg(long)]
    pub fuzz_per_row: Option<PathBuf>,
    /// Minimum row fraction.
    #[arg(long, default_value_t = 0.3)]
    pub min_rows: f64,
    /// Minimum column fraction.
    #[arg(long, default_value_t = 0.3)]
    pub min_cols: f64,
    /// Discriminating set size; default from the fitted formula.
    #[arg(long)]
    pub disc_size: Option<usize>,
    /// Known upper bound on the optimal column fraction; raises the default
    /// discriminating set size to the theoretical bound.
    #[arg(long)]
    pub col_fraction_bound: Option<f64>,
    /// Zero-fuzz subset size; default min(3, disc size).
    #[arg(long)]
    pub zero_fuzz: Option<usize>,
    /// Iteration count; default from the success-guarantee formula.
    #[arg(long)]
    pub iterations: Option<u64>,
    /// Discriminating probability used to scale default iterations.
    #[arg(long)]
    pub disc_prob: Option<f64>,
    #[arg(long, value_enum, default_value_t = ObjectiveArg::Area)]
    pub objective: ObjectiveArg,
    /// psi parameter when --objective psi.
    #[arg(long, default_value_t = 0.5)]
    pub psi: f64,
    /// Admit anti-correlated rows.
    #[arg(long)]
    pub anti: bool,
    /// Input is already additive; skip the log transform.
    #[arg(long)]
    pub additive: bool,
    /// Minimum fraction of present witnesses under missing data.
    #[arg(long, default_value_t = 0.5)]
    pub min_present: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; falls back to FLAGMINE_WORKERS, then all cores.
    #[arg(long)]
    pub workers: Option<usize>,
    /// Attach the maximum non-intersecting column set per cluster.
    #[arg(long)]
    pub bridges: bool,
    /// Attach merged row groups to the output.
    #[arg(long)]
    pub merge: bool,
    /// Cluster output path.
    #[arg(short = 'o', long, default_value = "clusters.json")]
    pub out: PathBuf,
    /// Manifest output path.
    #[arg(long, default_value = "manifest.json")]
    pub manifest: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum GenerateCmd {
    /// Uniform random matrix CSV.
    Matrix(GenMatrixArgs),
    /// Random matrix with a planted cluster and its truth JSON.
    Plant(GenPlantArgs),
    /// Synthetic flock trajectories.
    Trajectories(GenTrajArgs),
}

#[derive(Debug, Args)]
pub struct GenMatrixArgs {
    pub rows: usize,
    pub cols: usize,
    #[arg(long, default_value_t = 100.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1100.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long, default_value = "matrix.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenPlantArgs {
    pub rows: usize,
    pub cols: usize,
    #[arg(long, default_value_t = 0.0)]
    pub lo: f64,
    #[arg(long, default_value_t = 1.0)]
    pub hi: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta_i: f64,
    #[arg(long, default_value_t = 0.5)]
    pub beta_j: f64,
    #[arg(short = 'w', long)]
    pub error: f64,
    #[arg(short = 'F', long, default_value_t = 1)]
    pub fuzz: u32,
    /// Fraction of planted columns kept fuzz-free.
    #[arg(long, default_value_t = 0.7)]
    pub zero_fuzz_frac: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long, default_value = "matrix.csv")]
    pub out: PathBuf,
    #[arg(long, default_value = "truth.json")]
    pub truth: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AxisArg {
    X,
    Y,
    Interleaved,
}

#[derive(Debug, Args)]
pub struct GenTrajArgs {
    #[arg(long, default_value_t = 4)]
    pub groups: usize,
    #[arg(long, default_value_t = 8)]
    pub members: usize,
    #[arg(long, default_value_t = 200)]
    pub timesteps: usize,
    #[arg(long, default_value_t = 4)]
    pub lag_spread: u32,
    #[arg(long, default_value_t = 2)]
    pub fuzz_spread: u32,
    #[arg(long, default_value_t = 0.05)]
    pub noise: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value_t = AxisArg::X)]
    pub axis: AxisArg,
    /// Trajectory CSV (object_id,t,x,y).
    #[arg(short = 'o', long, default_value = "trajectories.csv")]
    pub out: PathBuf,
    #[arg(long, default_value = "labels.csv")]
    pub labels: PathBuf,
    /// Also write the mining matrix for the chosen axis.
    #[arg(long)]
    pub matrix_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long)]
    pub size_i: usize,
    #[arg(long)]
    pub size_j: usize,
    /// Comma-separated list of error fractions to tabulate.
    #[arg(long, value_delimiter = ',', default_value = "0,0.001,0.005,0.01,0.05,0.1,0.25,0.5")]
    pub w_values: Vec<f64>,
    /// Comma-separated list of fuzziness values.
    #[arg(long, value_delimiter = ',', default_value = "0,1,2,4")]
    pub fuzz_values: Vec<u32>,
    #[arg(short = 'o', long, default_value = "probe.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Mined clusters JSON.
    pub clusters: PathBuf,
    /// Ground-truth JSON from `generate plant`.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Object labels CSV.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Matrix column count for cell sets; defaults to what the clusters span.
    #[arg(long)]
    pub matrix_cols: Option<usize>,
    #[arg(short = 'o', long, default_value = "report.json")]
    pub out: PathBuf,
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, default_value_t = 200)]
    pub rows: usize,
    #[arg(long, value_delimiter = ',', default_value = "300,600")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 5)]
    pub runs: usize,
    #[arg(long, default_value_t = 100)]
    pub iterations: u64,
    #[arg(short = 'w', long, default_value_t = 0.002)]
    pub error: f64,
    #[arg(short = 'F', long, default_value_t = 1)]
    pub fuzz: u32,
    #[arg(long, default_value_t = 5)]
    pub disc_size: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short = 'o', long, default_value = "bench.csv")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub manifest: PathBuf,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Mine(args) => cmd_mine(&args),
        Command::Generate(GenerateCmd::Matrix(args)) => cmd_generate_matrix(&args),
        Command::Generate(GenerateCmd::Plant(args)) => cmd_generate_plant(&args),
        Command::Generate(GenerateCmd::Trajectories(args)) => cmd_generate_trajectories(&args),
        Command::Probe(args) => cmd_probe(&args),
        Command::Eval(args) => cmd_eval(&args),
        Command::Bench(args) => cmd_bench(&args),
        Command::Replay(args) => cmd_replay(&args),
    }
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    Ok(BufReader::new(File::open(path)?))
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn resolve_workers(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("FLAGMINE_WORKERS").ok().and_then(|v| v.parse().ok())
    })
    .filter(|&w| w > 0)
    .unwrap_or_else(rayon::current_num_threads)
}

fn load_matrix(path: &Path, additive: bool) -> Result<DataMatrix, CliError> {
    let domain = if additive { Domain::AdditiveLogged } else { Domain::MultiplicativeRaw };
    let matrix = io::read_matrix_csv(open(path)?, domain)?;
    if additive {
        Ok(matrix)
    } else {
        Ok(matrix.log_transform().map_err(IoError::Matrix)?)
    }
}

fn config_from_args(args: &MineArgs, matrix: &DataMatrix) -> Result<MinerConfig, CliError> {
    let fuzz = match &args.fuzz_per_row {
        None => FuzzBound::Uniform(args.fuzz),
        Some(path) => {
            let mut bounds = Vec::new();
            for line in std::io::BufRead::lines(open(path)?) {
                let line = line.map_err(IoError::Io)?;
                let t = line.trim();
                if t.is_empty() {
                    continue;
                }
                bounds.push(t.parse::<u32>().map_err(|e| {
                    CliError::Invalid(format!("bad per-row fuzz value {t:?}: {e}"))
                })?);
            }
            FuzzBound::PerRow(bounds)
        }
    };
    let disc_size = args.disc_size.unwrap_or_else(|| {
        let fitted = miner::default_disc_set_size(matrix.rows(), matrix.cols()).recommended;
        match args.col_fraction_bound.and_then(|b| {
            miner::theoretical_disc_set_size(matrix.rows(), matrix.cols(), b, args.fuzz)
        }) {
            Some(bound) => fitted.max(bound.ceil() as usize).min(matrix.cols()),
            None => fitted,
        }
    });
    let zero_fuzz = args.zero_fuzz.unwrap_or(disc_size.min(3));
    let disc_prob = args.disc_prob.unwrap_or_else(|| miner::disc_prob(disc_size));
    let iterations = match args.iterations {
        Some(n) => n,
        None => miner::default_iterations(args.min_rows, args.min_cols, disc_size, disc_prob)?,
    };
    let objective = match args.objective {
        ObjectiveArg::Area => Objective::Area,
        ObjectiveArg::Perimeter => Objective::Perimeter,
        ObjectiveArg::Psi => Objective::Psi(args.psi),
    };
    Ok(MinerConfig {
        error: args.error,
        fuzz,
        min_row_fraction: args.min_rows,
        min_col_fraction: args.min_cols,
        disc_set_size: disc_size,
        zero_fuzz_size: zero_fuzz,
        iterations,
        objective,
        anti_correlation: args.anti,
        min_present_fraction: args.min_present,
        seed: args.seed,
        theoretical_col_fraction: args.col_fraction_bound,
    })
}

/// Mine a CSV matrix into clusters.json plus a replayable manifest.
pub fn cmd_mine(args: &MineArgs) -> Result<(), CliError> {
    let wall = Instant::now();
    let matrix = load_matrix(&args.matrix, args.additive)?;
    let config = config_from_args(args, &matrix)?;
    let workers = resolve_workers(args.workers);
    mine_to_files(&matrix, &config, workers, args, wall)
}

fn mine_to_files(
    matrix: &DataMatrix,
    config: &MinerConfig,
    workers: usize,
    args: &MineArgs,
    wall: Instant,
) -> Result<(), CliError> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Invalid(format!("thread pool: {e}")))?;
    eprintln!(
        "flagmine: mining {}x{} with {} iterations on {} worker(s)",
        matrix.rows(),
        matrix.cols(),
        config.iterations,
        workers
    );
    let output = pool.install(|| miner::mine(matrix, config))?;

    let mut clusters_json: Vec<ClusterJson> = output
        .clusters
        .iter()
        .map(|c| {
            let score =
                objective_score(c.size_i(), c.size_j(), config.objective).unwrap_or(0.0);
            ClusterJson::from_cluster(c, score)
        })
        .collect();
    if args.bridges {
        for (json, cluster) in clusters_json.iter_mut().zip(&output.clusters) {
            let cols = postprocess::max_nonintersecting_columns(cluster, matrix.cols());
            json.bridge_cols = Some(cols.into_iter().map(|c| c + 1).collect());
        }
    }
    let merged = args
        .merge
        .then(|| io::merged_groups_json(&postprocess::merge_clusters(&output.clusters)));
    let file = ClustersFile {
        version: VERSION.to_string(),
        seed: config.seed,
        clusters: clusters_json,
        merged_groups: merged,
    };
    io::write_json_pretty(create(&args.out)?, &file)?;

    let manifest = RunManifest {
        command: "mine".into(),
        version: VERSION.to_string(),
        matrix_path: args.matrix.display().to_string(),
        additive: args.additive,
        config: config.clone(),
        workers,
        bridges: args.bridges,
        merge: args.merge,
        clusters_path: args.out.display().to_string(),
        timings: ManifestTimings {
            wall_ms: wall.elapsed().as_secs_f64() * 1e3,
            row_phase_ms: output.stats.row_phase_nanos as f64 / 1e6,
            col_phase_ms: output.stats.col_phase_nanos as f64 / 1e6,
        },
    };
    io::write_json_pretty(create(&args.manifest)?, &manifest)?;
    Ok(())
}

/// Re-run a recorded manifest. The cluster output is byte-identical to the
/// original run.
pub fn cmd_replay(args: &ReplayArgs) -> Result<(), CliError> {
    let manifest: RunManifest = serde_json::from_reader(open(&args.manifest)?)
        .map_err(IoError::Json)?;
    let wall = Instant::now();
    let matrix = load_matrix(Path::new(&manifest.matrix_path), manifest.additive)?;
    let mine_args = MineArgs {
        matrix: manifest.matrix_path.clone().into(),
        error: manifest.config.error,
        fuzz: manifest.config.fuzz.max(),
        fuzz_per_row: None,
        min_rows: manifest.config.min_row_fraction,
        min_cols: manifest.config.min_col_fraction,
        disc_size: Some(manifest.config.disc_set_size),
        col_fraction_bound: manifest.config.theoretical_col_fraction,
        zero_fuzz: Some(manifest.config.zero_fuzz_size),
        iterations: Some(manifest.config.iterations),
        disc_prob: None,
        objective: ObjectiveArg::Area,
        psi: 0.5,
        anti: manifest.config.anti_correlation,
        additive: manifest.additive,
        min_present: manifest.config.min_present_fraction,
        seed: manifest.config.seed,
        workers: Some(manifest.workers),
        bridges: manifest.bridges,
        merge: manifest.merge,
        out: manifest.clusters_path.clone().into(),
        manifest: args.manifest.clone(),
    };
    mine_to_files(&matrix, &manifest.config, manifest.workers, &mine_args, wall)
}

pub fn cmd_generate_matrix(args: &GenMatrixArgs) -> Result<(), CliError> {
    if args.lo >= args.hi {
        return Err(CliError::Invalid(format!("empty range {}..{}", args.lo, args.hi)));
    }
    let m = synth::gen_random_matrix(
        args.rows,
        args.cols,
        args.lo,
        args.hi,
        args.seed,
        Domain::MultiplicativeRaw,
    );
    io::write_matrix_csv(create(&args.out)?, &m)?;
    Ok(())
}

pub fn cmd_generate_plant(args: &GenPlantArgs) -> Result<(), CliError> {
    let base = synth::gen_random_matrix(
        args.rows,
        args.cols,
        args.lo,
        args.hi,
        args.seed,
        Domain::AdditiveLogged,
    );
    let spec = PlantSpec {
        beta_i: args.beta_i,
        beta_j: args.beta_j,
        error: args.error,
        fuzz: args.fuzz,
        value_range: (args.lo, args.hi),
        zero_fuzz_col_fraction: args.zero_fuzz_frac,
        seed: args.seed.wrapping_add(1),
    };
    let (planted, truth) = synth::plant_cluster(&base, &spec)?;
    io::write_matrix_csv(create(&args.out)?, &planted)?;
    io::write_json_pretty(create(&args.truth)?, &io::truth_to_file(&truth, args.error, args.fuzz))?;
    Ok(())
}

pub fn cmd_generate_trajectories(args: &GenTrajArgs) -> Result<(), CliError> {
    let cfg = TrajectoryConfig {
        groups: args.groups,
        members: args.members,
        timesteps: args.timesteps,
        lag_spread: args.lag_spread,
        fuzz_spread: args.fuzz_spread,
        noise: args.noise,
        seed: args.seed,
        axis: match args.axis {
            AxisArg::X => TrajectoryAxis::XOnly,
            AxisArg::Y => TrajectoryAxis::YOnly,
            AxisArg::Interleaved => TrajectoryAxis::Interleaved,
        },
    };
    let data = synth::gen_trajectory_groups(&cfg);
    io::write_trajectory_csv(create(&args.out)?, &data.paths)?;
    io::write_labels_csv(create(&args.labels)?, &data.labels)?;
    if let Some(path) = &args.matrix_out {
        io::write_matrix_csv(create(path)?, &data.matrix)?;
    }
    Ok(())
}

/// Emit the probability table behind the artifact-bound surface plots.
pub fn cmd_probe(args: &ProbeArgs) -> Result<(), CliError> {
    let mut out = create(&args.out)?;
    use std::io::Write;
    writeln!(out, "m,n,size_i,size_j,w,fuzz,probability").map_err(IoError::Io)?;
    for &w in &args.w_values {
        for &f in &args.fuzz_values {
            let p = synth::artifact_probability(args.rows, args.cols, args.size_i, args.size_j, w, f);
            writeln!(out, "{},{},{},{},{w},{f},{p}", args.rows, args.cols, args.size_i, args.size_j)
                .map_err(IoError::Io)?;
        }
    }
    Ok(())
}

/// Score clusters against truth and/or labels.
pub fn cmd_eval(args: &EvalArgs) -> Result<(), CliError> {
    let file = io::read_clusters_json(open(&args.clusters)?)?;
    let clusters: Vec<_> = file
        .clusters
        .iter()
        .map(|c| c.to_cluster())
        .collect::<Result<Vec<_>, _>>()?;
    let span = args.matrix_cols.unwrap_or_else(|| {
        clusters
            .iter()
            .flat_map(|c| c.cols.iter().map(|&j| j + 1 + c.max_fuzz as usize))
            .max()
            .unwrap_or(2)
    });

    let mut report = EvalReport {
        cluster_count: clusters.len(),
        one_minus_rnia: None,
        f1: None,
        entropy: None,
        coverage: None,
        merged_groups: None,
    };

    if let Some(path) = &args.truth {
        let truth: io::TruthFile = serde_json::from_reader(open(path)?).map_err(IoError::Json)?;
        let truth_cluster = truth.cluster.to_cluster()?;
        let truth_cells = truth_cluster.cells(span);
        if truth_cells.is_empty() {
            return Err(IoError::Schema("truth cluster covers no cells".into()).into());
        }
        let best = clusters
            .iter()
            .filter_map(|c| eval::rnia_complement(&c.cells(span), &truth_cells).ok())
            .fold(0.0f64, f64::max);
        report.one_minus_rnia = Some(best);
    }

    if let Some(path) = &args.labels {
        let labels = io::read_labels_csv(open(path)?)?;
        let classes: std::collections::BTreeSet<usize> = labels.iter().copied().collect();
        let groups = postprocess::merge_clusters(&clusters);
        let group_rows: Vec<Vec<usize>> = groups.iter().map(|g| g.rows.clone()).collect();
        report.merged_groups = Some(groups.len());
        report.f1 = Some(eval::labeling_f1(&group_rows, &labels));
        if classes.len() >= 2 {
            report.entropy = Some(
                eval::normalized_entropy(&group_rows, &labels, classes.len())
                    .map_err(|e| IoError::Schema(e.to_string()))?,
            );
        }
        let members: std::collections::BTreeSet<usize> = (0..labels.len()).collect();
        report.coverage = Some(eval::coverage(&group_rows, &members));
    }

    io::write_json_pretty(create(&args.out)?, &report)?;
    if let Some(path) = &args.csv {
        io::write_report_csv(create(path)?, &report)?;
    }
    Ok(())
}

/// Time mining across matrix widths; one CSV row per run.
pub fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let mut out = create(&args.out)?;
    use std::io::Write;
    writeln!(out, "m,n,run,iterations,row_phase_ms,col_phase_ms,wall_ms").map_err(IoError::Io)?;
    for &n in &args.sizes {
        for run in 0..args.runs {
            let matrix = synth::gen_random_matrix(
                args.rows,
                n,
                0.0,
                1.0,
                args.seed.wrapping_add(run as u64),
                Domain::AdditiveLogged,
            );
            let config = MinerConfig {
                error: args.error,
                fuzz: FuzzBound::Uniform(args.fuzz),
                min_row_fraction: 0.3,
                min_col_fraction: 0.3,
                disc_set_size: args.disc_size,
                zero_fuzz_size: args.disc_size.min(3),
                iterations: args.iterations,
                objective: Objective::Area,
                anti_correlation: false,
                min_present_fraction: 0.5,
                seed: args.seed.wrapping_add(1000 + run as u64),
                theoretical_col_fraction: None,
            };
            let t0 = Instant::now();
            let output = miner::mine(&matrix, &config)?;
            writeln!(
                out,
                "{},{n},{run},{},{},{},{}",
                args.rows,
                args.iterations,
                output.stats.row_phase_nanos as f64 / 1e6,
                output.stats.col_phase_nanos as f64 / 1e6,
                t0.elapsed().as_secs_f64() * 1e3
            )
            .map_err(IoError::Io)?;
        }
    }
    Ok(())
}
