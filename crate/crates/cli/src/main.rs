//! `neuroclust` command-line front end.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 input error (I/O, parse,
//! validation, generation), 4 dynamics did not terminate.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use serde::Serialize;

use neuroclust::io::{
    gen_blobs, load_iris, read_distance_csv, read_points_csv, render_curve_svg, write_curve_tsv,
    write_plateau_report, write_points_csv, write_result_json, BlobSpec, PlateauReport,
};
use neuroclust::{
    cluster_at_threshold, detect_plateaus, distances_from_points, make_grid, sweep, DistanceMatrix64,
    DynamicsConfig64, Error, GridMode,
};

const EXIT_USAGE: u8 = 2;
const EXIT_INPUT: u8 = 3;
const EXIT_NONCONVERGENCE: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "neuroclust", version, about = "Distance-only clustering by lateral inhibition, with K(t) plateau analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Cluster at a single interaction threshold.
    Cluster(ClusterArgs),
    /// Sweep the threshold, report K(t) and its plateaus.
    Sweep(SweepArgs),
    /// Generate a Gaussian blob dataset as a points CSV.
    Gen(GenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum InputKind {
    Points,
    Distances,
}

#[derive(Debug, Args, Serialize)]
#[group(id = "source", required = true, multiple = false)]
struct InputArgs {
    /// CSV file of objects (rows) and features (columns), or a distance matrix with --kind distances.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,

    /// Use the embedded Fisher iris measurements.
    #[arg(long, group = "source")]
    iris: bool,

    /// Generate blob data with the --gen-* parameters instead of reading a file.
    #[arg(long, group = "source")]
    generate: bool,

    #[arg(long, value_enum, default_value_t = InputKind::Points)]
    kind: InputKind,

    /// The first CSV line is a header.
    #[arg(long)]
    header: bool,

    /// Zero-based column holding class labels; excluded from the features.
    #[arg(long)]
    label_column: Option<usize>,

    #[command(flatten)]
    #[serde(flatten)]
    blobs: BlobArgs,
}

#[derive(Debug, Args, Serialize)]
struct DynamicsArgs {
    /// Activity transfer speed.
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,

    #[arg(long, default_value_t = 100_000)]
    max_iters: usize,

    /// Largest per-neuron activity change that still counts as a stalled step.
    #[arg(long, default_value_t = 1e-12)]
    stagnation_eps: f64,
}

impl DynamicsArgs {
    fn config(&self) -> DynamicsConfig64 {
        DynamicsConfig64 { alpha: self.alpha, max_iters: self.max_iters, stagnation_eps: self.stagnation_eps }
    }
}

#[derive(Debug, Args, Serialize)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Interaction threshold.
    #[arg(short, long)]
    t: f64,

    #[command(flatten)]
    dynamics: DynamicsArgs,

    /// Write the clustering result as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum Grid {
    Uniform,
    DistanceQuantile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum CountKind {
    /// Filtered when --min-class-size > 1, raw otherwise.
    Auto,
    Raw,
    Filtered,
}

#[derive(Debug, Args, Serialize)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,

    #[arg(long, value_enum, default_value_t = Grid::Uniform)]
    grid: Grid,

    #[arg(long, default_value_t = 200)]
    steps: usize,

    #[arg(long, default_value_t = 0.0)]
    t_min: f64,

    /// Upper threshold, or "auto" for 1.01 x the largest distance.
    #[arg(long, default_value = "auto")]
    t_max: String,

    /// Classes smaller than this are ignored by the filtered count.
    #[arg(long, default_value_t = 1)]
    min_class_size: usize,

    /// Which class count the plateau report ranks.
    #[arg(long, value_enum, default_value_t = CountKind::Auto)]
    count: CountKind,

    #[command(flatten)]
    dynamics: DynamicsArgs,

    /// Write the K(t) samples as TSV.
    #[arg(long)]
    tsv: Option<PathBuf>,

    /// Write the width-ranked plateau report as JSON.
    #[arg(long)]
    report: Option<PathBuf>,

    /// Write an SVG step plot of K(t).
    #[arg(long)]
    svg: Option<PathBuf>,

    /// Number of plateaus printed to standard output.
    #[arg(long, default_value_t = 5)]
    top: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
struct BlobArgs {
    #[arg(long = "gen-clusters", default_value_t = 5)]
    clusters: usize,

    #[arg(long = "gen-points-per-cluster", default_value_t = 10)]
    points_per_cluster: usize,

    #[arg(long = "gen-sigma", default_value_t = 1.0)]
    sigma: f64,

    #[arg(long = "gen-dim", default_value_t = 2)]
    dim: usize,

    /// Half-width of the cube the cluster centers are drawn from.
    #[arg(long = "gen-center-box", default_value_t = 20.0)]
    center_box: f64,

    #[arg(long = "gen-min-separation", default_value_t = 10.0)]
    min_center_separation: f64,

    #[arg(long = "gen-seed", default_value_t = 1)]
    seed: u64,
}

impl BlobArgs {
    fn spec(&self) -> BlobSpec {
        BlobSpec {
            clusters: self.clusters,
            points_per_cluster: self.points_per_cluster,
            sigma: self.sigma,
            dim: self.dim,
            center_box: self.center_box,
            seed: self.seed,
            min_center_separation: self.min_center_separation,
        }
    }
}

#[derive(Debug, Args, Serialize)]
struct GenArgs {
    #[command(flatten)]
    blobs: BlobArgs,

    /// Output CSV (header line, features, trailing label column).
    #[arg(short, long)]
    out: PathBuf,
}

fn load_distances(input: &InputArgs) -> Result<DistanceMatrix64, Error> {
    if input.iris {
        return distances_from_points(&load_iris().0);
    }
    if input.generate {
        return distances_from_points(&gen_blobs(&input.blobs.spec())?.0);
    }
    let path = input.input.as_deref().expect("clap enforces one input source");
    let dm = match input.kind {
        InputKind::Points => {
            let (ps, _) = read_points_csv(path, input.header, input.label_column)?;
            info!("read {} objects with {} features from {}", ps.n(), ps.m(), path.display());
            distances_from_points(&ps)?
        }
        InputKind::Distances => read_distance_csv(path, input.header)?,
    };
    Ok(dm)
}

fn log_config<T: Serialize>(command: &str, args: &T) {
    let json = serde_json::to_string(args).unwrap_or_else(|e| format!("<unserializable: {e}>"));
    info!("{command} configuration: {json}");
}

fn cmd_cluster(args: &ClusterArgs) -> Result<(), Error> {
    log_config("cluster", args);
    let dm = load_distances(&args.input)?;
    let result = cluster_at_threshold(&dm, args.t, &args.dynamics.config())?;
    info!("n={} t={} alpha={} iterations={}", dm.n(), result.t, result.alpha, result.iters);
    if let Some(path) = &args.json {
        write_result_json(&result, path)?;
    }
    println!("k={}", result.k);
    println!("class_sizes={:?}", result.class_sizes);
    println!("centers={:?}", result.centers);
    Ok(())
}

fn parse_t_max(raw: &str) -> Result<Option<f64>, Error> {
    if raw.eq_ignore_ascii_case("auto") {
        return Ok(None);
    }
    raw.parse::<f64>()
        .map(Some)
        .map_err(|_| Error::Parameter(format!("--t-max must be a number or \"auto\", got {raw:?}")))
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Error> {
    log_config("sweep", args);
    let cfg = args.dynamics.config();
    cfg.validate()?;
    let t_max = parse_t_max(&args.t_max)?;
    let dm = load_distances(&args.input)?;
    let mode = match args.grid {
        Grid::Uniform => GridMode::Uniform,
        Grid::DistanceQuantile => GridMode::DistanceQuantile,
    };
    let grid = make_grid(&dm, mode, args.steps, args.t_min, t_max)?;
    info!(
        "resolved grid: {} thresholds on [{}, {}] (max distance {})",
        grid.t_values.len(),
        grid.t_min,
        grid.t_max,
        dm.max_distance()
    );
    let curve = sweep(&dm, &grid, &cfg, args.min_class_size)?;
    let use_filtered = match args.count {
        CountKind::Auto => args.min_class_size > 1,
        CountKind::Raw => false,
        CountKind::Filtered => true,
    };
    let plateaus = detect_plateaus(&curve, use_filtered);
    let failed = curve.samples.iter().filter(|s| !s.converged).count();
    if failed > 0 {
        log::warn!("{failed} thresholds did not converge within {} iterations", cfg.max_iters);
    }
    if let Some(path) = &args.tsv {
        write_curve_tsv(&curve, path)?;
    }
    if let Some(path) = &args.report {
        let report = PlateauReport {
            alpha: cfg.alpha,
            min_class_size: args.min_class_size,
            use_filtered,
            t_min: grid.t_min,
            t_max: grid.t_max,
            samples: curve.samples.len(),
            plateaus: plateaus.clone(),
        };
        write_plateau_report(&report, path)?;
    }
    if let Some(path) = &args.svg {
        render_curve_svg(&curve, &plateaus, path)?;
    }
    println!("plateaus ({} count, widest first):", if use_filtered { "filtered" } else { "raw" });
    for p in plateaus.iter().take(args.top) {
        println!(
            "k={} t=[{:.6}, {:.6}] width={:.6} samples={}",
            p.k, p.t_start, p.t_end, p.width, p.sample_count
        );
    }
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> Result<(), Error> {
    log_config("gen", args);
    let spec = args.blobs.spec();
    let (ps, labels) = gen_blobs(&spec)?;
    let labels: Vec<String> = labels.iter().map(ToString::to_string).collect();
    write_points_csv(&args.out, &ps, Some(&labels))?;
    println!(
        "wrote {} points ({} clusters x {}, dim {}, sigma {}, seed {}) to {}",
        ps.n(),
        spec.clusters,
        spec.points_per_cluster,
        spec.dim,
        spec.sigma,
        spec.seed,
        display(&args.out)
    );
    Ok(())
}

fn display(p: &Path) -> String {
    p.display().to_string()
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Parameter(_) => EXIT_USAGE,
        Error::NonConvergence { .. } => EXIT_NONCONVERGENCE,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Cluster(a) => cmd_cluster(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Gen(a) => cmd_gen(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
