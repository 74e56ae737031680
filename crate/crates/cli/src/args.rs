use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "mowsp", version, about = "Multi-objective weighted shortest paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a Waxman graph (W = 1, edge length) or with random objectives.
    GenWaxman(GenWaxman),
    /// Generate a coefficient file.
    GenLambdas(GenLambdas),
    /// Replace objectives with the four geographic ones (needs coords and tags).
    SynthGeo(SynthGeo),
    /// Solve and write a JSON solution file.
    Solve(Solve),
    /// Compare two solution files; exit 1 on divergence.
    Verify(Verify),
    /// Time standard against IDAQ on Waxman instances.
    Bench(Bench),
    /// Write chosen routes as GeoJSON.
    ExportGeojson(ExportGeojson),
    /// Dump Pareto-front structure statistics as JSON.
    Diagnostics(Diagnostics),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Preset {
    /// Intensity and beta tuned so instances have 150 to 350 nodes.
    Tuned,
    /// Reference parameters: intensity 5000, alpha 4, beta 0.03.
    Reference,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SolveAlgo {
    Standard,
    Idaq,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RegimeArg {
    Uncorrelated,
    Correlated,
}

#[derive(Debug, Args)]
pub struct GenWaxman {
    #[arg(long, value_enum, default_value = "tuned")]
    pub preset: Preset,
    #[arg(long, env = "MOWSP_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long)]
    pub intensity: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Keep every node instead of the largest strongly connected component.
    #[arg(long)]
    pub no_scc: bool,
    /// Replace edge length by this many Uniform[0, 1] objectives.
    #[arg(short = 'w', long)]
    pub objectives: Option<usize>,
    /// Attach random road tags.
    #[arg(long)]
    pub tags: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenLambdas {
    #[arg(short, long)]
    pub k: usize,
    #[arg(short, long)]
    pub w: usize,
    #[arg(long, value_enum, default_value = "uncorrelated")]
    pub regime: RegimeArg,
    /// Custom lower bound; overrides the regime together with --high.
    #[arg(long, requires = "high")]
    pub low: Option<f64>,
    #[arg(long, requires = "low")]
    pub high: Option<f64>,
    #[arg(long, env = "MOWSP_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SynthGeo {
    #[arg(short, long)]
    pub graph: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Solve {
    #[arg(long, value_enum, default_value = "idaq")]
    pub algo: SolveAlgo,
    #[arg(short, long)]
    pub graph: PathBuf,
    #[arg(short, long)]
    pub lambdas: PathBuf,
    #[arg(short, long, default_value_t = 0)]
    pub source: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Costs only; omit routes.
    #[arg(long)]
    pub no_paths: bool,
    /// Label cap for the oracle.
    #[arg(long)]
    pub label_cap: Option<usize>,
    /// Print solver counters to stderr.
    #[arg(long)]
    pub stats: bool,
}

#[derive(Debug, Args)]
pub struct Verify {
    pub a: PathBuf,
    pub b: PathBuf,
    /// Relative cost tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Also check routes edge by edge against this graph.
    #[arg(short, long)]
    pub graph: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Bench {
    #[arg(long, default_value_t = 8)]
    pub instances: usize,
    #[arg(short, long, value_delimiter = ',', default_values_t = [5, 15, 25, 35, 50])]
    pub k: Vec<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["uncorrelated", "correlated"])]
    pub regimes: Vec<RegimeArg>,
    #[arg(long, default_value_t = 5)]
    pub reps: usize,
    #[arg(short, long, default_value_t = 5)]
    pub w: usize,
    #[arg(long, value_enum, default_value = "tuned")]
    pub preset: Preset,
    #[arg(long, env = "MOWSP_SEED", default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Raw per-run records.
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ExportGeojson {
    #[arg(short, long)]
    pub graph: PathBuf,
    #[arg(short = 'S', long)]
    pub solution: PathBuf,
    #[arg(short, long, value_delimiter = ',', required = true)]
    pub targets: Vec<usize>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Diagnostics {
    #[arg(short, long)]
    pub graph: PathBuf,
    #[arg(short, long, default_value_t = 0)]
    pub source: usize,
    #[arg(long)]
    pub label_cap: Option<usize>,
    /// Also count non-dominated simple paths, giving up after this many.
    #[arg(long)]
    pub path_cap: Option<usize>,
}
