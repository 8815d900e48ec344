//! Command-line front end. Exit status: 0 on success, 1 on a domain error,
//! 2 on a usage error.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{self, Decoder, ExperimentConfig, GraphSpec, SignalMode, WalkLength};
use crate::certify::{certify, Budget};
use crate::decode::{l1_decode, vector_from_csv, vector_to_csv, LinkVector, Measurements};
use crate::error::{Error, Result};
use crate::graph::{make_complete, make_connected_gnp, make_gnp, Graph};
use crate::sensing::{build_matrix, expansion_report, MeasurementMatrix};
use crate::walk::{random_walks, walks_from_text, walks_to_text, StartMode, WalkConfig};

#[derive(Debug, Parser)]
#[command(name = "pathsense", version, about = "Compressive sensing over graphs with random-walk path measurements")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Cap on worker threads for experiments.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a graph and write it as an edge list.
    GenGraph {
        #[arg(long, value_enum)]
        kind: GraphKind,
        #[arg(long)]
        n: usize,
        /// Edge probability for `gnp`.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Redraw disconnected `gnp` samples (up to 100 times).
        #[arg(long)]
        connected: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate random walks on a graph, one vertex sequence per line.
    GenWalks {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        length: usize,
        #[arg(long, value_enum, default_value_t = StartArg::Uniform)]
        start: StartArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the measurement matrix CSV from walks.
    BuildMatrix {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        walks: PathBuf,
        /// Regularize walks to at most two visits per edge first.
        #[arg(long)]
        regularized: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact spark, nonnegative-recovery threshold and single-nonzero-row depth.
    Certify {
        #[arg(long)]
        matrix: PathBuf,
        /// Largest column subset size enumerated.
        #[arg(long)]
        budget: usize,
        #[arg(long)]
        max_subsets: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// l1-minimization decode of measurements y.
    Decode {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        y: PathBuf,
        /// Constrain the estimate to be nonnegative.
        #[arg(long)]
        nonneg: bool,
        /// Ground truth to score the estimate against.
        #[arg(long)]
        truth: Option<PathBuf>,
        /// Estimate as a single-column CSV.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Key-value recovery report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Exhaustive (k, eps) expansion statistics of a matrix.
    Expander {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        max_subsets: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recovery fraction against sparsity.
    Curve {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma-separated sparsity grid.
        #[arg(long, value_delimiter = ',', required = true)]
        ks: Vec<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum recoverable sparsity against measurement count.
    Frontier {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma-separated, increasing measurement counts.
        #[arg(long, value_delimiter = ',', required = true)]
        m_grid: Vec<usize>,
        #[arg(long, default_value_t = bench::DEFAULT_THRESHOLD)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GraphKind {
    Complete,
    Gnp,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StartArg {
    Uniform,
    Degree,
}

impl From<StartArg> for StartMode {
    fn from(s: StartArg) -> Self {
        match s {
            StartArg::Uniform => StartMode::Uniform,
            StartArg::Degree => StartMode::DegreeProportional,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SignalArg {
    Signed,
    Nonneg,
}

#[derive(Debug, Args)]
struct ExperimentArgs {
    #[arg(long, value_enum)]
    kind: GraphKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    /// Number of walks (rows); for `frontier` this is ignored in favour of the grid.
    #[arg(long, default_value_t = 0)]
    m: usize,
    /// Walk length in steps.
    #[arg(long, conflicts_with = "length_fraction")]
    length: Option<usize>,
    /// Walk length as a fraction of |E|.
    #[arg(long)]
    length_fraction: Option<f64>,
    #[arg(long, default_value_t = bench::DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, value_enum, default_value_t = SignalArg::Nonneg)]
    signal: SignalArg,
    #[arg(long)]
    regularized: bool,
    #[arg(long, value_enum, default_value_t = StartArg::Uniform)]
    start: StartArg,
    #[arg(long, default_value_t = 1)]
    graph_samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ExperimentArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let graph = match self.kind {
            GraphKind::Complete => GraphSpec::Complete { n: self.n },
            GraphKind::Gnp => GraphSpec::Gnp { n: self.n, p: self.p },
        };
        let walk_length = match (self.length, self.length_fraction) {
            (Some(t), None) => WalkLength::Steps(t),
            (None, Some(f)) => WalkLength::EdgeFraction(f),
            _ => return Err(Error::InvalidParameter("give exactly one of --length or --length-fraction".into())),
        };
        let signal = match self.signal {
            SignalArg::Signed => SignalMode::SignedGaussian,
            SignalArg::Nonneg => SignalMode::Nonnegative,
        };
        let mut cfg = ExperimentConfig::new(graph, self.m, walk_length, signal, self.seed);
        cfg.trials = self.trials;
        cfg.regularized = self.regularized;
        cfg.start_mode = self.start.into();
        cfg.graph_samples = self.graph_samples;
        cfg.decoder = Decoder::L1;
        Ok(cfg)
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Attach the file name to parse errors.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { line, msg } => Error::Parse { line, msg: format!("{}: {msg}", path.display()) },
        other => other,
    })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(p: &Path) -> Result<Graph> {
    in_file(p, Graph::from_edge_list(&read(p)?))
}

fn load_matrix(p: &Path) -> Result<MeasurementMatrix> {
    in_file(p, MeasurementMatrix::from_csv(&read(p)?))
}

fn execute(cmd: Command) -> Result<()> {
    match cmd {
        Command::GenGraph { kind, n, p, connected, seed, out } => {
            let g = match kind {
                GraphKind::Complete => make_complete(n)?,
                GraphKind::Gnp if connected => make_connected_gnp(n, p, seed, bench::RESAMPLE_CAP)?,
                GraphKind::Gnp => make_gnp(n, p, seed)?,
            };
            emit(&out, &g.to_edge_list())
        }
        Command::GenWalks { graph, count, length, start, seed, out } => {
            let g = load_graph(&graph)?;
            let walks = random_walks(&g, &WalkConfig { length, start_mode: start.into(), seed }, count)?;
            emit(&out, &walks_to_text(&walks))
        }
        Command::BuildMatrix { graph, walks, regularized, out } => {
            let g = load_graph(&graph)?;
            let w = in_file(&walks, walks_from_text(&g, &read(&walks)?))?;
            emit(&out, &build_matrix(&g, &w, regularized)?.to_csv())
        }
        Command::Certify { matrix, budget, max_subsets, out } => {
            let a = load_matrix(&matrix)?;
            let report = certify(&a, Budget { size_cap: budget, max_subsets })?;
            emit(&out, &report.to_key_values())
        }
        Command::Decode { matrix, y, nonneg, truth, out, report } => {
            let a = load_matrix(&matrix)?;
            let yv = Measurements::new(in_file(&y, vector_from_csv(&read(&y)?))?)?;
            let mut result = l1_decode(&a, &yv, nonneg)?;
            if let Some(tp) = truth {
                let t = in_file(&tp, vector_from_csv(&read(&tp)?))?;
                if t.len() != a.num_edges() {
                    return Err(Error::InvalidParameter(format!(
                        "truth has {} entries, expected {}",
                        t.len(),
                        a.num_edges()
                    )));
                }
                result.score(&LinkVector::new(t));
            }
            emit(&out, &vector_to_csv(&result.estimate.values))?;
            match report {
                Some(p) => emit(&Some(p), &result.to_key_values()),
                None => {
                    eprint!("{}", result.to_key_values());
                    Ok(())
                }
            }
        }
        Command::Expander { matrix, k, max_subsets, out } => {
            let a = load_matrix(&matrix)?;
            let r = expansion_report(&a, k, max_subsets)?;
            let witness: Vec<String> = r.witness.iter().map(usize::to_string).collect();
            let text = format!(
                "k={}\nworst_ratio={}\nepsilon={}\nwitness={}\nwitness_neighbors={}\nwitness_entries={}\nd_min={}\nd_max={}\n",
                r.k,
                r.worst_ratio,
                r.epsilon,
                witness.join(";"),
                r.witness_counts.0,
                r.witness_counts.1,
                r.d_min,
                r.d_max
            );
            emit(&out, &text)
        }
        Command::Curve { exp, ks, out } => {
            let mut cfg = exp.config()?;
            cfg.sparsities = ks;
            let r = bench::run_recovery_curve(&cfg)?;
            let edges = r.num_edges[0] as f64;
            for p in &r.points {
                eprintln!(
                    "k={} fraction={:.3} k/m={:.3} k/|E|={:.3}",
                    p.k,
                    p.fraction(),
                    p.k as f64 / cfg.m.max(1) as f64,
                    p.k as f64 / edges
                );
            }
            emit(&out, &r.to_csv())
        }
        Command::Frontier { exp, m_grid, threshold, out } => {
            let cfg = exp.config()?;
            let r = bench::run_sparsity_frontier(&cfg, &m_grid, threshold)?;
            emit(&out, &r.to_csv())
        }
    }
}

/// Parse `args` (including the program name) and run; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(cli.command)),
            Err(e) => Err(Error::InvalidParameter(format!("thread pool: {e}"))),
        },
        None => execute(cli.command),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
