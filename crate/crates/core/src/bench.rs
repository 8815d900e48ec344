//! Seeded Monte-Carlo recovery experiments: recovery fraction against
//! sparsity, and maximum recoverable sparsity against measurement count.
//!
//! Every random choice derives from the master seed by counter, and trials
//! are reduced in index order, so results do not depend on thread count.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::decode::{l1_decode, recovery_success, sparsest_oracle, LinkVector, Measurements};
use crate::error::{Error, Result};
use crate::graph::{make_complete, make_connected_gnp, Graph};
use crate::seed;
use crate::sensing::{build_matrix, MeasurementMatrix};
use crate::walk::{random_walks, StartMode, WalkConfig};

/// Disconnected G(n, p) samples are redrawn at most this many times.
pub const RESAMPLE_CAP: usize = 100;
pub const DEFAULT_TRIALS: usize = 100;
pub const DEFAULT_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GraphSpec {
    Complete { n: usize },
    Gnp { n: usize, p: f64 },
}

impl GraphSpec {
    fn build(&self, seed: u64) -> Result<Graph> {
        match *self {
            GraphSpec::Complete { n } => make_complete(n),
            GraphSpec::Gnp { n, p } => make_connected_gnp(n, p, seed, RESAMPLE_CAP),
        }
    }

    fn describe(&self) -> String {
        match self {
            GraphSpec::Complete { n } => format!("complete-{n}"),
            GraphSpec::Gnp { n, p } => format!("gnp-{n}-{p}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WalkLength {
    Steps(usize),
    /// `round(fraction * |E|)`, at least one step.
    EdgeFraction(f64),
}

impl WalkLength {
    pub fn resolve(&self, num_edges: usize) -> usize {
        match *self {
            WalkLength::Steps(t) => t,
            WalkLength::EdgeFraction(f) => ((num_edges as f64 * f).round() as usize).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalMode {
    /// Standard normal values on the support; decoded without sign constraints.
    SignedGaussian,
    /// `|N(0,1)|` values on the support; decoded with `x >= 0`.
    Nonnegative,
}

impl SignalMode {
    pub fn is_nonnegative(self) -> bool {
        self == SignalMode::Nonnegative
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decoder {
    L1,
    /// Brute-force sparsest solution; counts as success only when unique.
    Sparsest {
        k_cap: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub graph: GraphSpec,
    /// Number of walks, i.e. measurement rows.
    pub m: usize,
    pub walk_length: WalkLength,
    pub trials: usize,
    pub sparsities: Vec<usize>,
    pub signal: SignalMode,
    pub regularized: bool,
    pub start_mode: StartMode,
    pub seed: u64,
    /// Independent graph and walk-set draws; trial `i` uses instance `i mod graph_samples`.
    pub graph_samples: usize,
    pub decoder: Decoder,
}

impl ExperimentConfig {
    /// Complete graph, raw walks from uniform starts, l1 decoding, 100 trials.
    pub fn new(graph: GraphSpec, m: usize, walk_length: WalkLength, signal: SignalMode, seed: u64) -> Self {
        Self {
            graph,
            m,
            walk_length,
            trials: DEFAULT_TRIALS,
            sparsities: Vec::new(),
            signal,
            regularized: false,
            start_mode: StartMode::Uniform,
            seed,
            graph_samples: 1,
            decoder: Decoder::L1,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be at least 1".into()));
        }
        if self.graph_samples == 0 {
            return Err(Error::InvalidParameter("graph_samples must be at least 1".into()));
        }
        Ok(())
    }

    /// `# key=value` lines echoing the configuration.
    pub fn header(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# graph={}", self.graph.describe()).unwrap();
        writeln!(s, "# m={}", self.m).unwrap();
        match self.walk_length {
            WalkLength::Steps(t) => writeln!(s, "# walk_length={t}").unwrap(),
            WalkLength::EdgeFraction(f) => writeln!(s, "# walk_length_fraction={f}").unwrap(),
        }
        writeln!(s, "# trials={}", self.trials).unwrap();
        writeln!(s, "# signal={:?}", self.signal).unwrap();
        writeln!(s, "# regularized={}", self.regularized).unwrap();
        writeln!(s, "# start_mode={:?}", self.start_mode).unwrap();
        writeln!(s, "# graph_samples={}", self.graph_samples).unwrap();
        writeln!(s, "# decoder={:?}", self.decoder).unwrap();
        writeln!(s, "# seed={}", self.seed).unwrap();
        s
    }
}

/// One measurement matrix per graph sample, each with `rows` walks.
pub fn build_instances(cfg: &ExperimentConfig, rows: usize) -> Result<Vec<MeasurementMatrix>> {
    (0..cfg.graph_samples)
        .map(|i| {
            let g = cfg.graph.build(seed::derive(cfg.seed, &[0, i as u64]))?;
            if rows == 0 {
                return Ok(MeasurementMatrix::zeros(0, g.num_edges()));
            }
            let wc = WalkConfig {
                length: cfg.walk_length.resolve(g.num_edges()),
                start_mode: cfg.start_mode,
                seed: seed::derive(cfg.seed, &[1, i as u64]),
            };
            build_matrix(&g, &random_walks(&g, &wc, rows)?, cfg.regularized)
        })
        .collect()
}

/// The `k`-sparse signal of trial `trial`, on `num_edges` coordinates.
pub fn draw_signal(master: u64, k: usize, trial: usize, num_edges: usize, mode: SignalMode) -> LinkVector {
    let mut rng = seed::rng(seed::derive(master, &[2, k as u64, trial as u64]));
    let support = index::sample(&mut rng, num_edges, k.min(num_edges));
    let mut values = vec![0.0; num_edges];
    for j in support.iter() {
        let g: f64 = rng.sample(StandardNormal);
        values[j] = match mode {
            SignalMode::SignedGaussian => g,
            SignalMode::Nonnegative => g.abs(),
        };
    }
    LinkVector { values, declared_nonnegative: mode.is_nonnegative() }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub k: usize,
    pub trials: usize,
    pub successes: usize,
    /// Trials whose decoder returned an error (counted as failures).
    pub errors: usize,
}

impl CurvePoint {
    pub fn fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub points: Vec<CurvePoint>,
    /// `|E|` of every graph sample.
    pub num_edges: Vec<usize>,
    pub elapsed: Duration,
}

impl ExperimentResult {
    /// Largest grid `k` such that it and every smaller grid `k` reach `threshold`.
    pub fn max_recoverable_k(&self, threshold: f64) -> usize {
        self.points.iter().take_while(|p| p.fraction() >= threshold).map(|p| p.k).last().unwrap_or(0)
    }

    /// Results CSV `k,trials,successes,fraction` under a commented config block.
    pub fn to_csv(&self) -> String {
        let mut s = self.config.header();
        let edges: Vec<String> = self.num_edges.iter().map(usize::to_string).collect();
        writeln!(s, "# num_edges={}", edges.join(";")).unwrap();
        let errors: usize = self.points.iter().map(|p| p.errors).sum();
        writeln!(s, "# decode_errors={errors}").unwrap();
        s.push_str("k,trials,successes,fraction\n");
        for p in &self.points {
            writeln!(s, "{},{},{},{}", p.k, p.trials, p.successes, p.fraction()).unwrap();
        }
        s
    }
}

fn trial_success(a: &MeasurementMatrix, x: &LinkVector, mode: SignalMode, decoder: Decoder) -> Result<bool> {
    let y = Measurements::of(a, x);
    let nonneg = mode.is_nonnegative();
    match decoder {
        Decoder::L1 => {
            if a.rows() == 0 {
                return Ok(x.sparsity() == 0);
            }
            Ok(recovery_success(&l1_decode(a, &y, nonneg)?.estimate, x))
        }
        Decoder::Sparsest { k_cap } => {
            let cap = k_cap.min(a.num_edges());
            Ok(match sparsest_oracle(a, &y, nonneg, cap, None)? {
                Some(sol) => sol.is_unique() && recovery_success(&sol.solutions[0], x),
                None => false,
            })
        }
    }
}

/// Per-trial outcomes (`Ok(success)` or `Err`) for every `k`, in trial order.
fn trial_outcomes(instances: &[MeasurementMatrix], cfg: &ExperimentConfig, ks: &[usize]) -> Vec<Vec<Result<bool>>> {
    let jobs: Vec<(usize, usize)> =
        ks.iter().enumerate().flat_map(|(ki, _)| (0..cfg.trials).map(move |t| (ki, t))).collect();
    let flat: Vec<Result<bool>> = jobs
        .par_iter()
        .map(|&(ki, t)| {
            let a = &instances[t % instances.len()];
            let x = draw_signal(cfg.seed, ks[ki], t, a.num_edges(), cfg.signal);
            trial_success(a, &x, cfg.signal, cfg.decoder)
        })
        .collect();
    flat.chunks(cfg.trials).map(<[_]>::to_vec).collect()
}

fn summarize(k: usize, outcomes: &[Result<bool>]) -> CurvePoint {
    CurvePoint {
        k,
        trials: outcomes.len(),
        successes: outcomes.iter().filter(|o| matches!(o, Ok(true))).count(),
        errors: outcomes.iter().filter(|o| o.is_err()).count(),
    }
}

/// Recovery fraction at every sparsity in `cfg.sparsities`.
pub fn run_recovery_curve(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let instances = build_instances(cfg, cfg.m)?;
    let min_edges = instances.iter().map(MeasurementMatrix::num_edges).min().unwrap();
    if let Some(&k) = cfg.sparsities.iter().find(|&&k| k >= min_edges) {
        return Err(Error::InvalidParameter(format!("sparsity {k} not below |E| = {min_edges}")));
    }
    let points = curve_on_instances(&instances, cfg, &cfg.sparsities);
    Ok(ExperimentResult {
        config: cfg.clone(),
        points,
        num_edges: instances.iter().map(MeasurementMatrix::num_edges).collect(),
        elapsed: start.elapsed(),
    })
}

/// Recovery curve against caller-supplied matrices (one per graph sample).
pub fn curve_on_instances(instances: &[MeasurementMatrix], cfg: &ExperimentConfig, ks: &[usize]) -> Vec<CurvePoint> {
    trial_outcomes(instances, cfg, ks).iter().zip(ks).map(|(o, &k)| summarize(k, o)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontierResult {
    pub config: ExperimentConfig,
    pub threshold: f64,
    /// `(m, max_recoverable_k)` for every grid value.
    pub points: Vec<(usize, usize)>,
    /// The k-sweep behind every grid value.
    pub sweeps: Vec<Vec<CurvePoint>>,
    pub elapsed: Duration,
}

impl FrontierResult {
    /// Results CSV `m,max_k` under a commented config block.
    pub fn to_csv(&self) -> String {
        let mut s = self.config.header();
        writeln!(s, "# threshold={}", self.threshold).unwrap();
        s.push_str("m,max_k\n");
        for (m, k) in &self.points {
            writeln!(s, "{m},{k}").unwrap();
        }
        s
    }
}

/// For every `m` in `m_grid`, the largest `k` such that all of `1..=k` reach
/// recovery fraction `threshold`.
///
/// All grid values share one set of walks per graph sample; the matrix for a
/// given `m` is the first `m` rows, and trial signals depend only on `(k,
/// trial)`, so adding rows never changes the signals being decoded.
pub fn run_sparsity_frontier(cfg: &ExperimentConfig, m_grid: &[usize], threshold: f64) -> Result<FrontierResult> {
    cfg.validate()?;
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::InvalidParameter(format!("threshold {threshold} outside (0, 1]")));
    }
    if m_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidParameter("m grid must be strictly increasing".into()));
    }
    let start = Instant::now();
    let max_m = m_grid.last().copied().unwrap_or(0);
    let full = build_instances(cfg, max_m)?;
    let min_edges = full.iter().map(MeasurementMatrix::num_edges).min().unwrap();
    let mut points = Vec::with_capacity(m_grid.len());
    let mut sweeps = Vec::with_capacity(m_grid.len());
    for &m in m_grid {
        let instances: Vec<MeasurementMatrix> = full.iter().map(|a| a.prefix(m)).collect();
        let mut sweep = Vec::new();
        let mut best = 0;
        if m > 0 {
            for k in 1..min_edges {
                let point = curve_on_instances(&instances, cfg, &[k])[0];
                sweep.push(point);
                if point.fraction() < threshold {
                    break;
                }
                best = k;
            }
        }
        points.push((m, best));
        sweeps.push(sweep);
    }
    Ok(FrontierResult { config: cfg.clone(), threshold, points, sweeps, elapsed: start.elapsed() })
}
