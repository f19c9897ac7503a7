//! Monte Carlo network realizations on a disk and their k-hop statistics.
//!
//! Every trial draws its nodes from its own ChaCha stream and every pair
//! its link variate from a counter hash of `(seed, trial, i, j)`, so a
//! trial's outcome does not depend on scheduling. Trials run on a shared
//! rayon pool sized by `DIRNET_THREADS` and are merged in trial order.

mod hops;
mod realization;

use std::io::Write;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use hops::{degree_identity_checks, khop_degrees, HopCounts};
pub use realization::{sample_realization, Realization, RealizationDump, MAX_NODES};

use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use hops::Bfs;

/// Link probability at which the default boundary margin is measured.
pub const MARGIN_TOLERANCE: f64 = 1e-6;

/// Trials dispatched to the pool at once; bounds memory held for dumps.
const CHUNK: usize = 64;

/// Parameters of a Monte Carlo experiment on a disk of radius `R`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NetworkConfig {
    pub density: f64,
    pub domain_radius: f64,
    pub channel: ChannelModel,
    /// Distance from the rim below which nodes are excluded as sources.
    /// `None` means `margin_hops · r_eff(1e-6)`.
    pub boundary_margin: Option<f64>,
    pub margin_hops: u32,
    pub seed: u64,
    pub trials: u64,
    /// Draw the node count from a Poisson law instead of `⌊ρπR²⌋`.
    pub poisson_nodes: bool,
    /// Use only the first this many interior nodes of each trial as BFS
    /// sources. Nodes are exchangeable, so each trial's source mean stays
    /// unbiased; trials are weighted by their full interior count.
    pub max_sources: Option<usize>,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            density: 1.0,
            domain_radius: 10.0,
            channel: ChannelModel::RayleighDirectional {
                beta: 1.0,
                eta: 3.0,
                gain: crate::antenna::GainModel::isotropic(),
            },
            boundary_margin: None,
            margin_hops: 1,
            seed: 0,
            trials: 200,
            poisson_nodes: false,
            max_sources: None,
        }
    }
}

impl NetworkConfig {
    pub fn new(channel: ChannelModel, seed: u64) -> Self {
        Self {
            channel,
            seed,
            ..Default::default()
        }
    }

    /// Boundary margin in length units.
    pub fn margin(&self) -> f64 {
        self.boundary_margin
            .unwrap_or_else(|| self.margin_hops as f64 * self.channel.effective_range(MARGIN_TOLERANCE))
    }

    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        if !(self.density > 0.0 && self.density.is_finite()) {
            return Err(Error::config(format!("density must be positive, got {}", self.density)));
        }
        if !(self.domain_radius > 0.0 && self.domain_radius.is_finite()) {
            return Err(Error::config(format!(
                "domain radius must be positive, got {}",
                self.domain_radius
            )));
        }
        let margin = self.margin();
        if !(margin >= 0.0 && margin < self.domain_radius) {
            return Err(Error::config(format!(
                "boundary margin {margin} must lie in [0, {}) (the domain radius)",
                self.domain_radius
            )));
        }
        if self.trials == 0 {
            return Err(Error::config("need at least one trial"));
        }
        if self.max_sources == Some(0) {
            return Err(Error::config("max_sources must be at least 1"));
        }
        Ok(())
    }
}

/// k-hop statistics over the interior nodes of all trials. Vectors are
/// indexed by `k − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KHopStats {
    pub mu: Vec<f64>,
    /// Standard error of `mu` from the spread of per-trial means (ratio
    /// estimator); `NaN` with a single usable trial.
    pub stderr: Vec<f64>,
    pub mu_inf: f64,
    pub mu_inf_stderr: f64,
    /// Mean of `d⁽ᵏ⁾/(N − 1)`.
    pub hop_pmf: Vec<f64>,
    /// Mean of `d⁽∞⁾/(N − 1)`; with `hop_pmf` it sums to one.
    pub unreachable_fraction: f64,
    /// Mean hop distance over reachable pairs.
    pub h_bar: f64,
    pub h_bar_stderr: f64,
    pub mean_cluster_size: f64,
    /// Total number of source nodes over all trials.
    pub n_interior: u64,
    pub mean_nodes: f64,
    pub trials: u64,
    /// Trials in which some source could not reach every node.
    pub disconnected_trials: u64,
    pub boundary_margin: f64,
}

impl KHopStats {
    pub fn mu_k(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.mu.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn stderr_k(&self, k: usize) -> f64 {
        if k == 0 {
            return 0.0;
        }
        self.stderr.get(k - 1).copied().unwrap_or(0.0)
    }
}

/// Integer tallies of one trial.
#[derive(Debug, Clone, Default)]
struct TrialSummary {
    nodes: usize,
    /// Interior nodes, whether or not all of them were sources.
    interior: u64,
    sources: u64,
    sums: Vec<u64>,
    unreachable: u64,
}

fn source_nodes(real: &Realization, max_sources: Option<usize>) -> Vec<usize> {
    let limit = max_sources.unwrap_or(usize::MAX);
    real.interior_mask()
        .iter()
        .enumerate()
        .filter(|(_, &inside)| inside)
        .map(|(i, _)| i)
        .take(limit)
        .collect()
}

fn summarize(real: &Realization, max_sources: Option<usize>) -> Result<TrialSummary> {
    let mut bfs = Bfs::new(real.len());
    let mut levels = Vec::new();
    let mut summary = TrialSummary {
        nodes: real.len(),
        interior: real.interior_mask().iter().filter(|&&b| b).count() as u64,
        ..Default::default()
    };
    for s in source_nodes(real, max_sources) {
        summary.unreachable += bfs.run(real, s, &mut levels)? as u64;
        if summary.sums.len() < levels.len() {
            summary.sums.resize(levels.len(), 0);
        }
        for (acc, &c) in summary.sums.iter_mut().zip(&levels) {
            *acc += c as u64;
        }
        summary.sources += 1;
    }
    Ok(summary)
}

/// Weighted mean of per-trial values and its standard error,
/// `√(n/(n−1) Σ (w/W)² (x − x̄)²)`. With weights equal to the source counts
/// the mean is the pooled per-source mean.
fn weighted_mean(samples: &[(f64, f64)]) -> (f64, f64) {
    let total: f64 = samples.iter().map(|s| s.0).sum();
    let mean = samples.iter().map(|&(w, x)| w * x).sum::<f64>() / total;
    let n = samples.len();
    if n < 2 {
        return (mean, f64::NAN);
    }
    let spread: f64 = samples.iter().map(|&(w, x)| (w / total * (x - mean)).powi(2)).sum();
    (mean, (spread * n as f64 / (n - 1) as f64).sqrt())
}

fn combine(config: &NetworkConfig, trials: &[TrialSummary]) -> Result<KHopStats> {
    let total_sources: u64 = trials.iter().map(|t| t.sources).sum();
    if total_sources == 0 {
        return Err(Error::config(format!(
            "no interior nodes in any trial: boundary margin {} leaves no room inside radius {}",
            config.margin(),
            config.domain_radius
        )));
    }
    let kmax = trials.iter().map(|t| t.sums.len()).max().unwrap_or(0);
    // A trial counts in proportion to its interior nodes, so capping the
    // sources does not shift weight away from denser trials.
    let used: Vec<&TrialSummary> = trials.iter().filter(|t| t.sources > 0).collect();
    let per_source = |t: &TrialSummary, count: u64| count as f64 / t.sources as f64;
    let estimate = |f: &dyn Fn(&TrialSummary) -> f64| -> (f64, f64) {
        weighted_mean(&used.iter().map(|t| (t.interior as f64, f(t))).collect::<Vec<_>>())
    };
    let count_k = |t: &TrialSummary, k: usize| t.sums.get(k).copied().unwrap_or(0);
    let (mu, stderr): (Vec<f64>, Vec<f64>) = (0..kmax).map(|k| estimate(&|t| per_source(t, count_k(t, k)))).unzip();
    let (mu_inf, mu_inf_stderr) = estimate(&|t| per_source(t, t.unreachable));

    // pair-normalized distribution; trials with a single node have no pairs
    let with_pairs: Vec<(f64, &TrialSummary)> = used
        .iter()
        .filter(|t| t.nodes > 1)
        .map(|t| (t.interior as f64, *t))
        .collect();
    let frac = |count: &dyn Fn(&TrialSummary) -> u64| -> f64 {
        if with_pairs.is_empty() {
            return f64::NAN;
        }
        let samples: Vec<(f64, f64)> = with_pairs
            .iter()
            .map(|&(w, t)| (w, per_source(t, count(t)) / (t.nodes - 1) as f64))
            .collect();
        weighted_mean(&samples).0
    };
    let hop_pmf = (0..kmax).map(|k| frac(&|t| count_k(t, k))).collect();
    let unreachable_fraction = frac(&|t| t.unreachable);

    let reach: f64 = mu.iter().sum();
    let h_bar = mu.iter().enumerate().map(|(k, m)| (k + 1) as f64 * m).sum::<f64>() / reach;
    let hbar_samples: Vec<(f64, f64)> = used
        .iter()
        .filter(|t| t.sums.iter().any(|&c| c > 0))
        .map(|t| {
            let weighted: u64 = t.sums.iter().enumerate().map(|(k, &c)| (k as u64 + 1) * c).sum();
            (t.interior as f64, weighted as f64 / t.sums.iter().sum::<u64>() as f64)
        })
        .collect();
    let h_bar_stderr = if hbar_samples.is_empty() {
        f64::NAN
    } else {
        weighted_mean(&hbar_samples).1
    };

    Ok(KHopStats {
        mean_cluster_size: 1.0 + reach,
        mu,
        stderr,
        mu_inf,
        mu_inf_stderr,
        hop_pmf,
        unreachable_fraction,
        h_bar,
        h_bar_stderr,
        n_interior: total_sources,
        mean_nodes: trials.iter().map(|t| t.nodes as f64).sum::<f64>() / trials.len() as f64,
        trials: trials.len() as u64,
        disconnected_trials: trials.iter().filter(|t| t.unreachable > 0).count() as u64,
        boundary_margin: config.margin(),
    })
}

/// Statistics of already sampled realizations, using their interior nodes
/// (all of them) as sources.
pub fn aggregate_stats(config: &NetworkConfig, realizations: &[Realization]) -> Result<KHopStats> {
    if realizations.is_empty() {
        return Err(Error::config("need at least one realization"));
    }
    let trials = realizations
        .iter()
        .map(|r| summarize(r, config.max_sources))
        .collect::<Result<Vec<_>>>()?;
    combine(config, &trials)
}

/// Runs all trials of `config`.
pub fn simulate(config: &NetworkConfig) -> Result<KHopStats> {
    run(config, None)
}

/// Runs all trials and writes one JSON line per realization to `dump`.
pub fn simulate_with_dump(config: &NetworkConfig, dump: &mut dyn Write) -> Result<KHopStats> {
    run(config, Some(dump))
}

fn run(config: &NetworkConfig, mut dump: Option<&mut dyn Write>) -> Result<KHopStats> {
    config.validate()?;
    let want_dump = dump.is_some();
    let mut summaries = Vec::with_capacity(config.trials as usize);
    let mut next = 0u64;
    while next < config.trials {
        let end = (next + CHUNK as u64).min(config.trials);
        let chunk: Vec<Result<(TrialSummary, Option<String>)>> = install(|| {
            (next..end)
                .into_par_iter()
                .map(|trial| {
                    let real = sample_realization(config, trial)?;
                    let line = if want_dump {
                        Some(serde_json::to_string(&real.to_dump()).map_err(|e| Error::Serialize(e.to_string()))?)
                    } else {
                        None
                    };
                    Ok((summarize(&real, config.max_sources)?, line))
                })
                .collect()
        });
        for item in chunk {
            let (summary, line) = item?;
            if let (Some(out), Some(line)) = (dump.as_deref_mut(), line) {
                writeln!(out, "{line}").map_err(|e| Error::Io {
                    path: "<realization dump>".into(),
                    source: e,
                })?;
            }
            summaries.push(summary);
        }
        next = end;
    }
    combine(config, &summaries)
}

/// Worker count: `DIRNET_THREADS` if set to a positive integer, otherwise
/// the available hardware parallelism.
pub fn thread_count() -> usize {
    std::env::var("DIRNET_THREADS")
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

/// Runs `f` on the shared worker pool.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    static POOL: OnceLock<rayon::ThreadPool> = OnceLock::new();
    POOL.get_or_init(|| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(thread_count())
            .build()
            .expect("failed to start worker pool")
    })
    .install(f)
}
