use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use dirnet::analytics::{OuterMethod, QuadratureSpec};
use dirnet::antenna::GainModel;
use dirnet::channel::ChannelModel;
use dirnet::experiments::{FitSpec, Format, HbarCase, HbarSpec, HopDistSpec, PhaseSpec, SweepSpec};
use dirnet::simulator::NetworkConfig;
use dirnet::{Error, Result};

/// Multihop connectivity of random networks with randomly oriented
/// directional antennas.
///
/// Settings are resolved as built-in defaults, then the `--config` JSON
/// file, then explicit flags. Set DIRNET_THREADS to cap the worker count.
#[derive(Debug, Parser)]
#[command(name = "dirnet", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one network configuration and report k-hop statistics.
    Simulate(SimulateArgs),
    /// Evaluate the infinite-plane mean degrees.
    Analytic(AnalyticArgs),
    /// Simulated μ_k over a (ρ, η, ε) grid next to the analytic values.
    Sweep(SweepArgs),
    /// Isotropic versus anisotropic winner over a (ρ, η) grid.
    Phase(PhaseArgs),
    /// Hop distributions of isotropic and anisotropic networks.
    Hopdist(HopDistArgs),
    /// Typical hop distance versus density with post-peak power-law fits.
    Hbar(HbarArgs),
    /// Fit a − bρ^{1/3} + cρ to simulated μ_k.
    Fit(FitArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum MethodArg {
    Qmc,
    Tensor,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
    /// Write the table here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Where a table goes.
pub struct Output {
    pub format: Format,
    pub output: Option<PathBuf>,
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChannelArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    /// Path loss exponent, at least 2.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Cardioid deformation in [0, 1].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Number of lobes n in G = 1 + ε cos nθ.
    #[arg(long)]
    pub lobes: Option<u32>,
    /// Use the deterministic disk channel with this radius.
    #[arg(long, value_name = "R0")]
    pub hard_disk: Option<f64>,
}

impl ChannelArgs {
    fn apply(&self, base: ChannelModel) -> Result<ChannelModel> {
        if let Some(r0) = self.hard_disk {
            return ChannelModel::hard_disk(r0);
        }
        if self.beta.is_none() && self.eta.is_none() && self.epsilon.is_none() && self.lobes.is_none() {
            base.validate()?;
            return Ok(base);
        }
        let (beta, eta, gain) = match base {
            ChannelModel::RayleighDirectional { beta, eta, gain } => (beta, eta, gain),
            ChannelModel::HardDisk { .. } => (1.0, 3.0, GainModel::isotropic()),
        };
        let gain = GainModel::new(
            self.epsilon.unwrap_or(gain.epsilon()),
            self.lobes.unwrap_or(gain.lobes()),
        )?;
        ChannelModel::rayleigh(self.beta.unwrap_or(beta), self.eta.unwrap_or(eta), gain)
    }
}

fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn set_list(slot: &mut Vec<f64>, value: &[f64]) {
    if !value.is_empty() {
        *slot = value.to_vec();
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// JSON file with simulator settings.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub density: Option<f64>,
    /// Radius of the disk domain.
    #[arg(long)]
    pub radius: Option<f64>,
    /// Boundary margin in length units.
    #[arg(long)]
    pub margin: Option<f64>,
    /// Boundary margin in multiples of r_eff(1e-6), used when no margin is given.
    #[arg(long)]
    pub margin_hops: Option<u32>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Draw a Poisson number of nodes per trial.
    #[arg(long)]
    pub poisson: bool,
    /// Use at most this many interior nodes per trial as sources.
    #[arg(long)]
    pub max_sources: Option<usize>,
    /// Write every realization as a JSON line to this file.
    #[arg(long)]
    pub dump: Option<PathBuf>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl SimulateArgs {
    pub fn resolve(self) -> Result<(NetworkConfig, Output)> {
        let mut cfg: NetworkConfig = load(self.config.as_deref())?;
        cfg.seed = self.seed;
        set(&mut cfg.density, self.density);
        set(&mut cfg.domain_radius, self.radius);
        if self.margin.is_some() {
            cfg.boundary_margin = self.margin;
        }
        set(&mut cfg.margin_hops, self.margin_hops);
        set(&mut cfg.trials, self.trials);
        cfg.poisson_nodes |= self.poisson;
        if self.max_sources.is_some() {
            cfg.max_sources = self.max_sources;
        }
        cfg.channel = self.channel.apply(cfg.channel)?;
        cfg.validate()?;
        let out = Output {
            format: self.out.format.map_or(Format::Csv, Format::from),
            output: self.out.output,
            dump: self.dump,
        };
        Ok((cfg, out))
    }
}

// ---------------------------------------------------------------------------

/// Inputs of the `analytic` command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalyticSpec {
    pub density: f64,
    pub channel: ChannelModel,
    /// Also run the nested quadrature for μ₂.
    pub mu2: bool,
    pub quadrature: QuadratureSpec,
}

impl Default for AnalyticSpec {
    fn default() -> Self {
        Self {
            density: 1.0,
            channel: NetworkConfig::default().channel,
            mu2: false,
            quadrature: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyticArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub density: Option<f64>,
    /// Evaluate μ₂ by nested quadrature as well.
    #[arg(long)]
    pub mu2: bool,
    #[arg(long, value_enum)]
    pub method: Option<MethodArg>,
    #[arg(long)]
    pub qmc_samples: Option<usize>,
    #[arg(long)]
    pub tail_tolerance: Option<f64>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl AnalyticArgs {
    pub fn resolve(self) -> Result<(AnalyticSpec, Output)> {
        let mut spec: AnalyticSpec = load(self.config.as_deref())?;
        set(&mut spec.density, self.density);
        spec.mu2 |= self.mu2;
        if let Some(m) = self.method {
            spec.quadrature.method = match m {
                MethodArg::Qmc => OuterMethod::QuasiMonteCarlo,
                MethodArg::Tensor => OuterMethod::TensorGauss,
            };
        }
        set(&mut spec.quadrature.qmc_samples, self.qmc_samples);
        set(&mut spec.quadrature.tail_tolerance, self.tail_tolerance);
        spec.channel = self.channel.apply(spec.channel)?;
        spec.quadrature.validate()?;
        let out = Output {
            format: self.out.format.map_or(Format::Csv, Format::from),
            output: self.out.output,
            dump: None,
        };
        Ok((spec, out))
    }
}

// ---------------------------------------------------------------------------

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',')]
    pub densities: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub etas: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub epsilons: Vec<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
    /// Skip the quadrature μ₂ column.
    #[arg(long)]
    pub no_mu2: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl SweepArgs {
    pub fn resolve(self) -> Result<SweepSpec> {
        let mut s: SweepSpec = load(self.config.as_deref())?;
        s.seed = self.seed;
        set_list(&mut s.densities, &self.densities);
        set_list(&mut s.etas, &self.etas);
        set_list(&mut s.epsilons, &self.epsilons);
        set(&mut s.beta, self.beta);
        set(&mut s.k_max, self.k_max);
        set(&mut s.trials, self.trials);
        if self.radius.is_some() {
            s.domain_radius = self.radius;
        }
        if self.margin.is_some() {
            s.boundary_margin = self.margin;
        }
        if self.no_mu2 {
            s.analytic_mu2 = false;
        }
        set(&mut s.format, self.out.format.map(Format::from));
        if self.out.output.is_some() {
            s.output = self.out.output;
        }
        s.validate()?;
        Ok(s)
    }
}

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',')]
    pub densities: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    pub etas: Vec<f64>,
    /// Deformation of the anisotropic pattern.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Hop order, 1 or 2.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Trials per case for cells decided by simulation.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub radius: Option<f64>,
    /// Decide every cell by simulation.
    #[arg(long)]
    pub force_simulation: bool,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl PhaseArgs {
    pub fn resolve(self) -> Result<PhaseSpec> {
        let mut s: PhaseSpec = load(self.config.as_deref())?;
        s.seed = self.seed;
        set_list(&mut s.densities, &self.densities);
        set_list(&mut s.etas, &self.etas);
        set(&mut s.epsilon, self.epsilon);
        set(&mut s.k, self.k);
        set(&mut s.beta, self.beta);
        set(&mut s.trials, self.trials);
        if self.radius.is_some() {
            s.domain_radius = self.radius;
        }
        s.force_simulation |= self.force_simulation;
        set(&mut s.format, self.out.format.map(Format::from));
        if self.out.output.is_some() {
            s.output = self.out.output;
        }
        Ok(s)
    }
}

#[derive(Debug, Args)]
pub struct HopDistArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub density: Option<f64>,
    #[arg(long)]
    pub eta: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub max_sources: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl HopDistArgs {
    pub fn resolve(self) -> Result<HopDistSpec> {
        let mut s: HopDistSpec = load(self.config.as_deref())?;
        s.seed = self.seed;
        set(&mut s.density, self.density);
        set(&mut s.eta, self.eta);
        set(&mut s.epsilon, self.epsilon);
        set(&mut s.beta, self.beta);
        set(&mut s.trials, self.trials);
        set(&mut s.domain_radius, self.radius);
        if self.margin.is_some() {
            s.boundary_margin = self.margin;
        }
        if self.max_sources.is_some() {
            s.max_sources = self.max_sources;
        }
        set(&mut s.format, self.out.format.map(Format::from));
        if self.out.output.is_some() {
            s.output = self.out.output;
        }
        Ok(s)
    }
}

fn parse_case(text: &str) -> std::result::Result<HbarCase, String> {
    let (eps, eta) = text
        .split_once(':')
        .ok_or_else(|| format!("expected EPSILON:ETA, got {text:?}"))?;
    let epsilon = eps.trim().parse().map_err(|e| format!("bad epsilon {eps:?}: {e}"))?;
    let eta = eta.trim().parse().map_err(|e| format!("bad eta {eta:?}: {e}"))?;
    Ok(HbarCase { epsilon, eta })
}

#[derive(Debug, Args)]
pub struct HbarArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',')]
    pub densities: Vec<f64>,
    /// Cases as EPSILON:ETA pairs, comma separated.
    #[arg(long, value_delimiter = ',', value_parser = parse_case)]
    pub cases: Vec<HbarCase>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub max_sources: Option<usize>,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl HbarArgs {
    pub fn resolve(self) -> Result<HbarSpec> {
        let mut s: HbarSpec = load(self.config.as_deref())?;
        s.seed = self.seed;
        set_list(&mut s.densities, &self.densities);
        if !self.cases.is_empty() {
            s.cases = self.cases;
        }
        set(&mut s.beta, self.beta);
        set(&mut s.trials, self.trials);
        set(&mut s.domain_radius, self.radius);
        if self.margin.is_some() {
            s.boundary_margin = self.margin;
        }
        if self.max_sources.is_some() {
            s.max_sources = self.max_sources;
        }
        set(&mut s.format, self.out.format.map(Format::from));
        if self.out.output.is_some() {
            s.output = self.out.output;
        }
        Ok(s)
    }
}

#[derive(Debug, Args)]
pub struct FitArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',')]
    pub densities: Vec<f64>,
    /// Hop order of the fitted degree.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub radius: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub max_sources: Option<usize>,
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[command(flatten)]
    pub out: OutputArgs,
}

impl FitArgs {
    pub fn resolve(self) -> Result<FitSpec> {
        let mut s: FitSpec = load(self.config.as_deref())?;
        s.seed = self.seed;
        set_list(&mut s.densities, &self.densities);
        set(&mut s.k, self.k);
        set(&mut s.trials, self.trials);
        if self.radius.is_some() {
            s.domain_radius = self.radius;
        }
        if self.margin.is_some() {
            s.boundary_margin = self.margin;
        }
        if self.max_sources.is_some() {
            s.max_sources = self.max_sources;
        }
        s.channel = self.channel.apply(s.channel)?;
        set(&mut s.format, self.out.format.map(Format::from));
        if self.out.output.is_some() {
            s.output = self.out.output;
        }
        Ok(s)
    }
}
