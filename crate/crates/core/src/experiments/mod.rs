//! Parameter sweeps, phase diagrams, hop distributions and fits, each
//! producing a [`Table`] that carries its own provenance.
//!
//! Grid points run in parallel on the simulator's pool; rows are always
//! emitted in grid order. Grid point `i` of a run with seed `s` simulates
//! with seed `s + i`.

mod fit;
mod table;

use std::collections::HashMap;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

pub use fit::{fit_cube_root_law, fit_power_law, Coefficient, FitModel, FitResult};
pub use table::{Cell, Format, Metadata, Table};

use crate::analytics::{mu1_closed_form, DegreeEstimate, Mu2Integrator, QuadratureSpec};
use crate::channel::ChannelModel;
use crate::error::{Error, Result};
use crate::simulator::{self, KHopStats, NetworkConfig, MARGIN_TOLERANCE};

/// Domain radius used when none is given and the margin allows it.
pub const DEFAULT_RADIUS: f64 = 10.0;

fn ser(v: &impl Serialize) -> Result<serde_json::Value> {
    serde_json::to_value(v).map_err(|e| Error::Serialize(e.to_string()))
}

fn check_grid(name: &str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::config(format!("{name} grid is empty")));
    }
    if let Some(v) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::config(format!("{name} grid contains {v}")));
    }
    Ok(())
}

/// Margin `hops · r_eff(1e-6)` unless given, and a radius that leaves at
/// least two effective ranges of interior unless given.
fn geometry(channel: &ChannelModel, margin: Option<f64>, hops: u32, radius: Option<f64>) -> (f64, f64) {
    let reach = channel.effective_range(MARGIN_TOLERANCE);
    let margin = margin.unwrap_or(hops as f64 * reach);
    let radius = radius.unwrap_or_else(|| DEFAULT_RADIUS.max(margin + 2.0 * reach));
    (margin, radius)
}

fn network(channel: ChannelModel, density: f64, margin: f64, radius: f64, seed: u64, trials: u64) -> NetworkConfig {
    NetworkConfig {
        density,
        domain_radius: radius,
        channel,
        boundary_margin: Some(margin),
        seed,
        trials,
        ..NetworkConfig::default()
    }
}

/// μ₂ evaluators shared across densities, one per channel.
struct Mu2Cache {
    spec: QuadratureSpec,
    by_channel: HashMap<String, Option<Mu2Integrator>>,
}

impl Mu2Cache {
    fn new(spec: QuadratureSpec) -> Self {
        Self {
            spec,
            by_channel: HashMap::new(),
        }
    }

    fn key(ch: &ChannelModel) -> String {
        format!("{ch:?}")
    }

    /// Builds the integrator unless it would exceed the evaluation budget.
    fn prepare(&mut self, ch: &ChannelModel) -> Result<()> {
        let key = Self::key(ch);
        if !self.by_channel.contains_key(&key) {
            let integrator = match Mu2Integrator::new(ch, self.spec) {
                Ok(i) => Some(i),
                Err(Error::Budget { .. }) => None,
                Err(e) => return Err(e),
            };
            self.by_channel.insert(key, integrator);
        }
        Ok(())
    }

    fn evaluate(&self, ch: &ChannelModel, density: f64) -> Result<Option<DegreeEstimate>> {
        match self.by_channel.get(&Self::key(ch)) {
            Some(Some(i)) => i.evaluate(density).map(Some),
            _ => Ok(None),
        }
    }
}

// ---------------------------------------------------------------------------
// degree sweep

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub densities: Vec<f64>,
    pub etas: Vec<f64>,
    pub epsilons: Vec<f64>,
    pub beta: f64,
    pub k_max: usize,
    pub trials: u64,
    pub seed: u64,
    /// `None` picks the smallest radius ≥ 10 that fits the margin.
    pub domain_radius: Option<f64>,
    /// `None` means `k_max · r_eff(1e-6)`.
    pub boundary_margin: Option<f64>,
    /// Add quadrature μ₂ when its evaluation budget allows.
    pub analytic_mu2: bool,
    pub quadrature: QuadratureSpec,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            densities: vec![1.0, 2.0, 3.0, 4.0],
            etas: vec![3.0],
            epsilons: vec![0.0, 1.0],
            beta: 1.0,
            k_max: 3,
            trials: 200,
            seed: 0,
            domain_radius: None,
            boundary_margin: None,
            analytic_mu2: true,
            quadrature: QuadratureSpec::default(),
            format: Format::Csv,
            output: None,
        }
    }
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        check_grid("density", &self.densities)?;
        check_grid("eta", &self.etas)?;
        check_grid("epsilon", &self.epsilons)?;
        if self.trials == 0 {
            return Err(Error::config("need at least one trial"));
        }
        if self.k_max == 0 {
            return Err(Error::config("k_max must be at least 1"));
        }
        self.quadrature.validate()
    }
}

/// Simulated μ_k for k = 1..k_max at every grid point, next to analytic
/// μ₁ and, where affordable, quadrature μ₂.
pub fn run_degree_sweep(spec: &SweepSpec) -> Result<Table> {
    spec.validate()?;
    let mut points = Vec::new();
    for &eta in &spec.etas {
        for &eps in &spec.epsilons {
            let ch = ChannelModel::cardioid(spec.beta, eta, eps)?;
            for &rho in &spec.densities {
                let (margin, radius) = geometry(&ch, spec.boundary_margin, spec.k_max as u32, spec.domain_radius);
                let cfg = network(ch, rho, margin, radius, spec.seed.wrapping_add(points.len() as u64), spec.trials);
                cfg.validate()?;
                points.push((eta, eps, cfg));
            }
        }
    }
    let mut cache = Mu2Cache::new(spec.quadrature);
    if spec.analytic_mu2 && spec.k_max >= 2 {
        for (_, _, cfg) in &points {
            cache.prepare(&cfg.channel)?;
        }
    }
    let stats: Vec<KHopStats> = simulator::install(|| {
        points
            .par_iter()
            .map(|(_, _, cfg)| simulator::simulate(cfg))
            .collect::<Result<Vec<_>>>()
    })?;

    let mut table = Table::new(
        Metadata::new("degree_sweep", Some(spec.seed), Some(spec.trials), ser(spec)?),
        &[
            "rho",
            "eta",
            "epsilon",
            "k",
            "mu",
            "stderr",
            "mu_analytic",
            "analytic_error",
            "domain_radius",
            "boundary_margin",
            "n_interior",
        ],
    );
    for ((eta, eps, cfg), st) in points.iter().zip(&stats) {
        for k in 1..=spec.k_max {
            let analytic = match k {
                1 => Some(mu1_closed_form(cfg.density, &cfg.channel)?),
                2 if spec.analytic_mu2 => cache.evaluate(&cfg.channel, cfg.density)?,
                _ => None,
            };
            table.push(vec![
                cfg.density.into(),
                (*eta).into(),
                (*eps).into(),
                k.into(),
                st.mu_k(k).into(),
                st.stderr_k(k).into(),
                analytic.map_or(f64::NAN, |a| a.value).into(),
                analytic.map_or(f64::NAN, |a| a.error_bound).into(),
                cfg.domain_radius.into(),
                st.boundary_margin.into(),
                st.n_interior.into(),
            ]);
        }
    }
    Ok(table)
}

// ---------------------------------------------------------------------------
// phase diagram

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Winner {
    Isotropic,
    Anisotropic,
    Tie,
}

impl Winner {
    fn label(self) -> &'static str {
        match self {
            Winner::Isotropic => "isotropic",
            Winner::Anisotropic => "anisotropic",
            Winner::Tie => "tie",
        }
    }

    fn from_margin(margin: f64, error: f64) -> Self {
        if margin.abs() <= error {
            Winner::Tie
        } else if margin > 0.0 {
            Winner::Anisotropic
        } else {
            Winner::Isotropic
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PhaseSpec {
    pub densities: Vec<f64>,
    pub etas: Vec<f64>,
    /// Deformation of the anisotropic pattern compared against ε = 0.
    pub epsilon: f64,
    pub k: usize,
    pub beta: f64,
    pub quadrature: QuadratureSpec,
    /// Trials per case when a cell is decided by simulation.
    pub trials: u64,
    pub seed: u64,
    pub domain_radius: Option<f64>,
    /// Decide every cell by simulation.
    pub force_simulation: bool,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for PhaseSpec {
    fn default() -> Self {
        Self {
            densities: vec![0.5, 1.0, 2.0, 4.0, 8.0],
            etas: vec![2.0, 2.5, 3.0, 3.5, 4.0, 5.0],
            epsilon: 1.0,
            k: 1,
            beta: 1.0,
            quadrature: QuadratureSpec::default(),
            trials: 200,
            seed: 0,
            domain_radius: None,
            force_simulation: false,
            format: Format::Csv,
            output: None,
        }
    }
}

struct Verdict {
    margin: f64,
    error: f64,
    method: &'static str,
}

fn simulate_margin(spec: &PhaseSpec, iso: ChannelModel, aniso: ChannelModel, rho: f64, cell: u64) -> Result<Verdict> {
    let mut out = [0.0; 2];
    let mut se = [0.0; 2];
    for (idx, ch) in [iso, aniso].into_iter().enumerate() {
        // both cases share the larger geometry so they see the same domain
        let (margin, radius) = geometry(&longer_reach(aniso, iso), None, spec.k as u32, spec.domain_radius);
        let cfg = network(ch, rho, margin, radius, spec.seed.wrapping_add(2 * cell + idx as u64), spec.trials);
        let st = simulator::simulate(&cfg)?;
        out[idx] = st.mu_k(spec.k);
        se[idx] = st.stderr_k(spec.k);
    }
    Ok(Verdict {
        margin: out[1] - out[0],
        error: 3.0 * se[0].hypot(se[1]),
        method: "simulation",
    })
}

/// For each (ρ, η) cell, which of ε = 0 and ε = `epsilon` gives the larger
/// μ_k. The margin is μ_k(ε) − μ_k(0); cells whose margin is within the
/// combined error are ties.
pub fn run_phase_diagram(spec: &PhaseSpec) -> Result<Table> {
    check_grid("density", &spec.densities)?;
    check_grid("eta", &spec.etas)?;
    if !(spec.k == 1 || spec.k == 2) {
        return Err(Error::config(format!("phase diagram supports k = 1 or 2, got {}", spec.k)));
    }
    if spec.trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    spec.quadrature.validate()?;

    let mut cells = Vec::new();
    for &eta in &spec.etas {
        let iso = ChannelModel::cardioid(spec.beta, eta, 0.0)?;
        let aniso = ChannelModel::cardioid(spec.beta, eta, spec.epsilon)?;
        for &rho in &spec.densities {
            cells.push((rho, eta, iso, aniso));
        }
    }

    let mut cache = Mu2Cache::new(spec.quadrature);
    if spec.k == 2 && !spec.force_simulation {
        for (_, _, iso, aniso) in &cells {
            cache.prepare(iso)?;
            cache.prepare(aniso)?;
        }
    }
    let analytic = |rho: f64, iso: &ChannelModel, aniso: &ChannelModel| -> Result<Option<Verdict>> {
        let pair = if spec.k == 1 {
            Some((mu1_closed_form(rho, iso)?, mu1_closed_form(rho, aniso)?, "analytic"))
        } else {
            match (cache.evaluate(iso, rho)?, cache.evaluate(aniso, rho)?) {
                (Some(a), Some(b)) => Some((a, b, "quadrature")),
                _ => None,
            }
        };
        Ok(pair.map(|(a, b, method)| Verdict {
            margin: b.value - a.value,
            error: a.error_bound + b.error_bound,
            method,
        }))
    };

    let verdicts: Vec<Verdict> = simulator::install(|| {
        cells
            .par_iter()
            .enumerate()
            .map(|(i, (rho, _, iso, aniso))| {
                if !spec.force_simulation {
                    if let Some(v) = analytic(*rho, iso, aniso)? {
                        if v.margin.abs() > v.error || spec.k == 1 {
                            return Ok(v);
                        }
                    }
                }
                simulate_margin(spec, *iso, *aniso, *rho, i as u64)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut table = Table::new(
        Metadata::new("phase_diagram", Some(spec.seed), Some(spec.trials), ser(spec)?),
        &["rho", "eta", "winner", "margin", "margin_error", "method"],
    );
    for ((rho, eta, _, _), v) in cells.iter().zip(&verdicts) {
        table.push(vec![
            (*rho).into(),
            (*eta).into(),
            Winner::from_margin(v.margin, v.error).label().into(),
            v.margin.into(),
            v.error.into(),
            v.method.into(),
        ]);
    }
    Ok(table)
}

/// Whichever of the two channels has the longer effective range.
fn longer_reach(a: ChannelModel, b: ChannelModel) -> ChannelModel {
    if a.effective_range(MARGIN_TOLERANCE) >= b.effective_range(MARGIN_TOLERANCE) {
        a
    } else {
        b
    }
}

// ---------------------------------------------------------------------------
// hop distribution

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HopDistSpec {
    pub density: f64,
    pub eta: f64,
    pub epsilon: f64,
    pub beta: f64,
    pub trials: u64,
    pub seed: u64,
    pub domain_radius: f64,
    /// `None` means `r_eff(1e-6)` of each channel.
    pub boundary_margin: Option<f64>,
    pub max_sources: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for HopDistSpec {
    fn default() -> Self {
        Self {
            density: 3.0,
            eta: 3.0,
            epsilon: 1.0,
            beta: 1.0,
            trials: 500,
            seed: 0,
            domain_radius: DEFAULT_RADIUS,
            boundary_margin: None,
            max_sources: None,
            format: Format::Csv,
            output: None,
        }
    }
}

fn simulate_case(
    channel: ChannelModel,
    density: f64,
    radius: f64,
    margin: Option<f64>,
    max_sources: Option<usize>,
    seed: u64,
    trials: u64,
) -> Result<KHopStats> {
    let (margin, radius) = geometry(&channel, margin, 1, Some(radius));
    let cfg = NetworkConfig {
        max_sources,
        ..network(channel, density, margin, radius, seed, trials)
    };
    simulator::simulate(&cfg)
}

/// Hop distributions of the isotropic and the anisotropic network at one
/// density. Summary: `h̄` per case and whether the anisotropic mass sits at
/// shorter hop counts.
pub fn run_hop_distribution(spec: &HopDistSpec) -> Result<Table> {
    if spec.trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    let cases = [
        ChannelModel::cardioid(spec.beta, spec.eta, 0.0)?,
        ChannelModel::cardioid(spec.beta, spec.eta, spec.epsilon)?,
    ];
    let stats: Vec<KHopStats> = simulator::install(|| {
        cases
            .par_iter()
            .enumerate()
            .map(|(i, ch)| {
                simulate_case(
                    *ch,
                    spec.density,
                    spec.domain_radius,
                    spec.boundary_margin,
                    spec.max_sources,
                    spec.seed.wrapping_add(i as u64),
                    spec.trials,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let (iso, aniso) = (&stats[0], &stats[1]);
    let kmax = iso.hop_pmf.len().max(aniso.hop_pmf.len());
    let pmf = |s: &KHopStats, k: usize| s.hop_pmf.get(k - 1).copied().unwrap_or(0.0);

    let mut table = Table::new(
        Metadata::new("hop_distribution", Some(spec.seed), Some(spec.trials), ser(spec)?),
        &["k", "pmf_iso", "pmf_aniso", "mu_iso", "mu_aniso", "stderr_iso", "stderr_aniso"],
    );
    for k in 1..=kmax {
        table.push(vec![
            k.into(),
            pmf(iso, k).into(),
            pmf(aniso, k).into(),
            iso.mu_k(k).into(),
            aniso.mu_k(k).into(),
            iso.stderr_k(k).into(),
            aniso.stderr_k(k).into(),
        ]);
    }
    let cum3 = |s: &KHopStats| (1..=3).map(|k| pmf(s, k)).sum::<f64>();
    table.metadata.summary = json!({
        "h_bar_iso": iso.h_bar,
        "h_bar_aniso": aniso.h_bar,
        "h_bar_stderr_iso": iso.h_bar_stderr,
        "h_bar_stderr_aniso": aniso.h_bar_stderr,
        "unreachable_fraction_iso": iso.unreachable_fraction,
        "unreachable_fraction_aniso": aniso.unreachable_fraction,
        "cumulative_pmf_k3_iso": cum3(iso),
        "cumulative_pmf_k3_aniso": cum3(aniso),
        "aniso_skewed_left": cum3(aniso) > cum3(iso),
        "mu1_iso_at_least_aniso": iso.mu_k(1) >= aniso.mu_k(1),
        "boundary_margin_iso": iso.boundary_margin,
        "boundary_margin_aniso": aniso.boundary_margin,
    });
    Ok(table)
}

// ---------------------------------------------------------------------------
// typical hop distance

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HbarCase {
    pub epsilon: f64,
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HbarSpec {
    pub densities: Vec<f64>,
    pub cases: Vec<HbarCase>,
    pub beta: f64,
    pub trials: u64,
    pub seed: u64,
    pub domain_radius: f64,
    pub boundary_margin: Option<f64>,
    pub max_sources: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for HbarSpec {
    fn default() -> Self {
        Self {
            densities: vec![0.1, 0.2, 0.3, 0.5, 0.7, 1.0, 1.5, 2.0, 3.0, 5.0, 7.0, 10.0],
            cases: vec![HbarCase { epsilon: 0.0, eta: 3.0 }, HbarCase { epsilon: 1.0, eta: 3.0 }],
            beta: 1.0,
            trials: 500,
            seed: 0,
            domain_radius: DEFAULT_RADIUS,
            boundary_margin: None,
            max_sources: Some(100),
            format: Format::Csv,
            output: None,
        }
    }
}

/// Post-peak power-law fit of one case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseFit {
    pub case: HbarCase,
    pub peak_density: f64,
    pub fit: Option<FitResult>,
    /// Why no fit was made, if none was.
    pub refused: Option<String>,
}

/// Index of the largest value; ties go to the earliest.
pub fn peak_index(values: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, &v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    best
}

/// Power law fitted from two grid points past the peak of `h_bar` onward.
/// Densities must be increasing.
pub fn fit_post_peak(densities: &[f64], h_bar: &[f64]) -> Result<(usize, FitResult)> {
    let peak = peak_index(h_bar).ok_or_else(|| Error::config("no finite h-bar values to locate a peak"))?;
    let start = peak + 2;
    let available = densities.len().saturating_sub(start);
    if available < 3 {
        return Err(Error::config(format!(
            "peak at density {} leaves {available} points after the 2-point offset; need 3. \
             Extend the density grid upward.",
            densities[peak]
        )));
    }
    Ok((peak, fit_power_law(&densities[start..], &h_bar[start..])?))
}

/// h̄(ρ) per case and a post-peak power-law fit per case. Fits are in the
/// summary under `fits`.
pub fn run_hbar_scaling(spec: &HbarSpec) -> Result<Table> {
    check_grid("density", &spec.densities)?;
    if spec.cases.is_empty() {
        return Err(Error::config("no (epsilon, eta) cases given"));
    }
    if spec.densities.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::config("density grid must be strictly increasing"));
    }
    if spec.trials == 0 {
        return Err(Error::config("need at least one trial"));
    }
    let mut points = Vec::new();
    for case in &spec.cases {
        let ch = ChannelModel::cardioid(spec.beta, case.eta, case.epsilon)?;
        for &rho in &spec.densities {
            points.push((*case, ch, rho));
        }
    }
    let stats: Vec<KHopStats> = simulator::install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, (_, ch, rho))| {
                simulate_case(
                    *ch,
                    *rho,
                    spec.domain_radius,
                    spec.boundary_margin,
                    spec.max_sources,
                    spec.seed.wrapping_add(i as u64),
                    spec.trials,
                )
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let mut table = Table::new(
        Metadata::new("hbar_scaling", Some(spec.seed), Some(spec.trials), ser(spec)?),
        &[
            "epsilon",
            "eta",
            "rho",
            "h_bar",
            "h_bar_stderr",
            "mu_inf",
            "disconnected_trials",
            "mean_cluster_size",
        ],
    );
    for ((case, _, rho), st) in points.iter().zip(&stats) {
        table.push(vec![
            case.epsilon.into(),
            case.eta.into(),
            (*rho).into(),
            st.h_bar.into(),
            st.h_bar_stderr.into(),
            st.mu_inf.into(),
            st.disconnected_trials.into(),
            st.mean_cluster_size.into(),
        ]);
    }

    let n = spec.densities.len();
    let fits: Vec<CaseFit> = spec
        .cases
        .iter()
        .enumerate()
        .map(|(c, case)| {
            let h: Vec<f64> = stats[c * n..(c + 1) * n].iter().map(|s| s.h_bar).collect();
            match fit_post_peak(&spec.densities, &h) {
                Ok((peak, fit)) => CaseFit {
                    case: *case,
                    peak_density: spec.densities[peak],
                    fit: Some(fit),
                    refused: None,
                },
                Err(e) => CaseFit {
                    case: *case,
                    peak_density: peak_index(&h).map_or(f64::NAN, |p| spec.densities[p]),
                    fit: None,
                    refused: Some(e.to_string()),
                },
            }
        })
        .collect();
    table.metadata.summary = json!({ "fits": ser(&fits)? });
    Ok(table)
}

// ---------------------------------------------------------------------------
// k-hop degree fit

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FitSpec {
    pub densities: Vec<f64>,
    pub channel: ChannelModel,
    pub k: usize,
    pub trials: u64,
    pub seed: u64,
    pub domain_radius: Option<f64>,
    /// `None` means `k · r_eff(1e-6)`.
    pub boundary_margin: Option<f64>,
    pub max_sources: Option<usize>,
    pub format: Format,
    pub output: Option<PathBuf>,
}

impl Default for FitSpec {
    fn default() -> Self {
        Self {
            densities: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0],
            channel: ChannelModel::RayleighDirectional {
                beta: 1.0,
                eta: 3.0,
                gain: crate::antenna::GainModel::isotropic(),
            },
            k: 3,
            trials: 200,
            seed: 0,
            domain_radius: None,
            boundary_margin: None,
            max_sources: None,
            format: Format::Csv,
            output: None,
        }
    }
}

/// Range of a link with unit gains: `β^{-1/η}` for Rayleigh, `r0` for the
/// disk.
fn unit_gain_range(channel: &ChannelModel) -> f64 {
    match *channel {
        ChannelModel::RayleighDirectional { beta, eta, .. } => beta.powf(-1.0 / eta),
        ChannelModel::HardDisk { r0 } => r0,
    }
}

/// Simulated μ_k(ρ) fitted to `a − b ρ^{1/3} + c ρ`. The summary holds the
/// fit and `c / (π r0²)` next to the conjectured `2k − 1`.
pub fn run_mu_fit(spec: &FitSpec) -> Result<Table> {
    check_grid("density", &spec.densities)?;
    if spec.densities.len() < 5 {
        return Err(Error::config(format!(
            "need at least 5 densities for the fit, got {}",
            spec.densities.len()
        )));
    }
    if spec.k == 0 || spec.trials == 0 {
        return Err(Error::config("k and trials must be at least 1"));
    }
    spec.channel.validate()?;
    let (margin, radius) = geometry(&spec.channel, spec.boundary_margin, spec.k as u32, spec.domain_radius);
    let stats: Vec<KHopStats> = simulator::install(|| {
        spec.densities
            .par_iter()
            .enumerate()
            .map(|(i, &rho)| {
                let mut cfg = network(spec.channel, rho, margin, radius, spec.seed.wrapping_add(i as u64), spec.trials);
                cfg.max_sources = spec.max_sources;
                simulator::simulate(&cfg)
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mu: Vec<f64> = stats.iter().map(|s| s.mu_k(spec.k)).collect();
    let fit = fit_cube_root_law(&spec.densities, &mu)?;
    let r0 = unit_gain_range(&spec.channel);

    let mut table = Table::new(
        Metadata::new("mu_fit", Some(spec.seed), Some(spec.trials), ser(spec)?),
        &["rho", "k", "mu", "stderr", "fitted"],
    );
    for (i, (&rho, st)) in spec.densities.iter().zip(&stats).enumerate() {
        table.push(vec![
            rho.into(),
            spec.k.into(),
            mu[i].into(),
            st.stderr_k(spec.k).into(),
            (mu[i] - fit.residuals[i]).into(),
        ]);
    }
    table.metadata.summary = json!({
        "fit": ser(&fit)?,
        "domain_radius": radius,
        "boundary_margin": margin,
        "leading_coefficient_ratio": fit.value("c") / (std::f64::consts::PI * r0 * r0),
        "conjectured_leading_coefficient": (2 * spec.k - 1) as f64,
    });
    Ok(table)
}

/// Alias kept for the three-hop use case.
pub fn run_mu3_fit(spec: &FitSpec) -> Result<Table> {
    run_mu_fit(&FitSpec { k: 3, ..spec.clone() })
}
