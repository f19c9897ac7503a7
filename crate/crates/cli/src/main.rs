//! `dirnet`: analytic mean degrees, network simulation and the experiment
//! drivers from the command line.

mod args;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use dirnet::analytics::{mu1_closed_form, mu2_hard_disk, mu2_quadrature, HardDiskMode};
use dirnet::channel::ChannelModel;
use dirnet::experiments::{self, Cell, Format, Metadata, Table};
use dirnet::simulator;
use dirnet::{Error, Result};

use args::{AnalyticArgs, Cli, Command, SimulateArgs};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::Analytic(a) => analytic(a),
        Command::Sweep(a) => {
            let spec = a.resolve()?;
            let table = experiments::run_degree_sweep(&spec)?;
            emit(&table, spec.format, spec.output.as_deref())
        }
        Command::Phase(a) => {
            let spec = a.resolve()?;
            let table = experiments::run_phase_diagram(&spec)?;
            emit(&table, spec.format, spec.output.as_deref())
        }
        Command::Hopdist(a) => {
            let spec = a.resolve()?;
            let table = experiments::run_hop_distribution(&spec)?;
            emit(&table, spec.format, spec.output.as_deref())
        }
        Command::Hbar(a) => {
            let spec = a.resolve()?;
            let table = experiments::run_hbar_scaling(&spec)?;
            emit(&table, spec.format, spec.output.as_deref())
        }
        Command::Fit(a) => {
            let spec = a.resolve()?;
            let table = experiments::run_mu_fit(&spec)?;
            emit(&table, spec.format, spec.output.as_deref())
        }
    }
}

fn emit(table: &Table, format: Format, output: Option<&Path>) -> Result<()> {
    table.save(format, output)
}

fn simulate(a: SimulateArgs) -> Result<()> {
    let (cfg, out) = a.resolve()?;
    let stats = match &out.dump {
        Some(path) => {
            let file = File::create(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            let mut w = BufWriter::new(file);
            let stats = simulator::simulate_with_dump(&cfg, &mut w)?;
            w.flush().map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            stats
        }
        None => simulator::simulate(&cfg)?,
    };
    let config = serde_json::to_value(cfg).map_err(|e| Error::Serialize(e.to_string()))?;
    let mut table = Table::new(
        Metadata::new("simulate", Some(cfg.seed), Some(cfg.trials), config),
        &["k", "mu", "stderr", "hop_pmf"],
    );
    for k in 1..=stats.mu.len() {
        table.push(vec![
            Cell::from(k),
            stats.mu_k(k).into(),
            stats.stderr_k(k).into(),
            stats.hop_pmf[k - 1].into(),
        ]);
    }
    table.metadata.summary = json!({
        "mu_inf": stats.mu_inf,
        "mu_inf_stderr": stats.mu_inf_stderr,
        "unreachable_fraction": stats.unreachable_fraction,
        "h_bar": stats.h_bar,
        "h_bar_stderr": stats.h_bar_stderr,
        "mean_cluster_size": stats.mean_cluster_size,
        "n_interior": stats.n_interior,
        "mean_nodes": stats.mean_nodes,
        "disconnected_trials": stats.disconnected_trials,
        "boundary_margin": stats.boundary_margin,
    });
    emit(&table, out.format, out.output.as_deref())
}

fn analytic(a: AnalyticArgs) -> Result<()> {
    let (spec, out) = a.resolve()?;
    let config = serde_json::to_value(&spec).map_err(|e| Error::Serialize(e.to_string()))?;
    let mut table = Table::new(
        Metadata::new("analytic", None, None, config),
        &["quantity", "value", "error_bound"],
    );
    let mut row = |name: &str, v: dirnet::analytics::DegreeEstimate| {
        table.push(vec![name.into(), v.value.into(), v.error_bound.into()]);
    };
    match spec.channel {
        ChannelModel::HardDisk { r0 } => {
            row("mu2", mu2_hard_disk(spec.density, r0, HardDiskMode::NumericIntegral)?);
            row("mu2_asymptotic_2d", mu2_hard_disk(spec.density, r0, HardDiskMode::Asymptotic2D)?);
            row("mu2_asymptotic_3d", mu2_hard_disk(spec.density, r0, HardDiskMode::Asymptotic3D)?);
        }
        ChannelModel::RayleighDirectional { .. } => {
            row("mu1", mu1_closed_form(spec.density, &spec.channel)?);
            if spec.mu2 {
                row("mu2", mu2_quadrature(spec.density, &spec.channel, &spec.quadrature)?);
            }
        }
    }
    emit(&table, out.format, out.output.as_deref())
}
