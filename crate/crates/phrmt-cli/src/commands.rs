//! Subcommand definitions and dispatch.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use phrmt::checks::{run_suite, VerifySetup};
use phrmt::dynamics::MetricFlow;
use phrmt::entanglement::{entropy_trace, single_state_weights, BellPair, Generator};
use phrmt::figures::{self, time_grid, FigureId};
use phrmt::spectral::{reduced_operators, schmidt_basis_resampling};

use crate::config::{
    load_file, parse_kind, parse_scalar_class, CliError, ConfigOverlay, ExperimentConfig,
};
use crate::output::{write_single_state, write_trace, TraceMetadata};
use crate::report::RunReport;

/// Pseudo-Hermitian random-matrix experiments: entropy traces, figure
/// reproduction, verification, and single-state evolution.
#[derive(Parser)]
#[command(name = "phrmt", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Sample one matrix and write the Bell-pair entropy trace CSV.
    Run(CommonArgs),
    /// Reproduce a reference figure: presets plus two seeds, one CSV each.
    Figure(FigureArgs),
    /// Run the verification suite; exits nonzero on any gate failure.
    Verify(CommonArgs),
    /// Closed-form single-state occupation weights over time.
    SingleState(CommonArgs),
}

/// Flags mirroring the experiment configuration; unset flags fall back to the
/// config file, then to the defaults.
#[derive(Args, Clone)]
pub struct CommonArgs {
    /// Key = value configuration file (flags win).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Full dimension N (N >= 2M).
    #[arg(long)]
    pub n: Option<usize>,
    /// Block dimension M.
    #[arg(long)]
    pub m: Option<usize>,
    /// RNG seed; fully determines the sampled matrix.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Entry class of the Gaussian block: complex | real.
    #[arg(long, value_parser = parse_scalar_class)]
    pub scalar_class: Option<phrmt::ensemble::ScalarClass>,
    /// Hermitian coupling strength b.
    #[arg(long)]
    pub b: Option<f64>,
    /// Anti-Hermitian coupling strength c.
    #[arg(long)]
    pub c: Option<f64>,
    /// Flow amplitude constant C1.
    #[arg(long)]
    pub c1: Option<f64>,
    /// Time-origin constant C2.
    #[arg(long)]
    pub c2: Option<f64>,
    /// Hamiltonian kind: a1 | a2.
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<phrmt::dynamics::HamiltonianKind>,
    /// First Bell mode index (1-based).
    #[arg(long)]
    pub m_index: Option<usize>,
    /// Second Bell mode index (1-based).
    #[arg(long)]
    pub n_index: Option<usize>,
    /// Mixing angle of the initial superposition (radians).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Azimuthal phase (radians); enters single-state mode only.
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub t_start: Option<f64>,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Number of grid points (>= 1).
    #[arg(long)]
    pub t_steps: Option<usize>,
    /// Output path (trace, single-state) or prefix (figure).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Suppress the timestamp comment for byte-identical reruns.
    #[arg(long)]
    pub deterministic: bool,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Which figure to reproduce: 1 (oscillating) or 2 (saturating).
    #[arg(long)]
    pub id: u32,
    #[command(flatten)]
    pub common: CommonArgs,
}

impl CommonArgs {
    fn overlay(&self) -> ConfigOverlay {
        ConfigOverlay {
            n: self.n,
            m: self.m,
            seed: self.seed,
            scalar_class: self.scalar_class,
            b: self.b,
            c: self.c,
            c1: self.c1,
            c2: self.c2,
            kind: self.kind,
            m_index: self.m_index,
            n_index: self.n_index,
            theta: self.theta,
            phi: self.phi,
            t_start: self.t_start,
            t_end: self.t_end,
            t_steps: self.t_steps,
            output: self.out.clone(),
            deterministic: if self.deterministic { Some(true) } else { None },
        }
    }

    fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut config = ExperimentConfig::default();
        if let Some(path) = &self.config {
            config.apply(&load_file(path)?);
        }
        config.apply(&self.overlay());
        config.validate()?;
        Ok(config)
    }
}

pub fn dispatch(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Run(args) => run_trace(&args.resolve()?),
        Command::Figure(args) => run_figure(args.id, &args.common),
        Command::Verify(args) => run_verify(&args.resolve()?),
        Command::SingleState(args) => run_single_state(&args.resolve()?),
    }
}

fn sample_geometry(
    config: &ExperimentConfig,
) -> Result<(phrmt::spectral::ReducedOperators<f64>, usize), CliError> {
    let ensemble = config.ensemble()?;
    let (basis, _block, resamples) = schmidt_basis_resampling::<f64>(&ensemble, 16)?;
    Ok((reduced_operators(&basis), resamples))
}

fn run_trace(config: &ExperimentConfig) -> Result<ExitCode, CliError> {
    let start = Instant::now();
    let (ops, resamples) = sample_geometry(config)?;
    let flow = MetricFlow::new(config.coupling()?)?;
    let generator = match config.kind {
        phrmt::dynamics::HamiltonianKind::A1 => Generator::R,
        phrmt::dynamics::HamiltonianKind::A2 => Generator::T,
    };
    let pair = BellPair::new(&ops, generator, config.m_index, config.n_index)?;
    let grid = time_grid(config.t_start, config.t_end, config.t_steps);
    let trace = entropy_trace(&flow, &pair, config.theta, &grid)?;

    let path = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("trace.csv"));
    let meta = TraceMetadata {
        mode: "trace".to_string(),
        config,
        seed: config.seed,
        x: &ops.x,
        regime: config.coupling()?.regime().label(),
        resamples,
    };
    write_trace(&path, &meta, &trace)?;

    let mut report = RunReport {
        mode: "trace",
        config,
        x: ops.x.clone(),
        regime: config.coupling()?.regime().label().to_string(),
        resamples,
        checks: Vec::new(),
        outputs: vec![path.display().to_string()],
        duration: start.elapsed(),
    };
    report.checks.clear();
    print!("{}", report.render());
    Ok(ExitCode::SUCCESS)
}

fn run_figure(id: u32, common: &CommonArgs) -> Result<ExitCode, CliError> {
    let start = Instant::now();
    let id = FigureId::from_index(id)
        .ok_or_else(|| CliError::Usage(format!("id: expected 1 or 2, got {id}")))?;

    // Presets pin everything except the seed and output handling.
    let preset = figures::preset(id);
    let mut config = ExperimentConfig::default();
    if let Some(path) = &common.config {
        config.apply(&load_file(path)?);
    }
    config.apply(&common.overlay());
    config.n = preset.n;
    config.m = preset.m;
    config.b = preset.coupling.b;
    config.c = preset.coupling.c;
    config.c1 = preset.coupling.c1;
    config.c2 = preset.coupling.c2;
    config.theta = preset.theta;
    config.m_index = 1;
    config.n_index = 2;
    config.t_start = preset.t_start;
    config.t_end = preset.t_end;
    config.t_steps = preset.t_steps;
    config.validate()?;

    let prefix = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("figure{}", id.index())));

    let samples = figures::figure_samples(id, config.seed).map_err(CliError::from)?;
    let mut outputs = Vec::new();
    for sample in &samples {
        let path = PathBuf::from(format!("{}-seed{}.csv", prefix.display(), sample.seed));
        let mut seed_config = config.clone();
        seed_config.seed = sample.seed;
        let meta = TraceMetadata {
            mode: format!("figure:{}", id.index()),
            config: &seed_config,
            seed: sample.seed,
            x: &sample.x,
            regime: sample.regime.label(),
            resamples: sample.resamples,
        };
        write_trace(&path, &meta, &sample.trace)?;
        outputs.push(path.display().to_string());
    }

    let report = RunReport {
        mode: "figure",
        config: &config,
        x: samples[0].x.clone(),
        regime: samples[0].regime.label().to_string(),
        resamples: samples[0].resamples,
        checks: Vec::new(),
        outputs,
        duration: start.elapsed(),
    };
    print!("{}", report.render());
    Ok(ExitCode::SUCCESS)
}

fn run_verify(config: &ExperimentConfig) -> Result<ExitCode, CliError> {
    let start = Instant::now();
    let setup = VerifySetup {
        ensemble: config.ensemble()?,
        coupling: config.coupling()?,
        theta: config.theta,
        m_index: config.m_index,
        n_index: config.n_index,
    };
    let outcome = run_suite(&setup).map_err(CliError::from)?;
    let report = RunReport::from_outcome("verify", config, &outcome, start.elapsed());
    print!("{}", report.render());
    if report.gates_passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::from(1))
    }
}

fn run_single_state(config: &ExperimentConfig) -> Result<ExitCode, CliError> {
    let start = Instant::now();
    let (ops, resamples) = sample_geometry(config)?;
    let flow = MetricFlow::new(config.coupling()?)?;
    let x_k = ops.x[config.m_index - 1];
    let grid = time_grid(config.t_start, config.t_end, config.t_steps);

    let mut rows = Vec::with_capacity(grid.len());
    for &t in &grid {
        let gamma = flow.gamma(x_k, t).map_err(CliError::from)?;
        let (wx, wy) = single_state_weights(config.kind, config.theta, gamma);
        rows.push((t, gamma, wx, wy));
    }

    let path = config
        .output
        .clone()
        .unwrap_or_else(|| PathBuf::from("single-state.csv"));
    let meta = TraceMetadata {
        mode: "single-state".to_string(),
        config,
        seed: config.seed,
        x: &ops.x,
        regime: config.coupling()?.regime().label(),
        resamples,
    };
    write_single_state(&path, &meta, &rows)?;

    let report = RunReport {
        mode: "single-state",
        config,
        x: ops.x.clone(),
        regime: config.coupling()?.regime().label().to_string(),
        resamples,
        checks: Vec::new(),
        outputs: vec![path.display().to_string()],
        duration: start.elapsed(),
    };
    print!("{}", report.render());
    Ok(ExitCode::SUCCESS)
}
