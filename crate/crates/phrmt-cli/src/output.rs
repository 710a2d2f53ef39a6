//! CSV emission.
//!
//! Contract: `#`-prefixed metadata comment lines, then the header
//! `t,delta,lambda1,lambda2,entropy`, then one row per grid point. Floats use
//! Rust's shortest round-trip formatting (full double precision on re-read),
//! the decimal separator is '.', and line endings are LF. Reruns with an
//! identical configuration are byte-identical except for the timestamp
//! comment, which `--deterministic` suppresses.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use phrmt::dynamics::HamiltonianKind;
use phrmt::entanglement::EntropyTrace;

use crate::config::{CliError, ExperimentConfig};

/// Metadata block written ahead of the header.
pub struct TraceMetadata<'a> {
    pub mode: String,
    pub config: &'a ExperimentConfig,
    pub seed: u64,
    pub x: &'a [f64],
    pub regime: &'a str,
    pub resamples: usize,
}

fn write_metadata(w: &mut impl Write, meta: &TraceMetadata<'_>) -> std::io::Result<()> {
    let cfg = meta.config;
    writeln!(w, "# mode = {}", meta.mode)?;
    writeln!(w, "# n = {}", cfg.n)?;
    writeln!(w, "# m = {}", cfg.m)?;
    writeln!(w, "# seed = {}", meta.seed)?;
    writeln!(w, "# scalar-class = {}", cfg.scalar_class.label())?;
    writeln!(
        w,
        "# entry-convention = {}",
        match cfg.scalar_class {
            phrmt::ensemble::ScalarClass::Complex =>
                "independent standard-normal real and imaginary parts (per-entry variance 2)",
            phrmt::ensemble::ScalarClass::Real => "standard-normal real entries (variance 1)",
        }
    )?;
    writeln!(w, "# b = {}", cfg.b)?;
    writeln!(w, "# c = {}", cfg.c)?;
    writeln!(w, "# c1 = {}", cfg.c1)?;
    writeln!(w, "# c2 = {}", cfg.c2)?;
    writeln!(w, "# kind = {}", cfg.kind.label())?;
    writeln!(w, "# pair = ({}, {})", cfg.m_index, cfg.n_index)?;
    writeln!(w, "# theta = {}", cfg.theta)?;
    writeln!(w, "# phi = {}", cfg.phi)?;
    writeln!(w, "# regime = {}", meta.regime)?;
    let x_list: Vec<String> = meta.x.iter().map(|v| v.to_string()).collect();
    writeln!(w, "# x = {}", x_list.join(", "))?;
    writeln!(w, "# resamples = {}", meta.resamples)?;
    writeln!(w, "# log-base = e")?;
    if !cfg.deterministic {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        writeln!(w, "# generated-at = {stamp}")?;
    }
    Ok(())
}

/// Writes one entropy trajectory.
pub fn write_trace(
    path: &Path,
    meta: &TraceMetadata<'_>,
    trace: &EntropyTrace<f64>,
) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_metadata(&mut w, meta)?;
    writeln!(w, "t,delta,lambda1,lambda2,entropy")?;
    for record in &trace.records {
        writeln!(
            w,
            "{},{},{},{},{}",
            record.t, record.delta, record.lambda1, record.lambda2, record.entropy
        )?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the single-state occupation weights
/// (header `t,gamma,weight_x,weight_y`).
pub fn write_single_state(
    path: &Path,
    meta: &TraceMetadata<'_>,
    rows: &[(f64, f64, f64, f64)],
) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    write_metadata(&mut w, meta)?;
    match meta.config.kind {
        HamiltonianKind::A1 => {
            writeln!(w, "# evolution = mixing-angle rotation theta/2 - gamma_k")?
        }
        HamiltonianKind::A2 => writeln!(w, "# evolution = pure phases, weights constant")?,
    };
    writeln!(w, "t,gamma,weight_x,weight_y")?;
    for (t, gamma, wx, wy) in rows {
        writeln!(w, "{t},{gamma},{wx},{wy}")?;
    }
    w.flush()?;
    Ok(())
}
