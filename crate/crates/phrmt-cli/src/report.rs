//! Human-readable run reports.

use std::time::Duration;

use phrmt::checks::{CheckResult, VerifyOutcome};

use crate::config::ExperimentConfig;

/// Everything a run prints to stdout: the configuration echo, the sampled
/// eigenvalues and regime, the per-check verdicts, and the wall-clock time.
pub struct RunReport<'a> {
    pub mode: &'a str,
    pub config: &'a ExperimentConfig,
    pub x: Vec<f64>,
    pub regime: String,
    pub resamples: usize,
    pub checks: Vec<CheckResult>,
    pub outputs: Vec<String>,
    pub duration: Duration,
}

impl<'a> RunReport<'a> {
    pub fn from_outcome(
        mode: &'a str,
        config: &'a ExperimentConfig,
        outcome: &VerifyOutcome,
        duration: Duration,
    ) -> Self {
        Self {
            mode,
            config,
            x: outcome.x.clone(),
            regime: outcome.regime.label().to_string(),
            resamples: outcome.resamples,
            checks: outcome.results.clone(),
            outputs: Vec::new(),
            duration,
        }
    }

    pub fn gates_passed(&self) -> bool {
        self.checks.iter().all(|c| !c.gate || c.passed)
    }

    pub fn render(&self) -> String {
        let cfg = self.config;
        let mut out = String::new();
        out.push_str(&format!("phrmt {} report\n", self.mode));
        out.push_str(&format!(
            "  n = {}  m = {}  seed = {}  scalar-class = {}\n",
            cfg.n,
            cfg.m,
            cfg.seed,
            cfg.scalar_class.label()
        ));
        out.push_str(&format!(
            "  b = {}  c = {}  c1 = {}  c2 = {}  kind = {}  pair = ({}, {})  theta = {}\n",
            cfg.b, cfg.c, cfg.c1, cfg.c2,
            cfg.kind.label(),
            cfg.m_index, cfg.n_index, cfg.theta
        ));
        let x_list: Vec<String> = self.x.iter().map(|v| format!("{v:.6}")).collect();
        out.push_str(&format!(
            "  regime = {}  x = [{}]  resamples = {}\n",
            self.regime,
            x_list.join(", "),
            self.resamples
        ));
        for check in &self.checks {
            if check.gate {
                out.push_str(&format!(
                    "  {} {:<40} residual {:9.3e}  tol {:9.3e}\n",
                    if check.passed { "PASS" } else { "FAIL" },
                    check.name,
                    check.residual,
                    check.tolerance
                ));
            } else {
                out.push_str(&format!(
                    "  FINDING {:<37} value {:9.3e}\n",
                    check.name, check.residual
                ));
                if let Some(note) = &check.note {
                    out.push_str(&format!("          {note}\n"));
                }
            }
        }
        for path in &self.outputs {
            out.push_str(&format!("  wrote {path}\n"));
        }
        out.push_str(&format!("  duration {:.3} s\n", self.duration.as_secs_f64()));
        if self.checks.iter().any(|c| c.gate) {
            out.push_str(&format!(
                "  result: {}\n",
                if self.gates_passed() { "PASS" } else { "FAIL" }
            ));
        }
        out
    }
}
