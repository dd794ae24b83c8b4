use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::direct::{DirectSolution, SweepResult};
use crate::measures::ConvergenceReport;
use crate::taylor_maccoll::ConicalField;

/// One grid point of a solved field; `theta` in degrees.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub theta: f64,
    pub rho: f64,
    pub u: f64,
    pub w: f64,
    pub p: f64,
    pub c: f64,
    #[serde(rename = "Mn")]
    pub mn: f64,
}

fn grid(field: &ConicalField) -> Vec<GridPoint> {
    field
        .grid
        .iter()
        .map(|s| GridPoint { theta: s.theta.to_degrees(), rho: s.rho, u: s.u, w: s.w, p: s.p, c: s.c, mn: s.mach_n })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    /// Fixed step, radians.
    pub step: f64,
    pub theta_cone_deg: f64,
    pub discrepancy_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectReport {
    pub theta0_deg: f64,
    pub beta_deg: f64,
    pub epsilon: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "M0")]
    pub m0: f64,
    pub surface_pressure: f64,
    /// Radians.
    pub residual: f64,
    pub iterations: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub grid: Vec<GridPoint>,
}

impl DirectReport {
    pub fn new(sol: &DirectSolution, oracle: Option<OracleReport>) -> Self {
        let p = &sol.field.params;
        Self {
            theta0_deg: sol.theta0.to_degrees(),
            beta_deg: sol.beta.to_degrees(),
            epsilon: p.epsilon,
            e0: p.e0,
            m0: p.m0,
            surface_pressure: sol.field.surface_pressure,
            residual: sol.residual,
            iterations: sol.iterations,
            oracle,
            grid: grid(&sol.field),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InverseReport {
    pub beta_deg: f64,
    pub theta_cone_deg: f64,
    pub epsilon: f64,
    #[serde(rename = "E0")]
    pub e0: f64,
    #[serde(rename = "M0")]
    pub m0: f64,
    pub surface_pressure: f64,
    pub max_entropy_drift: f64,
    pub terminal_u_residual: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleReport>,
    pub grid: Vec<GridPoint>,
}

impl InverseReport {
    pub fn new(field: &ConicalField, oracle: Option<OracleReport>) -> Self {
        let d = &field.diagnostics;
        Self {
            beta_deg: field.beta.to_degrees(),
            theta_cone_deg: field.theta_cone.to_degrees(),
            epsilon: field.params.epsilon,
            e0: field.params.e0,
            m0: field.params.m0,
            surface_pressure: field.surface_pressure,
            max_entropy_drift: d.max_entropy_drift,
            terminal_u_residual: d.terminal_u_residual,
            accepted_steps: d.accepted_steps,
            rejected_steps: d.rejected_steps,
            oracle,
            grid: grid(field),
        }
    }
}

/// One rung of a sweep; solver fields are empty when the rung failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub beta_deg: Option<f64>,
    pub gap_deg: Option<f64>,
    pub gap_bound_deg: Option<f64>,
    pub p_surface: Option<f64>,
    pub newtonian_sin2: f64,
}

impl SweepRow {
    pub fn from_result(result: &SweepResult) -> Vec<SweepRow> {
        let newtonian = result.newtonian_pressure();
        result
            .records
            .iter()
            .map(|r| {
                let p = r.point();
                SweepRow {
                    epsilon: r.epsilon,
                    beta_deg: p.map(|p| p.beta.to_degrees()),
                    gap_deg: p.map(|p| p.gap.to_degrees()),
                    gap_bound_deg: p.map(|p| p.gap_bound.to_degrees()),
                    p_surface: p.map(|p| p.surface_pressure),
                    newtonian_sin2: newtonian,
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapRow {
    pub family: &'static str,
    pub test_function: String,
    pub epsilon: f64,
    pub value: f64,
    pub limit: f64,
    pub gap: f64,
    pub relative_gap: f64,
}

pub(super) fn gap_rows(report: &ConvergenceReport) -> Vec<GapRow> {
    let mut rows = Vec::new();
    for s in &report.series {
        for (e, rel) in s.entries.iter().zip(s.relative_gaps()) {
            rows.push(GapRow {
                family: s.family.label(),
                test_function: s.test_function.clone(),
                epsilon: e.epsilon,
                value: e.value,
                limit: e.limit,
                gap: e.gap,
                relative_gap: rel,
            });
        }
    }
    rows
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChaplyginReport {
    #[serde(rename = "M0")]
    pub m0: f64,
    pub theta0_deg: f64,
    pub rho0: f64,
    pub beta0_deg: f64,
    /// `M0·sinθ0 ≤ 1`: the discontinuity sits at `beta0` whatever the cone.
    pub attached: bool,
    /// Concentrated-layer pressure, present when `M0·sinθ0 ≥ 1`.
    pub surface_pressure: Option<f64>,
}

impl ChaplyginReport {
    pub fn to_text(&self) -> String {
        let mut s = format!("beta0_deg = {:.6}\n", self.beta0_deg);
        if self.attached {
            s.push_str("regime = attached: M0 <= 1/sin(theta0), the discontinuity angle does not depend on the cone\n");
        }
        if let Some(w) = self.surface_pressure {
            s.push_str("regime = concentrated: M0 >= 1/sin(theta0), mass and momentum collapse onto the cone\n");
            s.push_str(&format!("W_C = {w:.6}\n"));
        }
        s
    }
}

/// Writes `bytes` to `path` via a temporary file in the same directory, or
/// to standard output.
pub(super) fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    let io_err = |p: &Path| {
        let p = p.display().to_string();
        move |source| CliError::Io { path: p, source }
    };
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush()).map_err(io_err(Path::new("<stdout>")))
        }
        Some(path) => {
            let dir = match path.parent() {
                Some(d) if !d.as_os_str().is_empty() => d,
                _ => Path::new("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err(path))?;
            tmp.write_all(bytes).map_err(io_err(path))?;
            tmp.as_file().sync_all().map_err(io_err(path))?;
            tmp.persist(path).map_err(|e| io_err(path)(e.error))?;
            Ok(())
        }
    }
}

pub(super) fn emit_json<T: Serialize + ?Sized>(path: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Other(e.to_string()))?;
    s.push('\n');
    write_output(path, s.as_bytes())
}

pub(super) fn emit_csv<T: Serialize>(path: Option<&Path>, rows: &[T]) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Other(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Other(e.to_string()))?;
    write_output(path, &bytes)
}

pub(super) fn emit_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    write_output(path, text.as_bytes())
}
