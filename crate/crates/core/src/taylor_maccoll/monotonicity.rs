use serde::Serialize;

use super::ConicalField;
use crate::gas::FlowState;

/// Changes in the wrong direction smaller than this (relative) are rounding.
const NOISE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub quantity: &'static str,
    /// Grid index at which the wrong-direction change ends.
    pub index: usize,
    pub magnitude: f64,
}

/// Outcome of [`monotonicity_report`]: the first violation per quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct MonotonicityReport {
    pub violations: Vec<Violation>,
    /// Grid points where `q⊥ <= 0`.
    pub nonpositive_q_perp: usize,
}

impl MonotonicityReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.nonpositive_q_perp == 0
    }
}

/// Checks the ordering of the flow behind the shock.
///
/// Walking the grid from the shock toward the cone (decreasing θ), density,
/// tangential velocity `u`, radial velocity `w`, sound speed and the axial
/// velocity `q⊥` must not decrease, while the tangential Mach number must not
/// increase. `q⊥` must stay positive.
pub fn monotonicity_report(field: &ConicalField) -> MonotonicityReport {
    type Getter = fn(&FlowState) -> f64;
    // +1: nondecreasing toward the cone, -1: nonincreasing
    let checks: [(&'static str, Getter, f64); 6] = [
        ("rho", |s| s.rho, 1.0),
        ("u", |s| s.u, 1.0),
        ("w", |s| s.w, 1.0),
        ("c", |s| s.c, 1.0),
        ("Mn", |s| s.mach_n, -1.0),
        ("q_perp", |s| s.q_perp, 1.0),
    ];
    let mut report = MonotonicityReport::default();
    for (quantity, get, sign) in checks {
        for (i, pair) in field.grid.windows(2).enumerate() {
            let (a, b) = (get(&pair[0]), get(&pair[1]));
            let change = sign * (b - a);
            let noise = NOISE * a.abs().max(b.abs());
            if change < -noise {
                report.violations.push(Violation { quantity, index: i + 1, magnitude: -change });
                break;
            }
        }
    }
    report.nonpositive_q_perp = field.grid.iter().filter(|s| s.q_perp <= 0.0).count();
    report
}
