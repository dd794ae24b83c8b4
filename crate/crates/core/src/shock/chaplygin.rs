//! Chaplygin gas, `p = A - B/ρ`.
//!
//! For this gas every discontinuity travels at the characteristic speed, so
//! an attached conical discontinuity has `M0·sinβ0 = 1` regardless of the
//! cone. Once `M0 ≥ 1/sinθ0` that angle no longer lies outside the cone and
//! the solution is a measure concentrated on the cone surface.

use serde::Serialize;

use crate::error::{Error, Result};

/// Relative slack on `M0·sinθ0 ≥ 1` so that the boundary case is accepted
/// despite rounding in `sinθ0`.
const REGIME_TOLERANCE: f64 = 1e-12;

/// Upstream data for a Chaplygin gas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChaplyginParameters {
    /// Constant in the state law. Only pressure differences enter the jump
    /// and surface-pressure formulas, so it is carried but never used.
    pub a: f64,
    pub b: f64,
    pub rho0: f64,
    /// `ρ∞V∞/√B`.
    pub m0: f64,
}

impl ChaplyginParameters {
    pub fn new(a: f64, b: f64, rho0: f64, m0: f64) -> Result<Self> {
        for (name, v) in [("A", a), ("B", b), ("rho0", rho0), ("M0", m0)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(Self { a, b, rho0, m0 })
    }

    /// Builds the parameters from dimensional upstream density and speed.
    pub fn from_upstream(a: f64, b: f64, rho_inf: f64, v_inf: f64) -> Result<Self> {
        if !(b > 0.0) {
            return Err(Error::domain(format!("B must be positive, got {b}")));
        }
        Self::new(a, b, 1.0, rho_inf * v_inf / b.sqrt())
    }

    /// Unit upstream density and `A = B = 1`; only `M0` matters.
    pub fn with_mach(m0: f64) -> Result<Self> {
        Self::new(1.0, 1.0, 1.0, m0)
    }

    /// Whether `M0 ≥ 1/sinθ0`, i.e. the concentrated (measure) regime.
    pub fn is_concentrated(&self, theta0: f64) -> bool {
        self.m0 * theta0.sin() >= 1.0 - REGIME_TOLERANCE
    }
}

/// Half-angle of the attached discontinuity, `arctan(1/sqrt(M0² - 1))`.
pub fn chaplygin_shock_angle(m0: f64) -> Result<f64> {
    if !(m0 > 1.0) {
        return Err(Error::domain(format!("Chaplygin flow must be supersonic, got M0 = {m0}")));
    }
    if m0.is_infinite() {
        return Ok(0.0);
    }
    Ok((1.0 / (m0 * m0 - 1.0).sqrt()).atan())
}

/// Pressure on the cone surface in the concentrated regime,
/// `W_C = sin²θ0 - 1/(ρ0·M0²)`.
pub fn chaplygin_surface_pressure(theta0: f64, chap: &ChaplyginParameters) -> Result<f64> {
    if !(theta0 > 0.0 && theta0 < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(format!("cone angle must lie in (0, pi/2), got {theta0}")));
    }
    if !chap.is_concentrated(theta0) {
        return Err(Error::Regime(format!(
            "M0 = {} < 1/sin(theta0) = {}: the discontinuity stays attached off the cone",
            chap.m0,
            1.0 / theta0.sin()
        )));
    }
    let s = theta0.sin();
    let w_c = s * s - 1.0 / (chap.rho0 * chap.m0 * chap.m0);
    // at the regime boundary rounding can leave a negative residue of order 1e-17
    Ok(if w_c < 0.0 && w_c > -1e-14 { 0.0 } else { w_c })
}
