//! Normalized incoming flow and pointwise thermodynamics of the polytropic gas.
//!
//! Everything is nondimensional: density is scaled by the upstream density,
//! velocity by the upstream speed, pressure by `ρ∞|V∞|²` and enthalpy by
//! `|V∞|²`. The upstream state is therefore `ρ0 = 1`, `|V0| = 1`, and the gas
//! is described by `ε = γ - 1` and the specific total enthalpy `E0 > 1/2`.
//!
//! The total enthalpy is constant across the shock and along every conical
//! field, so the pressure is a function of density and speed only:
//!
//! ```text
//! p = ε/(ε+1) · ρ · (E0 - |V|²/2)
//! ```

use serde::Serialize;

use crate::error::{Error, Result};

/// Pressures below this are treated as vacuum and reported as non-physical.
pub const PRESSURE_FLOOR: f64 = 1e-300;

/// Normalized incoming-flow and thermodynamic constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GasParameters {
    /// `γ - 1`.
    pub epsilon: f64,
    pub gamma: f64,
    /// Specific total enthalpy of the incoming flow.
    pub e0: f64,
    /// `E0 - 1/2`.
    pub e_prime: f64,
    /// Upstream pressure.
    pub p0: f64,
    /// Upstream Mach number, `1/sqrt(ε·E′)`.
    pub m0: f64,
}

impl GasParameters {
    /// Derives the upstream constants from `ε` and `E0`.
    pub fn new(epsilon: f64, e0: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(Error::domain(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(e0.is_finite() && e0 > 0.5) {
            return Err(Error::domain(format!("E0 must exceed 1/2, got {e0}")));
        }
        let e_prime = e0 - 0.5;
        Ok(Self {
            epsilon,
            gamma: 1.0 + epsilon,
            e0,
            e_prime,
            p0: epsilon / (epsilon + 1.0) * e_prime,
            m0: 1.0 / (epsilon * e_prime).sqrt(),
        })
    }

    /// `ε/(ε+1)`, the factor in front of the pressure law.
    #[inline]
    pub fn pressure_factor(&self) -> f64 {
        self.epsilon / (self.epsilon + 1.0)
    }

    /// Squared sound speed at a given squared flow speed.
    ///
    /// With `E ≡ E0`, `c² = γp/ρ = ε(E0 - |V|²/2)` does not depend on density.
    #[inline]
    pub fn sound_speed_sq(&self, speed_sq: f64) -> f64 {
        self.epsilon * (self.e0 - 0.5 * speed_sq)
    }

    /// Normal component of the upstream Mach number for a shock of half-angle `beta`.
    #[inline]
    pub fn normal_mach(&self, beta: f64) -> f64 {
        self.m0 * beta.sin()
    }

    /// Squared normal Mach number, `sin²β/(ε·E′)`, evaluated without the square root.
    #[inline]
    pub fn normal_mach_sq(&self, beta: f64) -> f64 {
        let s = beta.sin();
        s * s / (self.epsilon * self.e_prime)
    }
}

/// Alias for [`GasParameters::new`].
pub fn derive_parameters(epsilon: f64, e0: f64) -> Result<GasParameters> {
    GasParameters::new(epsilon, e0)
}

/// Pressure from the state law with the total enthalpy pinned to `E0`.
pub fn pressure(rho: f64, speed_sq: f64, params: &GasParameters) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(Error::NonPhysical(format!("density must be positive, got {rho}")));
    }
    let p = params.pressure_factor() * rho * (params.e0 - 0.5 * speed_sq);
    if !(p >= PRESSURE_FLOOR) {
        return Err(Error::NonPhysical(format!(
            "pressure {p:e} at |V|^2 = {speed_sq} (2 E0 = {})",
            2.0 * params.e0
        )));
    }
    Ok(p)
}

/// Flow variables at a polar angle, with the derived thermodynamic quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowState {
    /// Polar angle measured from the cone axis, radians.
    pub theta: f64,
    pub rho: f64,
    /// Velocity component along `∂θ`.
    pub u: f64,
    /// Radial velocity component.
    pub w: f64,
    pub p: f64,
    /// Sound speed.
    pub c: f64,
    /// Tangential Mach number `|u|/c`.
    pub mach_n: f64,
    /// Axial velocity `w·sinθ + u·cosθ`.
    pub q_perp: f64,
}

impl FlowState {
    pub fn new(theta: f64, rho: f64, u: f64, w: f64, params: &GasParameters) -> Result<Self> {
        let speed_sq = u * u + w * w;
        let p = pressure(rho, speed_sq, params)?;
        let c = (params.gamma * p / rho).sqrt();
        Ok(Self {
            theta,
            rho,
            u,
            w,
            p,
            c,
            mach_n: u.abs() / c,
            q_perp: w * theta.sin() + u * theta.cos(),
        })
    }

    /// The uniform upstream state seen at polar angle `theta`.
    pub fn upstream(theta: f64, params: &GasParameters) -> Self {
        let (s, c) = theta.sin_cos();
        Self {
            theta,
            rho: 1.0,
            u: -s,
            w: c,
            p: params.p0,
            c: 1.0 / params.m0,
            mach_n: s * params.m0,
            q_perp: 0.0,
        }
    }

    #[inline]
    pub fn speed_sq(&self) -> f64 {
        self.u * self.u + self.w * self.w
    }
}

/// `p/ρ^(1+ε)`, constant along every smooth conical field.
pub fn entropy_invariant(state: &FlowState, params: &GasParameters) -> f64 {
    state.p / state.rho.powf(1.0 + params.epsilon)
}
