//! Jump relations across the attached conical shock.
//!
//! The upstream state at the shock is `ρ0 = 1`, `u0 = -sinβ` (along `∂θ`),
//! `w0 = cosβ`, `E0`. With `M0n = M0·sinβ` the normal Mach number, the
//! entropy-admissible post-shock state is
//!
//! ```text
//! ρ(β) = (ε+2)·M0n² / (2 + ε·M0n²)
//! u(β) = -(2 + ε·M0n²) / ((ε+2)·M0n²) · sinβ
//! w(β) = cosβ
//! p(β) = (2(ε+1)·M0n² - ε) / (2+ε) · p0
//! Mn²(β) = (M0n² + 2/ε) / (2(ε+1)/ε · M0n² - 1)
//! ```

mod chaplygin;

pub use chaplygin::{chaplygin_shock_angle, chaplygin_surface_pressure, ChaplyginParameters};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{FlowState, GasParameters};

/// `|M0n² - 1|` below this is treated as a sonic (degenerate) jump.
pub const SONIC_TOLERANCE: f64 = 1e-12;

/// Relative margin used when testing `p(β) > p0`, to discount rounding.
const ENTROPY_MARGIN: f64 = 1e-12;

/// Post-shock state on the downstream side of a conical shock.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PostShockState {
    /// Shock half-angle, radians.
    pub beta: f64,
    pub state: FlowState,
    /// Upstream normal Mach number `M0·sinβ`.
    pub m0n: f64,
    /// Post-shock tangential Mach number squared, from the closed-form jump.
    pub mn_sq: f64,
}

/// Evaluates the closed-form jump at `beta` without the entropy gate.
///
/// For `M0n < 1` this produces the (inadmissible) expansion jump; use
/// [`shock_jump`] unless that is what you want.
pub fn jump_relations(beta: f64, params: &GasParameters) -> Result<PostShockState> {
    if !(beta > 0.0 && beta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(format!("shock angle must lie in (0, pi/2), got {beta}")));
    }
    let eps = params.epsilon;
    let m0n_sq = params.normal_mach_sq(beta);
    let rho = (eps + 2.0) * m0n_sq / (2.0 + eps * m0n_sq);
    let u = -(2.0 + eps * m0n_sq) / ((eps + 2.0) * m0n_sq) * beta.sin();
    let w = beta.cos();
    let mn_sq = (m0n_sq + 2.0 / eps) / (2.0 * (eps + 1.0) / eps * m0n_sq - 1.0);
    let state = FlowState::new(beta, rho, u, w, params)?;
    Ok(PostShockState { beta, state, m0n: m0n_sq.sqrt(), mn_sq })
}

/// Entropy-admissible post-shock state for a shock of half-angle `beta`.
pub fn shock_jump(beta: f64, params: &GasParameters) -> Result<PostShockState> {
    if !(beta > 0.0 && beta < std::f64::consts::FRAC_PI_2) {
        return Err(Error::domain(format!("shock angle must lie in (0, pi/2), got {beta}")));
    }
    let m0n_sq = params.normal_mach_sq(beta);
    if (m0n_sq - 1.0).abs() <= SONIC_TOLERANCE {
        return Err(Error::SonicNormal { m0n: m0n_sq.sqrt() });
    }
    if m0n_sq < 1.0 {
        return Err(Error::SubsonicNormal { m0n: m0n_sq.sqrt() });
    }
    jump_relations(beta, params)
}

/// `p(β)` from the closed-form jump (independent of the state law).
pub fn jump_pressure(post: &PostShockState, params: &GasParameters) -> f64 {
    let eps = params.epsilon;
    let m0n_sq = post.m0n * post.m0n;
    (2.0 * (eps + 1.0) * m0n_sq - eps) / (2.0 + eps) * params.p0
}

/// Residuals of the raw jump conditions plus the entropy verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpResidual {
    /// Mass flux through the shock.
    pub mass: f64,
    /// Energy flux through the shock.
    pub energy: f64,
    /// Radial-momentum flux through the shock.
    pub radial_momentum: f64,
    /// Normal-momentum balance `ρu² + p`.
    pub normal_momentum: f64,
    /// Azimuthal momentum identity.
    pub azimuthal: f64,
    /// `p(β) > p0`.
    pub entropy_satisfied: bool,
}

impl JumpResidual {
    pub fn as_array(&self) -> [f64; 5] {
        [self.mass, self.energy, self.radial_momentum, self.normal_momentum, self.azimuthal]
    }

    pub fn max_abs(&self) -> f64 {
        self.as_array().iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Substitutes `post` back into the unsolved jump conditions.
pub fn verify_rankine_hugoniot(post: &PostShockState, params: &GasParameters) -> JumpResidual {
    let up = FlowState::upstream(post.beta, params);
    let s = &post.state;
    // v ≡ 0 on both sides for axisymmetric flow
    let (v0, v) = (0.0, 0.0);
    let total_enthalpy = 0.5 * s.speed_sq() + s.p / (params.pressure_factor() * s.rho);
    JumpResidual {
        mass: up.rho * up.u - s.rho * s.u,
        energy: up.rho * up.u * params.e0 - s.rho * s.u * total_enthalpy,
        radial_momentum: up.rho * up.w * up.u - s.rho * s.w * s.u,
        normal_momentum: (s.p + s.rho * s.u * s.u) - (up.p + up.rho * up.u * up.u),
        azimuthal: up.rho * up.u * v0 + s.rho * s.u * v,
        entropy_satisfied: s.p > up.p * (1.0 + ENTROPY_MARGIN),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::derive_parameters;
    use approx::assert_relative_eq;

    #[test]
    fn jump_at_thirty_degrees() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        let post = shock_jump(30f64.to_radians(), &g).unwrap();
        assert_relative_eq!(post.m0n * post.m0n, 5.0, max_relative = 1e-14);
        assert_relative_eq!(post.state.rho, 4.2, max_relative = 1e-14);
        assert_relative_eq!(post.state.u, -0.5 / 4.2, max_relative = 1e-14);
        assert_relative_eq!(post.state.w, 0.75f64.sqrt(), max_relative = 1e-15);
        assert_relative_eq!(post.state.p, 0.235931, max_relative = 2e-6);
        assert_relative_eq!(post.mn_sq, 25.0 / 109.0, max_relative = 1e-14);
        assert_relative_eq!(post.state.mach_n.powi(2), post.mn_sq, max_relative = 1e-12);
        assert_relative_eq!(post.state.p, jump_pressure(&post, &g), max_relative = 1e-14);
    }

    #[test]
    fn subsonic_normal_is_rejected() {
        let g = derive_parameters(1.0, 1.0).unwrap();
        let err = shock_jump(10f64.to_radians(), &g).unwrap_err();
        assert!(matches!(err, Error::SubsonicNormal { m0n } if m0n < 1.0));
    }

    #[test]
    fn sonic_jump_is_continuous() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        let beta = (1.0 / g.m0).asin();
        assert!(matches!(shock_jump(beta, &g), Err(Error::SonicNormal { .. })));
        let post = jump_relations(beta, &g).unwrap();
        assert_relative_eq!(post.state.rho, 1.0, max_relative = 1e-14);
        assert_relative_eq!(post.state.u, -beta.sin(), max_relative = 1e-14);
        assert_relative_eq!(post.state.p, g.p0, max_relative = 1e-13);
        let r = verify_rankine_hugoniot(&post, &g);
        assert!(r.max_abs() < 1e-15, "{r:?}");
        assert!(!r.entropy_satisfied);
    }

    #[test]
    fn residuals_vanish_on_closed_form() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        let post = shock_jump(0.6, &g).unwrap();
        let r = verify_rankine_hugoniot(&post, &g);
        assert!(r.max_abs() < 1e-12, "{r:?}");
        assert!(r.entropy_satisfied);
        assert_eq!(r.azimuthal, 0.0);
    }

    #[test]
    fn perturbed_density_is_detected() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        let mut post = shock_jump(30f64.to_radians(), &g).unwrap();
        let (rho, u) = (post.state.rho, post.state.u);
        post.state.rho *= 1.01;
        let r = verify_rankine_hugoniot(&post, &g);
        assert_relative_eq!(r.mass.abs(), 0.01 * rho * u.abs(), max_relative = 1e-10);
    }

    #[test]
    fn strong_shock_limits() {
        let g = derive_parameters(0.05, 0.5 + 1e-6).unwrap();
        let post = shock_jump(1.4, &g).unwrap();
        assert!(post.m0n > 100.0);
        assert_relative_eq!(post.state.rho, (0.05 + 2.0) / 0.05, max_relative = 1e-3);
        assert!(post.state.p / g.p0 > 1e3);
    }

    #[test]
    fn rejects_angles_outside_quadrant() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        assert!(matches!(shock_jump(0.0, &g), Err(Error::Domain(_))));
        assert!(matches!(shock_jump(std::f64::consts::FRAC_PI_2, &g), Err(Error::Domain(_))));
    }
}
