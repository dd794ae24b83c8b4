//! The reduced conical-flow system and its integration from the shock to the cone.
//!
//! Behind an attached shock the state `(ρ, u, w)` depends on the polar angle
//! only. Mass, radial momentum and tangential momentum give
//!
//! ```text
//! ρ' = ρu(u·cotθ + w) / (c² - u²)
//! u' = (u²w - c²(u·cotθ + 2w)) / (c² - u²)
//! w' = u
//! ```
//!
//! with `c² = ε(E0 - |V|²/2)`. The inverse problem starts from the jump state
//! at a given shock angle `β` and marches toward the axis until `u = 0`; that
//! angle is the cone half-angle `θ̄ = T(β)`.

mod monotonicity;
pub mod oracle;

pub use monotonicity::{monotonicity_report, MonotonicityReport, Violation};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::{entropy_invariant, FlowState, GasParameters};
use crate::integrator::{dopri5_step, next_step_size, DenseSegment, State};
use crate::quadrature::GaussLegendre;
use crate::shock::{shock_jump, PostShockState};

/// Relative slack for the invariant-region checks made while integrating.
const REGION_TOLERANCE: f64 = 1e-9;

/// Right-hand side of the conical-flow system in `(ρ, u, w)`.
///
/// Fails with [`Error::SonicSingularity`] when `c² - u² <= det_floor`, where
/// the system cannot be solved for the derivatives.
pub fn rhs(theta: f64, rho: f64, u: f64, w: f64, params: &GasParameters, det_floor: f64) -> Result<State<3>> {
    let c2 = params.sound_speed_sq(u * u + w * w);
    if !(rho > 0.0) || !(c2 > 0.0) {
        return Err(Error::NonPhysical(format!(
            "rho = {rho}, c^2 = {c2} at theta = {theta}"
        )));
    }
    let det = c2 - u * u;
    if !(det > det_floor) {
        return Err(Error::SonicSingularity { theta, det, floor: det_floor });
    }
    let cot = theta.cos() / theta.sin();
    let drho = rho * u * (u * cot + w) / det;
    let du = (u * u * w - c2 * (u * cot + 2.0 * w)) / det;
    Ok([drho, du, u])
}

/// Step-control and termination settings for [`integrate_inverse`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegratorOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// `|u|` accepted at the located cone angle.
    pub u_tol: f64,
    /// Smallest admissible `c² - u²`; `None` means `1e-12·c²(β)`.
    pub det_floor: Option<f64>,
    pub max_steps: usize,
    /// Integration gives up (no cone) once θ reaches this angle.
    pub theta_floor: f64,
    pub initial_step: f64,
    pub max_step: f64,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            u_tol: 1e-12,
            det_floor: None,
            max_steps: 100_000,
            theta_floor: 1e-4,
            initial_step: 1e-4,
            max_step: 0.02,
        }
    }
}

impl IntegratorOptions {
    pub fn with_tolerances(mut self, rel_tol: f64, abs_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self.abs_tol = abs_tol;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("rel_tol", self.rel_tol),
            ("abs_tol", self.abs_tol),
            ("u_tol", self.u_tol),
            ("initial_step", self.initial_step),
            ("max_step", self.max_step),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::domain(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(f) = self.det_floor {
            if !(f > 0.0) {
                return Err(Error::domain(format!("det_floor must be positive, got {f}")));
            }
        }
        if !(self.theta_floor >= 0.0) {
            return Err(Error::domain(format!("theta_floor must be nonnegative, got {}", self.theta_floor)));
        }
        if self.max_steps == 0 {
            return Err(Error::domain("max_steps must be positive"));
        }
        Ok(())
    }
}

/// Integration statistics and invariant diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Diagnostics {
    /// Largest relative deviation of `p/ρ^(1+ε)` from its value at the shock.
    pub max_entropy_drift: f64,
    /// Smallest `c² - u²` over the grid.
    pub min_det: f64,
    pub accepted_steps: usize,
    pub rejected_steps: usize,
    pub rhs_evals: usize,
    /// `|u|` of the interpolant at the located cone angle, before it is set to zero.
    pub terminal_u_residual: f64,
}

/// Solved flow between the cone and the shock.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicalField {
    pub params: GasParameters,
    pub beta: f64,
    pub theta_cone: f64,
    /// States from `θ = β` down to `θ = θ̄`; the last one is the cone surface with `u = 0`.
    pub grid: Vec<FlowState>,
    pub surface_pressure: f64,
    pub diagnostics: Diagnostics,
    pub(crate) segments: Vec<DenseSegment<3>>,
}

impl ConicalField {
    pub fn shock_state(&self) -> &FlowState {
        &self.grid[0]
    }

    pub fn cone_state(&self) -> &FlowState {
        self.grid.last().expect("field grid is never empty")
    }

    /// Interpolated `(ρ, u, w)` at `theta ∈ [θ̄, β]`.
    pub fn state_at(&self, theta: f64) -> Option<State<3>> {
        if theta > self.beta || theta < self.theta_cone {
            return None;
        }
        // segments run from the shock toward the cone, so `t0` decreases
        let idx = self.segments.partition_point(|s| s.t0 > theta);
        let seg = if idx == self.segments.len() {
            self.segments.last()?
        } else if idx == 0 {
            &self.segments[0]
        } else if self.segments[idx].t0 == theta {
            &self.segments[idx]
        } else {
            &self.segments[idx - 1]
        };
        Some(seg.eval(theta))
    }

    /// `∫ f(θ, (ρ, u, w)) dθ` over `[θ̄, β]`, composite Gauss–Legendre on the
    /// solver's own steps.
    pub fn integrate_theta<F>(&self, rule: &GaussLegendre, mut f: F) -> f64
    where
        F: FnMut(f64, &State<3>) -> f64,
    {
        let mut total = 0.0;
        for seg in &self.segments {
            let (a, b) = seg.span();
            let lo = b.max(self.theta_cone);
            if lo >= a {
                continue;
            }
            total += rule.integrate(lo, a, |t| f(t, &seg.eval(t)));
        }
        total
    }

    /// Copy of the field with the density scaled by `factor` everywhere.
    ///
    /// The result no longer solves the flow equations; it exists to check
    /// that flux diagnostics notice a corrupted field.
    pub fn with_density_scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.grid {
            s.rho *= factor;
        }
        for seg in &mut out.segments {
            seg.scale_component(0, factor);
        }
        out
    }
}

fn region_check(
    y: &State<3>,
    theta: f64,
    shock: &PostShockState,
    rho_cap: f64,
    prev: &State<3>,
    params: &GasParameters,
) -> Result<()> {
    let s = &shock.state;
    let tol = REGION_TOLERANCE;
    let exit = |reason: String| Err(Error::InvariantRegionExit { theta, reason });
    let [rho, u, w] = *y;
    if rho < s.rho * (1.0 - tol) || rho > rho_cap * (1.0 + tol) {
        return exit(format!("density {rho} outside ({}, {rho_cap})", s.rho));
    }
    if u < s.u * (1.0 + tol) {
        return exit(format!("u = {u} below its shock value {}", s.u));
    }
    if w < s.w * (1.0 - tol) || w >= 2.0 * params.e0 {
        return exit(format!("w = {w} outside ({}, {})", s.w, 2.0 * params.e0));
    }
    let slack = |v: f64| tol * v.abs().max(1e-300);
    if rho < prev[0] - slack(rho) || u < prev[1] - slack(u) || w < prev[2] - slack(w) {
        return exit(format!(
            "lost monotonicity: (rho, u, w) went from {prev:?} to {y:?}"
        ));
    }
    Ok(())
}

/// Solves the inverse problem: from the shock at `beta`, integrate toward the
/// axis and stop where `u` vanishes.
pub fn integrate_inverse(beta: f64, params: &GasParameters, opts: &IntegratorOptions) -> Result<ConicalField> {
    opts.validate()?;
    let shock = shock_jump(beta, params)?;
    let s0 = shock.state;
    let det_floor = opts.det_floor.unwrap_or(1e-12 * s0.c * s0.c);
    // upper density bound from p = Kρ^γ and p < ε/(ε+1)·ρ·E0
    let rho_cap = (params.epsilon * params.e0 * s0.rho.powf(params.gamma)
        / ((params.epsilon + 1.0) * s0.p))
        .powf(1.0 / params.epsilon);

    let mut evals = 0usize;
    let mut f = |t: f64, y: &State<3>| {
        evals += 1;
        rhs(t, y[0], y[1], y[2], params, det_floor)
    };

    let mut theta = beta;
    let mut y: State<3> = [s0.rho, s0.u, s0.w];
    let mut k = f(theta, &y)?;
    let mut h = -opts.initial_step.min(opts.max_step);
    let mut grid = vec![s0];
    let mut segments = Vec::new();
    let (mut accepted, mut rejected) = (0usize, 0usize);

    let (theta_cone, terminal, residual) = loop {
        if accepted + rejected >= opts.max_steps {
            return Err(Error::StepBudget(opts.max_steps));
        }
        let room = theta - opts.theta_floor;
        if room <= 1e-14 * theta.max(1.0) {
            return Err(Error::NoConeFound { theta, u: y[1] });
        }
        if -h > room {
            h = -room;
        }
        let step = match dopri5_step(&mut f, theta, &y, &k, h, opts.rel_tol, opts.abs_tol) {
            Ok(step) => step,
            // a stage may poke outside the admissible region on an oversized step
            Err(Error::SonicSingularity { .. } | Error::NonPhysical(_)) if -h > 1e-12 => {
                rejected += 1;
                h *= 0.25;
                continue;
            }
            Err(e) => return Err(e),
        };
        if step.error > 1.0 {
            rejected += 1;
            h = next_step_size(h, step.error);
            continue;
        }
        accepted += 1;
        let theta_new = theta + h;
        let u_new = step.y[1];

        if u_new >= 0.0 || u_new.abs() < opts.u_tol {
            let (t_ev, y_ev) = if u_new < 0.0 {
                (theta_new, step.y)
            } else {
                locate_zero(&step.dense, theta_new, theta, opts.u_tol)
            };
            segments.push(step.dense);
            break (t_ev, y_ev, y_ev[1].abs());
        }

        region_check(&step.y, theta_new, &shock, rho_cap, &y, params)?;
        grid.push(FlowState::new(theta_new, step.y[0], step.y[1], step.y[2], params)?);
        segments.push(step.dense);
        theta = theta_new;
        y = step.y;
        k = step.f;
        h = next_step_size(h, step.error).max(-opts.max_step);
    };

    let cone = FlowState::new(theta_cone, terminal[0], 0.0, terminal[2], params)?;
    grid.push(cone);

    // a priori bound: u' < -cosβ all the way to the cone
    let bound = s0.u.abs() / beta.cos() + opts.u_tol;
    if beta - theta_cone > bound {
        return Err(Error::InvariantRegionExit {
            theta: theta_cone,
            reason: format!("shock-cone gap {} exceeds |u(beta)|/cos(beta) = {bound}", beta - theta_cone),
        });
    }

    let s_ref = entropy_invariant(&s0, params);
    let mut max_drift: f64 = 0.0;
    let mut min_det = f64::INFINITY;
    for s in &grid {
        max_drift = max_drift.max((entropy_invariant(s, params) - s_ref).abs() / s_ref);
        min_det = min_det.min(s.c * s.c - s.u * s.u);
    }

    Ok(ConicalField {
        params: *params,
        beta,
        theta_cone,
        surface_pressure: cone.p,
        diagnostics: Diagnostics {
            max_entropy_drift: max_drift,
            min_det,
            accepted_steps: accepted,
            rejected_steps: rejected,
            rhs_evals: evals,
            terminal_u_residual: residual,
        },
        grid,
        segments,
    })
}

/// Bisection for `u = 0` on the dense output of one step, `u(lo) >= 0 > u(hi)`.
fn locate_zero(seg: &DenseSegment<3>, mut lo: f64, mut hi: f64, u_tol: f64) -> (f64, State<3>) {
    let mut best = (lo, seg.eval(lo));
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let y = seg.eval(mid);
        if y[1].abs() < best.1[1].abs() {
            best = (mid, y);
        }
        if y[1].abs() < u_tol || mid == lo || mid == hi {
            break;
        }
        if y[1] < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::derive_parameters;

    fn deg(x: f64) -> f64 {
        x.to_radians()
    }

    #[test]
    fn rhs_on_cone_surface() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        for &(theta, rho, w) in &[(0.3, 2.0, 0.9), (1.0, 5.0, 0.4)] {
            let d = rhs(theta, rho, 0.0, w, &g, 0.0).unwrap();
            assert_eq!(d[0], 0.0);
            assert!((d[1] + 2.0 * w).abs() < 1e-15);
            assert_eq!(d[2], 0.0);
        }
    }

    #[test]
    fn rhs_behind_shock_decreases_u() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        let s = shock_jump(deg(30.0), &g).unwrap().state;
        let d = rhs(s.theta, s.rho, s.u, s.w, &g, 0.0).unwrap();
        assert!(d[1] < 0.0, "du = {}", d[1]);
        assert!(d[1] < -s.w);
        assert!(d[0] < 0.0);
    }

    #[test]
    fn rhs_sonic_singularity() {
        let g = derive_parameters(0.1, 1.0).unwrap();
        // choose u with u^2 = c^2 = eps (E0 - (u^2 + w^2)/2)
        let w = 0.5;
        let u2 = g.epsilon * (g.e0 - 0.5 * w * w) / (1.0 + 0.5 * g.epsilon);
        let err = rhs(0.4, 2.0, -u2.sqrt(), w, &g, 1e-14).unwrap_err();
        assert!(matches!(err, Error::SonicSingularity { .. }));
    }

    #[test]
    fn inverse_at_thirty_degrees() {
        let g = derive_parameters(0.01, 1.0).unwrap();
        let field = integrate_inverse(deg(30.0), &g, &IntegratorOptions::default()).unwrap();
        let s0 = field.shock_state();
        assert_eq!(s0.theta, field.beta);
        assert!(field.theta_cone < field.beta);
        assert!(field.beta - field.theta_cone <= s0.u.abs() / s0.w);
        assert_eq!(field.cone_state().u, 0.0);
        assert!(field.diagnostics.terminal_u_residual < 1e-12);
        assert!(field.diagnostics.max_entropy_drift < 1e-8);
        assert!(field.diagnostics.min_det > 0.0);
        let interior = &field.grid[1..field.grid.len() - 1];
        assert!(interior.iter().all(|s| s.u < 0.0 && s.w > 0.0));
        assert_eq!(field.surface_pressure, field.cone_state().p);
    }

    #[test]
    fn dense_state_matches_grid() {
        let g = derive_parameters(0.02, 1.0).unwrap();
        let field = integrate_inverse(deg(25.0), &g, &IntegratorOptions::default()).unwrap();
        for s in &field.grid {
            let y = field.state_at(s.theta).unwrap();
            assert!((y[0] - s.rho).abs() < 1e-10 * s.rho, "{} vs {}", y[0], s.rho);
            assert!((y[2] - s.w).abs() < 1e-12);
        }
        assert!(field.state_at(field.beta + 1e-3).is_none());
        assert!(field.state_at(field.theta_cone - 1e-3).is_none());
    }

    #[test]
    fn subsonic_shock_propagates() {
        let g = derive_parameters(1.0, 1.0).unwrap();
        let err = integrate_inverse(deg(10.0), &g, &IntegratorOptions::default()).unwrap_err();
        assert!(matches!(err, Error::SubsonicNormal { .. }));
    }

    #[test]
    fn cone_angle_tends_to_shock_angle() {
        let beta = deg(30.0);
        let gaps: Vec<f64> = [0.04, 0.02, 0.01, 0.005]
            .iter()
            .map(|&e| {
                let g = derive_parameters(e, 1.0).unwrap();
                beta - integrate_inverse(beta, &g, &IntegratorOptions::default()).unwrap().theta_cone
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
        assert!(gaps[3] < 0.01);
    }

    #[test]
    fn floor_above_cone_reports_no_cone() {
        let g = derive_parameters(0.05, 1.0).unwrap();
        let opts = IntegratorOptions { theta_floor: deg(29.9), ..Default::default() };
        let err = integrate_inverse(deg(30.0), &g, &opts).unwrap_err();
        assert!(matches!(err, Error::NoConeFound { u, .. } if u < 0.0));
    }

    #[test]
    fn tiny_step_budget_is_reported() {
        let g = derive_parameters(0.05, 1.0).unwrap();
        let opts = IntegratorOptions { max_steps: 3, ..Default::default() };
        assert!(matches!(integrate_inverse(deg(30.0), &g, &opts), Err(Error::StepBudget(3))));
    }

    #[test]
    fn invalid_options_rejected() {
        let g = derive_parameters(0.05, 1.0).unwrap();
        let opts = IntegratorOptions { rel_tol: 0.0, ..Default::default() };
        assert!(matches!(integrate_inverse(deg(30.0), &g, &opts), Err(Error::Domain(_))));
    }
}
