//! The direct problem: given a cone, find the attached shock.
//!
//! The inverse solver defines the map `T: β ↦ θ̄` from shock angle to cone
//! angle. `T` is continuous and `T(β) < β`, so a sign change of
//! `T(β) - θ0` on some `[β_lo, β_hi]` brackets a shock angle for the cone
//! `θ0`; bisection then closes in on it without needing derivatives.

use std::f64::consts::FRAC_PI_2;
use std::time::Duration;

use log::debug;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gas::GasParameters;
use crate::taylor_maccoll::{integrate_inverse, ConicalField, IntegratorOptions};

/// Default tolerance on `|T(β) - θ0|`, radians.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-10;

/// Largest shock angle tried while bracketing.
const BETA_CAP: f64 = FRAC_PI_2 * (1.0 - 1e-3);

/// Cone angle reached from a shock at `beta`.
pub fn cone_angle_map(beta: f64, params: &GasParameters, opts: &IntegratorOptions) -> Result<f64> {
    Ok(integrate_inverse(beta, params, opts)?.theta_cone)
}

/// Upper bound on the shock-cone gap, `ε·(2E′ + sin²β)/(2·sin²θ0)·tanβ`.
pub fn a_priori_gap_bound(theta0: f64, beta: f64, params: &GasParameters) -> f64 {
    let sb = beta.sin();
    let st = theta0.sin();
    params.epsilon * (2.0 * params.e_prime + sb * sb) / (2.0 * st * st) * beta.tan()
}

/// Threshold on `ε` below which every shock angle in `(beta_star, beta_upper)`
/// admits a cone.
pub fn epsilon_star(beta_star: f64, beta_upper: f64, e_prime: f64) -> Result<f64> {
    if !(0.0 < beta_star && beta_star < beta_upper && beta_upper < FRAC_PI_2) {
        return Err(Error::domain(format!(
            "need 0 < beta_* < beta^* < pi/2, got beta_* = {beta_star}, beta^* = {beta_upper}"
        )));
    }
    if !(e_prime > 0.0) {
        return Err(Error::domain(format!("E' must be positive, got {e_prime}")));
    }
    let s2 = beta_star.sin().powi(2);
    let su2 = beta_upper.sin().powi(2);
    let supersonic = s2 / e_prime;
    let gap_limited = beta_star * s2 / ((2.0 * e_prime + su2) * beta_upper.tan());
    Ok(supersonic.min(gap_limited))
}

/// Shock attached to a given cone.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectSolution {
    pub theta0: f64,
    pub beta: f64,
    pub field: ConicalField,
    /// `|T(β) - θ0|`.
    pub residual: f64,
    /// Bisection steps taken after bracketing.
    pub iterations: usize,
}

struct Probe {
    beta: f64,
    value: f64,
    field: ConicalField,
}

/// Finds `β` with `T(β) = θ0` to within `angle_tol`.
pub fn solve_direct(
    theta0: f64,
    params: &GasParameters,
    opts: &IntegratorOptions,
    angle_tol: f64,
) -> Result<DirectSolution> {
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::domain(format!("cone angle must lie in (0, pi/2), got {theta0}")));
    }
    if !(angle_tol > 0.0) {
        return Err(Error::domain(format!("angle tolerance must be positive, got {angle_tol}")));
    }
    opts.validate()?;
    if params.m0 <= 1.0 {
        return Err(Error::NoBracket(format!(
            "incoming flow is subsonic (M0 = {:.6}); no attached conical shock exists",
            params.m0
        )));
    }

    let probe = |beta: f64| -> Result<Probe> {
        let field = integrate_inverse(beta, params, opts)?;
        Ok(Probe { beta, value: field.theta_cone - theta0, field })
    };

    // weakest admissible shock sits just outside the Mach cone
    let mach_angle = (1.0 / params.m0).asin();
    let floor = mach_angle * (1.0 + 1e-9) + 1e-12;

    let mut lo = None;
    let mut delta = (0.01 * theta0).max(1e-6);
    while delta > 1e-13 {
        let beta = (theta0 + delta).max(floor);
        if beta >= BETA_CAP {
            break;
        }
        match probe(beta) {
            Ok(p) if p.value < 0.0 => {
                lo = Some(p);
                break;
            }
            Ok(p) if beta > theta0 + delta => {
                // the Mach cone already encloses the cone; nothing lower to try
                debug!("lower probe at Mach-angle floor gives T - theta0 = {:e}", p.value);
                break;
            }
            Ok(_) => delta *= 0.25,
            Err(e) => {
                debug!("lower probe at beta = {beta} failed: {e}");
                delta *= 2.0;
                if theta0 + delta >= BETA_CAP {
                    break;
                }
            }
        }
    }
    let lo = lo.ok_or_else(|| {
        Error::NoBracket(format!(
            "no shock angle just outside theta0 = {theta0:.9} rad gives a cone inside it (epsilon = {})",
            params.epsilon
        ))
    })?;

    let mut beta_hi = (0.5 * (theta0 + FRAC_PI_2)).max(lo.beta + delta);
    let mut hi = None;
    for _ in 0..40 {
        if beta_hi >= BETA_CAP {
            break;
        }
        match probe(beta_hi) {
            Ok(p) if p.value > 0.0 => {
                hi = Some(p);
                break;
            }
            Ok(p) => debug!("upper probe at beta = {beta_hi} gives T - theta0 = {:e}", p.value),
            Err(e) => debug!("upper probe at beta = {beta_hi} failed: {e}"),
        }
        beta_hi += 0.5 * (BETA_CAP - beta_hi);
    }
    let hi = hi.ok_or_else(|| {
        Error::NoBracket(format!(
            "no attached shock up to beta = {BETA_CAP:.6} rad reaches the cone theta0 = {theta0:.9} rad \
             (epsilon = {}, M0 = {:.4}); the shock is detached or the gas is outside the attached regime",
            params.epsilon, params.m0
        ))
    })?;

    let mut iterations = 0;
    let (mut lo, mut hi) = (lo, hi);
    let best = loop {
        let best_is_lo = lo.value.abs() <= hi.value.abs();
        let best_val = if best_is_lo { lo.value.abs() } else { hi.value.abs() };
        let mid = 0.5 * (lo.beta + hi.beta);
        if best_val < angle_tol || mid <= lo.beta || mid >= hi.beta || iterations >= 200 {
            break if best_is_lo { lo } else { hi };
        }
        let p = probe(mid)?;
        iterations += 1;
        if p.value < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
    };

    let residual = best.value.abs();
    if residual >= angle_tol {
        return Err(Error::NotConverged { residual, tol: angle_tol });
    }
    let bound = a_priori_gap_bound(theta0, best.beta, params);
    if best.beta - theta0 > bound {
        return Err(Error::InvariantRegionExit {
            theta: theta0,
            reason: format!("shock-cone gap {} exceeds the a priori bound {bound}", best.beta - theta0),
        });
    }
    Ok(DirectSolution { theta0, beta: best.beta, field: best.field, residual, iterations })
}

/// One converged rung of an `ε` sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepPoint {
    pub beta: f64,
    /// `β - θ0`.
    pub gap: f64,
    /// `p(θ0)` on the cone.
    pub surface_pressure: f64,
    /// [`a_priori_gap_bound`] at this rung.
    pub gap_bound: f64,
    pub residual: f64,
    #[serde(skip)]
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub epsilon: f64,
    pub outcome: std::result::Result<SweepPoint, String>,
}

impl SweepRecord {
    pub fn point(&self) -> Option<&SweepPoint> {
        self.outcome.as_ref().ok()
    }
}

/// Direct solutions for a decreasing sequence of `ε` at a fixed cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub theta0: f64,
    pub e0: f64,
    pub records: Vec<SweepRecord>,
}

/// Slack allowed on successive-ratio and monotonicity checks along a sweep.
pub const MONOTONE_SLACK: f64 = 0.05;

impl SweepResult {
    /// `sin²θ0`, the limiting surface pressure.
    pub fn newtonian_pressure(&self) -> f64 {
        self.theta0.sin().powi(2)
    }

    fn converged(&self) -> impl Iterator<Item = &SweepPoint> {
        self.records.iter().filter_map(SweepRecord::point)
    }

    /// `gap(ε_{k+1}) / gap(ε_k)` over consecutive converged rungs.
    pub fn gap_ratios(&self) -> Vec<f64> {
        let gaps: Vec<f64> = self.converged().map(|p| p.gap).collect();
        gaps.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Gaps shrink along the ladder, allowing `slack` relative growth.
    pub fn gaps_monotone(&self, slack: f64) -> bool {
        let gaps: Vec<f64> = self.converged().map(|p| p.gap).collect();
        gaps.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
    }

    /// `|p(θ0) - sin²θ0|` per converged rung.
    pub fn pressure_errors(&self) -> Vec<f64> {
        let target = self.newtonian_pressure();
        self.converged().map(|p| (p.surface_pressure - target).abs()).collect()
    }

    pub fn pressures_converging(&self, slack: f64) -> bool {
        self.pressure_errors().windows(2).all(|w| w[1] <= w[0] * (1.0 + slack))
    }

    /// Every converged rung respects its a priori gap bound.
    pub fn bounds_hold(&self) -> bool {
        self.converged().all(|p| p.gap <= p.gap_bound)
    }
}

/// Solves the direct problem for each `ε` in `eps_list` (strictly decreasing).
///
/// Rungs are independent and run in parallel; per-rung failures are kept in
/// the result rather than aborting the sweep.
pub fn hypersonic_sweep(
    theta0: f64,
    eps_list: &[f64],
    e0: f64,
    opts: &IntegratorOptions,
    angle_tol: f64,
) -> Result<SweepResult> {
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::domain(format!("cone angle must lie in (0, pi/2), got {theta0}")));
    }
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::domain("epsilon ladder must be a nonempty list of positive values"));
    }
    if eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::domain("epsilon ladder must be strictly decreasing"));
    }
    GasParameters::new(eps_list[0], e0)?;

    let records = eps_list
        .par_iter()
        .map(|&epsilon| {
            let start = std::time::Instant::now();
            let outcome = GasParameters::new(epsilon, e0)
                .and_then(|params| solve_direct(theta0, &params, opts, angle_tol).map(|s| (s, params)))
                .map(|(sol, params)| SweepPoint {
                    beta: sol.beta,
                    gap: sol.beta - theta0,
                    surface_pressure: sol.field.surface_pressure,
                    gap_bound: a_priori_gap_bound(theta0, sol.beta, &params),
                    residual: sol.residual,
                    wall_time: start.elapsed(),
                })
                .map_err(|e| e.to_string());
            SweepRecord { epsilon, outcome }
        })
        .collect();
    Ok(SweepResult { theta0, e0, records })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::derive_parameters;

    #[test]
    fn epsilon_star_example() {
        let e = epsilon_star(0.2, 0.4, 0.5).unwrap();
        let supersonic = 0.2f64.sin().powi(2) / 0.5;
        assert!((supersonic - 0.078939).abs() < 1e-6);
        assert!((e - 0.016212).abs() < 1e-6, "{e}");
        assert!(epsilon_star(0.2, 0.4, 1e12).unwrap() < 1e-12);
        assert!(matches!(epsilon_star(0.4, 0.2, 0.5), Err(Error::Domain(_))));
        assert!(matches!(epsilon_star(0.2, 0.4, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn map_shrinks_angle() {
        let g = derive_parameters(0.01, 1.0).unwrap();
        let beta = 30f64.to_radians();
        let t = cone_angle_map(beta, &g, &IntegratorOptions::default()).unwrap();
        assert!(t < beta);
        assert!(beta - t <= a_priori_gap_bound(t, beta, &g));
    }

    #[test]
    fn map_gap_roughly_linear_in_epsilon() {
        let beta = 30f64.to_radians();
        let gaps: Vec<f64> = [0.04, 0.02, 0.01]
            .iter()
            .map(|&e| {
                let g = derive_parameters(e, 1.0).unwrap();
                beta - cone_angle_map(beta, &g, &IntegratorOptions::default()).unwrap()
            })
            .collect();
        for w in gaps.windows(2) {
            let r = w[1] / w[0];
            assert!(r > 0.3 && r < 0.7, "{gaps:?}");
        }
    }

    #[test]
    fn direct_solution_at_twenty_degrees() {
        let g = derive_parameters(0.01, 1.0).unwrap();
        let theta0 = 20f64.to_radians();
        let sol = solve_direct(theta0, &g, &IntegratorOptions::default(), 1e-8).unwrap();
        assert!(sol.residual < 1e-8);
        assert!(sol.beta > theta0);
        assert!((sol.field.theta_cone - theta0).abs() < 1e-8);
        assert!(sol.field.diagnostics.terminal_u_residual < 1e-10);
        assert!(sol.beta - theta0 <= a_priori_gap_bound(theta0, sol.beta, &g));
    }

    #[test]
    fn direct_rejects_bad_cones() {
        let g = derive_parameters(0.01, 1.0).unwrap();
        let o = IntegratorOptions::default();
        assert!(matches!(solve_direct(FRAC_PI_2, &g, &o, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(solve_direct(95f64.to_radians(), &g, &o, 1e-8), Err(Error::Domain(_))));
        assert!(matches!(solve_direct(-0.1, &g, &o, 1e-8), Err(Error::Domain(_))));
    }

    #[test]
    fn subsonic_incoming_flow_has_no_bracket() {
        let g = derive_parameters(5.0, 1.0).unwrap();
        let err = solve_direct(20f64.to_radians(), &g, &IntegratorOptions::default(), 1e-8).unwrap_err();
        assert!(matches!(err, Error::NoBracket(ref m) if m.contains("subsonic")), "{err}");
    }

    #[test]
    fn sweep_isolates_failures() {
        let theta0 = 20f64.to_radians();
        let res = hypersonic_sweep(theta0, &[0.04, 0.02, 1e-300], 1.0, &IntegratorOptions::default(), 1e-9).unwrap();
        assert_eq!(res.records.len(), 3);
        assert!(res.records[0].point().is_some());
        assert!(res.records[1].point().is_some());
        assert!(res.records[2].point().is_none());
        assert!(res.gaps_monotone(MONOTONE_SLACK));
        assert!(res.bounds_hold());
    }

    #[test]
    fn sweep_rejects_unordered_ladder() {
        let o = IntegratorOptions::default();
        assert!(hypersonic_sweep(0.3, &[0.01, 0.02], 1.0, &o, 1e-9).is_err());
        assert!(hypersonic_sweep(0.3, &[], 1.0, &o, 1e-9).is_err());
        assert!(hypersonic_sweep(0.3, &[0.02, -0.01], 1.0, &o, 1e-9).is_err());
    }
}
