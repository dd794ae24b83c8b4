//! Fixed-step classical Runge–Kutta reference for the cone angle.
//!
//! Shares nothing with the adaptive path except the right-hand side: no error
//! control, no dense output. Used to cross-check [`super::integrate_inverse`].

use serde::Serialize;

use super::rhs;
use crate::error::{Error, Result};
use crate::gas::GasParameters;
use crate::integrator::{rk4_step, State};
use crate::shock::shock_jump;

/// How the `u = 0` crossing is placed inside the last fixed step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CrossingRule {
    /// Linear interpolation between the two bracketing nodes, `O(h²)`.
    Linear,
    /// Bisection on the length of a final partial RK4 step, which keeps the
    /// scheme's `O(h⁴)` accuracy.
    PartialStep,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleSolution {
    pub theta_cone: f64,
    pub steps: usize,
}

/// Marches from the shock at `beta` with fixed step `h` until `u` changes sign.
pub fn rk4_cone_angle(
    beta: f64,
    params: &GasParameters,
    h: f64,
    rule: CrossingRule,
    theta_floor: f64,
) -> Result<OracleSolution> {
    if !(h > 0.0) {
        return Err(Error::domain(format!("step must be positive, got {h}")));
    }
    let s0 = shock_jump(beta, params)?.state;
    let floor = 1e-12 * s0.c * s0.c;
    let mut f = |t: f64, y: &State<3>| rhs(t, y[0], y[1], y[2], params, floor);

    let mut theta = beta;
    let mut y: State<3> = [s0.rho, s0.u, s0.w];
    let mut steps = 0usize;
    loop {
        let step = h.min(theta - theta_floor);
        if step <= 0.0 {
            return Err(Error::NoConeFound { theta, u: y[1] });
        }
        let y_next = rk4_step(&mut f, theta, &y, -step)?;
        steps += 1;
        if y_next[1] >= 0.0 {
            let theta_cone = match rule {
                CrossingRule::Linear => theta - step * (-y[1]) / (y_next[1] - y[1]),
                CrossingRule::PartialStep => {
                    let (mut lo, mut hi) = (0.0, step);
                    for _ in 0..200 {
                        let mid = 0.5 * (lo + hi);
                        if mid == lo || mid == hi {
                            break;
                        }
                        if rk4_step(&mut f, theta, &y, -mid)?[1] < 0.0 {
                            lo = mid;
                        } else {
                            hi = mid;
                        }
                    }
                    theta - 0.5 * (lo + hi)
                }
            };
            return Ok(OracleSolution { theta_cone, steps });
        }
        theta -= step;
        y = y_next;
    }
}
