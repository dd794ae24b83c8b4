//! Steady supersonic flow past a circular cone.
//!
//! The crate solves the conical-shock problem for a polytropic gas with
//! adiabatic exponent `γ = 1 + ε` and follows the solution into the
//! hypersonic limit `ε → 0`, where the flow behind the shock collapses onto
//! the cone surface as a measure-valued (Radon) solution.
//!
//! * [`gas`]: normalized free stream and thermodynamic closure.
//! * [`shock`]: jump conditions across an oblique shock, plus the Chaplygin gas.
//! * [`taylor_maccoll`]: the inverse problem, shock angle to cone angle.
//! * [`direct`]: the direct problem, cone angle to shock angle, and `ε` sweeps.
//! * [`measures`]: weak pairings against test functions and the limit solution.
//!
//! ```
//! use conical_shock::{derive_parameters, solve_direct, IntegratorOptions};
//!
//! let gas = derive_parameters(0.01, 1.0).unwrap();
//! let theta0 = 20f64.to_radians();
//! let sol = solve_direct(theta0, &gas, &IntegratorOptions::default(), 1e-9).unwrap();
//! assert!(sol.beta > theta0);
//! // thin shock layer: surface pressure a few percent above sin²θ0,
//! // most of the excess being the free-stream pressure
//! let newtonian = theta0.sin().powi(2);
//! let excess = sol.field.surface_pressure - newtonian;
//! assert!(excess > gas.p0 && excess < 0.06 * newtonian);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod direct;
pub mod error;
pub mod gas;
pub mod integrator;
pub mod measures;
pub mod quadrature;
pub mod shock;
pub mod taylor_maccoll;

pub use direct::{
    a_priori_gap_bound, cone_angle_map, epsilon_star, hypersonic_sweep, solve_direct, DirectSolution, SweepPoint,
    SweepRecord, SweepResult, DEFAULT_ANGLE_TOL,
};
pub use error::{Error, Result};
pub use gas::{derive_parameters, entropy_invariant, pressure, FlowState, GasParameters};
pub use shock::{
    chaplygin_shock_angle, chaplygin_surface_pressure, jump_relations, shock_jump, verify_rankine_hugoniot,
    ChaplyginParameters, JumpResidual, PostShockState,
};
pub use taylor_maccoll::{
    integrate_inverse, monotonicity_report, ConicalField, Diagnostics, IntegratorOptions, MonotonicityReport,
};
