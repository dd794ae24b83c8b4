use thiserror::Error;

/// Failures raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-physical state: {0}")]
    NonPhysical(String),

    #[error("normal upstream Mach number M0n = {m0n:.6} is subsonic; no entropy-admissible attached shock")]
    SubsonicNormal { m0n: f64 },

    #[error("normal upstream Mach number M0n = {m0n} is sonic; the jump degenerates to a continuous state")]
    SonicNormal { m0n: f64 },

    #[error("regime error: {0}")]
    Regime(String),

    #[error("sonic singularity at theta = {theta:.9} rad: c^2 - u^2 = {det:e} is below the floor {floor:e}")]
    SonicSingularity { theta: f64, det: f64, floor: f64 },

    #[error("no cone found: u = {u:e} is still negative at theta = {theta:e} rad")]
    NoConeFound { theta: f64, u: f64 },

    #[error("left the invariant region at theta = {theta:.9} rad: {reason}")]
    InvariantRegionExit { theta: f64, reason: String },

    #[error("step budget of {0} steps exhausted")]
    StepBudget(usize),

    #[error("no bracket: {0}")]
    NoBracket(String),

    #[error("bisection stalled with |T(beta) - theta0| = {residual:e} above tolerance {tol:e}")]
    NotConverged { residual: f64, tol: f64 },

    #[error("kind mismatch: {0}")]
    KindMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
