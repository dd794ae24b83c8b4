//! Measures on the unit sphere and their pairings with test functions.
//!
//! A conical field defines, for each flow quantity, an absolutely continuous
//! measure on the sphere of directions: the upstream state on the cap
//! `θ > β`, the solved state on the layer `θ̄ < θ < β`. As `ε → 0` the layer
//! collapses onto the circle `C = {θ = θ0}` and some families keep a Dirac
//! part there. [`limit_solution`] holds that limit; [`pair_measure`] evaluates
//! `⟨m, ψ⟩` for either source, and [`convergence_report`] tracks the gaps
//! along a sequence of `ε`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::direct::{solve_direct, MONOTONE_SLACK};
use crate::error::{Error, Result};
use crate::gas::GasParameters;
use crate::quadrature::GaussLegendre;
use crate::taylor_maccoll::{ConicalField, IntegratorOptions};

/// Absolute tolerance of the adaptive cap quadrature.
const CAP_TOL: f64 = 1e-13;

/// Gauss–Legendre order on each solver step.
const LAYER_ORDER: usize = 8;

/// Panels × nodes used for the `φ` integral of non-axisymmetric test functions.
const PHI_PANELS: usize = 8;
const PHI_ORDER: usize = 16;

/// Relative gaps below this are at quadrature and integrator noise level
/// and count as converged when checking decrease.
pub const GAP_FLOOR: f64 = 1e-9;

/// The `ε → 0` limit: uniform upstream flow on `Ω = {θ > θ0}` plus a
/// concentrated layer on the cone circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RadonConeSolution {
    pub theta0: f64,
    pub e0: f64,
    /// Dirac weight of the density on `C`, `½·tanθ0`.
    pub mass_weight: f64,
    /// Dirac weight of the radial mass flux, `½·sinθ0`.
    pub n_a_weight: f64,
    /// Dirac weight of the radial energy flux, `½·sinθ0·E0`.
    pub n_e_weight: f64,
    /// Dirac weight of the radial momentum flux, `½·sinθ0·cosθ0`.
    pub n_r_weight: f64,
    /// Pressure on the cone, `sin²θ0`.
    pub surface_pressure: f64,
}

/// Builds the limit measure solution for a cone of half-angle `theta0`.
pub fn limit_solution(theta0: f64, e0: f64) -> Result<RadonConeSolution> {
    if !(theta0 > 0.0 && theta0 < FRAC_PI_2) {
        return Err(Error::domain(format!("cone angle must lie in (0, pi/2), got {theta0}")));
    }
    if !(e0.is_finite() && e0 > 0.5) {
        return Err(Error::domain(format!("E0 must exceed 1/2, got {e0}")));
    }
    let (s, c) = theta0.sin_cos();
    Ok(RadonConeSolution {
        theta0,
        e0,
        mass_weight: 0.5 * theta0.tan(),
        n_a_weight: 0.5 * s,
        n_e_weight: 0.5 * s * e0,
        n_r_weight: 0.5 * s * c,
        surface_pressure: s * s,
    })
}

impl RadonConeSolution {
    /// Dirac weight of `family` on `C`, per unit arc length.
    pub fn dirac_weight(&self, family: Family) -> f64 {
        match family {
            Family::Density => self.mass_weight,
            Family::RadialMass => self.n_a_weight,
            Family::RadialEnergy => self.n_e_weight,
            Family::RadialMomentum => self.n_r_weight,
            _ => 0.0,
        }
    }
}

/// Measure families carried by a conical flow.
///
/// Tangential families (`m_*`) are vector or tensor valued along `∂θ`; the
/// others are scalar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// `m_a`: tangential mass flux `ρu`.
    TangentialMass,
    /// `m_e`: tangential energy flux `ρuE0`.
    TangentialEnergy,
    /// `m_r`: tangential flux of radial momentum `ρuw`.
    TangentialRadialMomentum,
    /// `m_t`: tangential momentum flux `ρu²`, contracted with `∂θ⊗∂θ`.
    TangentialMomentum,
    /// `n_a`: radial mass flux `ρw`.
    RadialMass,
    /// `n_e`: radial energy flux `ρwE0`.
    RadialEnergy,
    /// `n_r`: radial momentum flux `ρw²`.
    RadialMomentum,
    /// `n_t`: radial flux of tangential momentum `ρu²`.
    RadialTangentialMomentum,
    /// `ϱ`: density.
    Density,
    /// `℘`: pressure.
    Pressure,
}

impl Family {
    pub const ALL: [Family; 10] = [
        Family::TangentialMass,
        Family::TangentialEnergy,
        Family::TangentialRadialMomentum,
        Family::TangentialMomentum,
        Family::RadialMass,
        Family::RadialEnergy,
        Family::RadialMomentum,
        Family::RadialTangentialMomentum,
        Family::Density,
        Family::Pressure,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Family::TangentialMass => "m_a",
            Family::TangentialEnergy => "m_e",
            Family::TangentialRadialMomentum => "m_r",
            Family::TangentialMomentum => "m_t",
            Family::RadialMass => "n_a",
            Family::RadialEnergy => "n_e",
            Family::RadialMomentum => "n_r",
            Family::RadialTangentialMomentum => "n_t",
            Family::Density => "rho",
            Family::Pressure => "p",
        }
    }

    pub fn from_label(label: &str) -> Option<Family> {
        Family::ALL.into_iter().find(|f| f.label() == label)
    }

    /// Whether the family pairs with tangential fields rather than scalars.
    pub fn is_tangential(self) -> bool {
        matches!(
            self,
            Family::TangentialMass
                | Family::TangentialEnergy
                | Family::TangentialRadialMomentum
                | Family::TangentialMomentum
        )
    }

    /// Density of the family at state `(ρ, u, w)` with pressure `p`.
    fn density(self, rho: f64, u: f64, w: f64, p: f64, e0: f64) -> f64 {
        match self {
            Family::TangentialMass => rho * u,
            Family::TangentialEnergy => rho * u * e0,
            Family::TangentialRadialMomentum => rho * u * w,
            Family::TangentialMomentum | Family::RadialTangentialMomentum => rho * u * u,
            Family::RadialMass => rho * w,
            Family::RadialEnergy => rho * w * e0,
            Family::RadialMomentum => rho * w * w,
            Family::Density => rho,
            Family::Pressure => p,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TestKind {
    /// `ψ(θ, φ)`.
    Scalar,
    /// `ψ(θ, φ)·∂θ`.
    TangentialField,
}

type Evaluator = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// A bounded continuous function on the sphere, used scalar or as a
/// multiple of `∂θ`.
#[derive(Clone)]
pub struct TestFunction {
    pub label: String,
    pub kind: TestKind,
    /// `ψ` does not depend on `φ`, so the azimuthal integral is `2π·ψ(θ, 0)`.
    pub axisymmetric: bool,
    /// Continuously differentiable, as required for field pairings.
    pub c1: bool,
    eval: Evaluator,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("label", &self.label)
            .field("kind", &self.kind)
            .field("axisymmetric", &self.axisymmetric)
            .field("c1", &self.c1)
            .finish()
    }
}

impl TestFunction {
    pub fn new<F>(label: impl Into<String>, axisymmetric: bool, c1: bool, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Self { label: label.into(), kind: TestKind::Scalar, axisymmetric, c1, eval: Arc::new(f) }
    }

    pub fn eval(&self, theta: f64, phi: f64) -> f64 {
        (self.eval)(theta, phi)
    }

    /// The same profile used as the coefficient of `∂θ`.
    pub fn as_tangential_field(&self) -> Self {
        Self { kind: TestKind::TangentialField, ..self.clone() }
    }

    /// Same function with the azimuthal integral done by quadrature even if
    /// it could be done in closed form.
    pub fn without_symmetry(&self) -> Self {
        Self { axisymmetric: false, ..self.clone() }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(format!("{value}"), true, true, move |_, _| value)
    }

    pub fn cos_theta() -> Self {
        Self::new("cos(theta)", true, true, |t, _| t.cos())
    }

    pub fn sin2_theta() -> Self {
        Self::new("sin^2(theta)", true, true, |t, _| t.sin().powi(2))
    }

    /// `cosφ·sinθ`, odd under `φ → π - φ`; every axisymmetric measure pairs to zero with it.
    pub fn odd_azimuthal() -> Self {
        Self::new("cos(phi)sin(theta)", false, true, |t, p| p.cos() * t.sin())
    }

    /// `cos²(π(cosθ - cosθc)/(2·half_width))` inside the window, zero
    /// outside. A function of `cosθ`, so it is `C¹` on the whole sphere,
    /// including the poles.
    pub fn bump(center: f64, half_width: f64) -> Self {
        let z0 = center.cos();
        Self::new(format!("bump({center:.6},{half_width})"), true, true, move |t, _| {
            let x = (t.cos() - z0) / half_width;
            if x.abs() >= 1.0 {
                0.0
            } else {
                (FRAC_PI_2 * x).cos().powi(2)
            }
        })
    }

    /// `{1, cosθ, sin²θ, cosφ·sinθ, bump at θ0}`.
    pub fn default_suite(theta0: f64) -> Vec<TestFunction> {
        vec![
            Self::constant(1.0),
            Self::cos_theta(),
            Self::sin2_theta(),
            Self::odd_azimuthal(),
            Self::bump(theta0, BUMP_HALF_WIDTH),
        ]
    }

    /// `∫_0^{2π} ψ(θ, φ) dφ`.
    fn azimuthal_integral(&self, theta: f64, rule: &GaussLegendre) -> f64 {
        if self.axisymmetric {
            TAU * self.eval(theta, 0.0)
        } else {
            rule.integrate_composite(0.0, TAU, PHI_PANELS, |phi| self.eval(theta, phi))
        }
    }

    fn with_abs(&self) -> Self {
        let inner = self.eval.clone();
        Self { eval: Arc::new(move |t, p| inner(t, p).abs()), ..self.clone() }
    }
}

/// Half-width of the default bump, in `cosθ`.
pub const BUMP_HALF_WIDTH: f64 = 0.25;

/// What to pair against.
#[derive(Debug, Clone, Copy)]
pub enum MeasureSource<'a> {
    Field(&'a ConicalField),
    Limit(&'a RadonConeSolution),
}

/// `⟨m, ψ⟩` for one family of `source`.
pub fn pair_measure(source: MeasureSource<'_>, family: Family, psi: &TestFunction) -> Result<f64> {
    let expected = if family.is_tangential() { TestKind::TangentialField } else { TestKind::Scalar };
    if psi.kind != expected {
        return Err(Error::KindMismatch(format!(
            "family {family} pairs with {expected:?} test functions, got {:?} ({})",
            psi.kind, psi.label
        )));
    }
    let phi_rule = GaussLegendre::new(PHI_ORDER);
    let cap_rule = GaussLegendre::new(LAYER_ORDER);
    let psi_bar = |theta: f64| psi.azimuthal_integral(theta, &phi_rule);
    let upstream = |theta: f64, p0: f64, e0: f64| {
        let (s, c) = theta.sin_cos();
        family.density(1.0, -s, c, p0, e0)
    };
    match source {
        MeasureSource::Field(field) => {
            let params = &field.params;
            let cap = cap_rule.integrate_adaptive(field.beta, PI, CAP_TOL, |t| {
                psi_bar(t) * upstream(t, params.p0, params.e0) * t.sin()
            });
            let layer = field.integrate_theta(&cap_rule, |t, y| {
                let [rho, u, w] = *y;
                let p = layer_pressure(rho, u, w, params);
                psi_bar(t) * family.density(rho, u, w, p, params.e0) * t.sin()
            });
            Ok(cap + layer)
        }
        MeasureSource::Limit(lim) => {
            if family == Family::Pressure {
                return Ok(0.0);
            }
            let background = cap_rule.integrate_adaptive(lim.theta0, PI, CAP_TOL, |t| {
                psi_bar(t) * upstream(t, 0.0, lim.e0) * t.sin()
            });
            let weight = lim.dirac_weight(family);
            let dirac = if weight == 0.0 { 0.0 } else { weight * lim.theta0.sin() * psi_bar(lim.theta0) };
            Ok(background + dirac)
        }
    }
}

fn layer_pressure(rho: f64, u: f64, w: f64, params: &GasParameters) -> f64 {
    params.pressure_factor() * rho * (params.e0 - 0.5 * (u * u + w * w))
}

/// Radial mass flux through the shock layer, `2π∫ρw·sinθ dθ` over `[θ̄, β]`.
///
/// Mass conservation makes this equal to `π·sin²β`, the flux of the
/// upstream flow through the shock's cross-section.
pub fn mass_flux(field: &ConicalField) -> f64 {
    let rule = GaussLegendre::new(LAYER_ORDER);
    TAU * field.integrate_theta(&rule, |t, y| y[0] * y[2] * t.sin())
}

/// `|u(β)/w(β)|` in closed form, `tanβ·(2E′/sin²β + 1)·ε/(ε + 2)`.
pub fn velocity_ratio_bound(beta: f64, params: &GasParameters) -> f64 {
    let s2 = beta.sin().powi(2);
    let eps = params.epsilon;
    beta.tan() * (2.0 * params.e_prime / s2 + 1.0) * eps / (eps + 2.0)
}

/// Same expression with `E0` in place of `E′`; larger, hence also a bound.
pub fn velocity_ratio_bound_e0(beta: f64, params: &GasParameters) -> f64 {
    let s2 = beta.sin().powi(2);
    let eps = params.epsilon;
    beta.tan() * (2.0 * params.e0 / s2 + 1.0) * eps / (eps + 2.0)
}

/// Largest `|u/w|` over the field grid.
pub fn max_velocity_ratio(field: &ConicalField) -> f64 {
    field.grid.iter().map(|s| (s.u / s.w).abs()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapEntry {
    pub epsilon: f64,
    pub value: f64,
    pub limit: f64,
    /// `|value - limit|`.
    pub gap: f64,
}

/// Gaps for one (family, test function) pair along the `ε` ladder.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapSeries {
    pub family: Family,
    pub test_function: String,
    /// Scale for relative gaps: `⟨|m|, |ψ|⟩` of the limit, or `∫_Ω|ψ| dA`
    /// when the limit measure vanishes.
    pub scale: f64,
    pub entries: Vec<GapEntry>,
}

impl GapSeries {
    pub fn relative_gaps(&self) -> Vec<f64> {
        self.entries.iter().map(|e| if self.scale > 0.0 { e.gap / self.scale } else { e.gap }).collect()
    }

    pub fn final_relative_gap(&self) -> Option<f64> {
        self.relative_gaps().last().copied()
    }

    /// Relative gaps shrink along the ladder (up to `slack`), ignoring gaps
    /// already at noise level.
    pub fn is_decreasing(&self, slack: f64) -> bool {
        self.relative_gaps()
            .windows(2)
            .all(|w| w[1] <= GAP_FLOOR || w[1] <= w[0] * (1.0 + slack))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VelocityRatioEntry {
    pub epsilon: f64,
    pub max_ratio: f64,
    /// Bound with `E′`, equal to the value at the shock.
    pub bound: f64,
    /// Bound with `E0`.
    pub bound_e0: f64,
}

impl VelocityRatioEntry {
    pub fn holds(&self) -> bool {
        self.max_ratio <= self.bound * (1.0 + 1e-9)
    }
}

/// Vague-convergence diagnostics along an `ε` ladder at a fixed cone.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub theta0: f64,
    pub e0: f64,
    pub series: Vec<GapSeries>,
    pub velocity_ratio: Vec<VelocityRatioEntry>,
    /// `(ε, message)` for rungs whose direct problem failed.
    pub failures: Vec<(f64, String)>,
}

impl ConvergenceReport {
    pub fn series_for(&self, family: Family, test_function: &str) -> Option<&GapSeries> {
        self.series.iter().find(|s| s.family == family && s.test_function == test_function)
    }

    pub fn all_decreasing(&self) -> bool {
        self.series.iter().all(|s| s.is_decreasing(MONOTONE_SLACK))
    }
}

/// Solves the direct problem along `eps_list` and compares every family
/// against the limit for each test function in `psi_suite`.
///
/// Scalar test functions are used as coefficients of `∂θ` for the
/// tangential families.
pub fn convergence_report(
    theta0: f64,
    eps_list: &[f64],
    psi_suite: &[TestFunction],
    e0: f64,
    opts: &IntegratorOptions,
    angle_tol: f64,
) -> Result<ConvergenceReport> {
    let limit = limit_solution(theta0, e0)?;
    if eps_list.is_empty() || eps_list.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::domain("epsilon ladder must be a nonempty list of positive values"));
    }

    let solved: Vec<(f64, Result<ConicalField>)> = eps_list
        .par_iter()
        .map(|&eps| {
            let field = GasParameters::new(eps, e0).and_then(|g| solve_direct(theta0, &g, opts, angle_tol)).map(|s| s.field);
            (eps, field)
        })
        .collect();
    let mut fields = Vec::new();
    let mut failures = Vec::new();
    for (eps, r) in solved {
        match r {
            Ok(f) => fields.push((eps, f)),
            Err(e) => failures.push((eps, e.to_string())),
        }
    }

    let mut series = Vec::new();
    for &family in &Family::ALL {
        for psi in psi_suite {
            let psi = if family.is_tangential() { psi.as_tangential_field() } else { psi.clone() };
            let lim = pair_measure(MeasureSource::Limit(&limit), family, &psi)?;
            let abs_psi = psi.with_abs();
            let mut scale = abs_limit_pairing(&limit, family, &abs_psi)?;
            if scale == 0.0 {
                scale = abs_psi_area(theta0, &abs_psi);
            }
            let entries = fields
                .par_iter()
                .map(|(eps, field)| {
                    let value = pair_measure(MeasureSource::Field(field), family, &psi)?;
                    Ok(GapEntry { epsilon: *eps, value, limit: lim, gap: (value - lim).abs() })
                })
                .collect::<Result<Vec<_>>>()?;
            series.push(GapSeries { family, test_function: psi.label.clone(), scale, entries });
        }
    }

    let velocity_ratio = fields
        .iter()
        .map(|(eps, f)| VelocityRatioEntry {
            epsilon: *eps,
            max_ratio: max_velocity_ratio(f),
            bound: velocity_ratio_bound(f.beta, &f.params),
            bound_e0: velocity_ratio_bound_e0(f.beta, &f.params),
        })
        .collect();

    Ok(ConvergenceReport { theta0, e0, series, velocity_ratio, failures })
}

/// `⟨|m|, |ψ|⟩` for the limit measure.
fn abs_limit_pairing(limit: &RadonConeSolution, family: Family, abs_psi: &TestFunction) -> Result<f64> {
    let phi_rule = GaussLegendre::new(PHI_ORDER);
    let rule = GaussLegendre::new(LAYER_ORDER);
    if family == Family::Pressure {
        return Ok(0.0);
    }
    let background = rule.integrate_adaptive(limit.theta0, PI, CAP_TOL, |t| {
        let (s, c) = t.sin_cos();
        abs_psi.azimuthal_integral(t, &phi_rule) * family.density(1.0, -s, c, 0.0, limit.e0).abs() * s
    });
    let dirac = limit.dirac_weight(family).abs() * limit.theta0.sin() * abs_psi.azimuthal_integral(limit.theta0, &phi_rule);
    Ok(background + dirac)
}

/// `∫_Ω |ψ| dA`.
fn abs_psi_area(theta0: f64, abs_psi: &TestFunction) -> f64 {
    let phi_rule = GaussLegendre::new(PHI_ORDER);
    let rule = GaussLegendre::new(LAYER_ORDER);
    rule.integrate_adaptive(theta0, PI, CAP_TOL, |t| abs_psi.azimuthal_integral(t, &phi_rule) * t.sin())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gas::derive_parameters;
    use crate::taylor_maccoll::integrate_inverse;
    use approx::assert_relative_eq;

    fn field(eps: f64, beta_deg: f64) -> ConicalField {
        let g = derive_parameters(eps, 1.0).unwrap();
        integrate_inverse(beta_deg.to_radians(), &g, &IntegratorOptions::default()).unwrap()
    }

    #[test]
    fn limit_weights() {
        let l = limit_solution(45f64.to_radians(), 1.0).unwrap();
        assert_relative_eq!(l.mass_weight, 0.5, max_relative = 1e-15);
        assert_relative_eq!(l.surface_pressure, 0.5, max_relative = 1e-15);
        let l = limit_solution(30f64.to_radians(), 2.0).unwrap();
        assert_relative_eq!(l.surface_pressure, 0.25, max_relative = 1e-15);
        assert_relative_eq!(l.n_r_weight, l.n_a_weight * 30f64.to_radians().cos(), max_relative = 1e-15);
        assert_relative_eq!(l.n_e_weight, l.n_a_weight * 2.0, max_relative = 1e-15);
        let tiny = limit_solution(1e-9, 1.0).unwrap();
        assert!(tiny.mass_weight < 1e-9 && tiny.n_a_weight < 1e-9 && tiny.surface_pressure < 1e-17);
        assert!(limit_solution(FRAC_PI_2, 1.0).is_err());
        assert!(limit_solution(0.0, 1.0).is_err());
    }

    #[test]
    fn limit_density_against_one() {
        let t0 = 45f64.to_radians();
        let l = limit_solution(t0, 1.0).unwrap();
        let got = pair_measure(MeasureSource::Limit(&l), Family::Density, &TestFunction::constant(1.0)).unwrap();
        let want = TAU * (1.0 + t0.cos()) + PI * t0.tan() * t0.sin();
        assert_relative_eq!(got, want, max_relative = 1e-13);
    }

    #[test]
    fn limit_density_against_cos_theta_vanishes() {
        let l = limit_solution(0.4, 1.0).unwrap();
        let got = pair_measure(MeasureSource::Limit(&l), Family::Density, &TestFunction::cos_theta()).unwrap();
        assert!(got.abs() < 1e-13, "{got}");
    }

    #[test]
    fn mass_flux_identity() {
        for (eps, beta) in [(0.01, 30.0), (0.05, 20.0), (1e-3, 30.0)] {
            let f = field(eps, beta);
            let want = PI * beta.to_radians().sin().powi(2);
            assert_relative_eq!(mass_flux(&f), want, max_relative = 1e-6);
        }
    }

    #[test]
    fn doubled_density_doubles_flux() {
        let f = field(0.01, 30.0);
        let want = TAU * 30f64.to_radians().sin().powi(2);
        assert_relative_eq!(mass_flux(&f.with_density_scaled(2.0)), want, max_relative = 1e-6);
    }

    #[test]
    fn radial_mass_against_one_uses_flux_identity() {
        let f = field(0.01, 30.0);
        let got = pair_measure(MeasureSource::Field(&f), Family::RadialMass, &TestFunction::constant(1.0)).unwrap();
        // upstream cap: 2π∫_β^π cosθ sinθ dθ = -π sin²β
        let sb2 = f.beta.sin().powi(2);
        assert!((got - (-PI * sb2 + PI * sb2)).abs() < 1e-6, "{got}");
    }

    #[test]
    fn zero_test_function_pairs_to_zero() {
        let f = field(0.02, 25.0);
        let l = limit_solution(0.4, 1.0).unwrap();
        let zero = TestFunction::constant(0.0);
        for fam in Family::ALL {
            let psi = if fam.is_tangential() { zero.as_tangential_field() } else { zero.clone() };
            assert_eq!(pair_measure(MeasureSource::Field(&f), fam, &psi).unwrap(), 0.0);
            assert_eq!(pair_measure(MeasureSource::Limit(&l), fam, &psi).unwrap(), 0.0);
        }
    }

    #[test]
    fn kinds_must_match() {
        let l = limit_solution(0.4, 1.0).unwrap();
        let one = TestFunction::constant(1.0);
        let err = pair_measure(MeasureSource::Limit(&l), Family::TangentialMass, &one).unwrap_err();
        assert!(matches!(err, Error::KindMismatch(_)));
        let err = pair_measure(MeasureSource::Limit(&l), Family::Density, &one.as_tangential_field()).unwrap_err();
        assert!(matches!(err, Error::KindMismatch(_)));
    }

    #[test]
    fn odd_test_function_kills_every_family() {
        let f = field(0.02, 25.0);
        let l = limit_solution(0.4, 1.0).unwrap();
        let odd = TestFunction::odd_azimuthal();
        for fam in Family::ALL {
            let psi = if fam.is_tangential() { odd.as_tangential_field() } else { odd.clone() };
            assert!(pair_measure(MeasureSource::Field(&f), fam, &psi).unwrap().abs() < 1e-12);
            assert!(pair_measure(MeasureSource::Limit(&l), fam, &psi).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn azimuthal_quadrature_matches_closed_form() {
        let f = field(0.02, 25.0);
        for psi in [TestFunction::constant(1.0), TestFunction::cos_theta(), TestFunction::bump(0.4, 0.25)] {
            let a = pair_measure(MeasureSource::Field(&f), Family::Density, &psi).unwrap();
            let b = pair_measure(MeasureSource::Field(&f), Family::Density, &psi.without_symmetry()).unwrap();
            assert!((a - b).abs() < 1e-12, "{}: {a} vs {b}", psi.label);
        }
    }

    #[test]
    fn velocity_ratio_bounded_by_shock_value() {
        let f = field(0.02, 25.0);
        let bound = velocity_ratio_bound(f.beta, &f.params);
        let s = f.shock_state();
        assert_relative_eq!(bound, (s.u / s.w).abs(), max_relative = 1e-13);
        assert!(max_velocity_ratio(&f) <= bound * (1.0 + 1e-12));
        assert!(velocity_ratio_bound_e0(f.beta, &f.params) > bound);
    }

    #[test]
    fn default_ladder_converges_for_density() {
        let t0 = 20f64.to_radians();
        let suite = TestFunction::default_suite(t0);
        let r = convergence_report(t0, &[0.08, 0.04, 0.02, 0.01], &suite, 1.0, &IntegratorOptions::default(), 1e-10)
            .unwrap();
        assert!(r.failures.is_empty());
        for psi in &suite {
            let s = r.series_for(Family::Density, &psi.label).unwrap();
            assert!(s.is_decreasing(MONOTONE_SLACK), "{}: {:?}", psi.label, s.relative_gaps());
            assert!(s.final_relative_gap().unwrap() < 0.05);
        }
        assert!(r.velocity_ratio.iter().all(VelocityRatioEntry::holds));
    }

    #[test]
    fn narrow_bump_density_gap_changes_sign() {
        // the layer's mass defect (first order in ε) and the bump's curvature
        // across the layer (second order) have opposite signs
        let t0 = 20f64.to_radians();
        let suite = [TestFunction::bump(t0, 0.05)];
        let r = convergence_report(t0, &[0.08, 0.01], &suite, 1.0, &IntegratorOptions::default(), 1e-10).unwrap();
        let s = r.series_for(Family::Density, &suite[0].label).unwrap();
        let signed: Vec<f64> = s.entries.iter().map(|e| e.value - e.limit).collect();
        assert!(signed[0] < 0.0 && signed[1] > 0.0, "{signed:?}");
    }

    #[test]
    fn family_labels_round_trip() {
        for f in Family::ALL {
            assert_eq!(Family::from_label(f.label()), Some(f));
        }
        assert_eq!(Family::from_label("nope"), None);
    }
}
