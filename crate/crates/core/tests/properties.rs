use std::f64::consts::{FRAC_PI_2, PI};

use conical_shock::measures::{mass_flux, max_velocity_ratio, pair_measure, velocity_ratio_bound, Family, MeasureSource, TestFunction};
use conical_shock::*;
use proptest::prelude::*;

fn opts() -> IntegratorOptions {
    IntegratorOptions::default()
}

/// `(ε, E0, β)` with a supersonic normal Mach number and some room above the Mach angle.
fn shock_inputs() -> impl Strategy<Value = (f64, f64, f64)> {
    (0.005f64..0.1, 0.6f64..2.0, 0.0f64..1.0).prop_map(|(eps, e0, t)| {
        let g = derive_parameters(eps, e0).unwrap();
        let lo = (1.0 / g.m0).asin() + 0.05;
        let hi = 70f64.to_radians();
        (eps, e0, lo + t * (hi - lo))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn upstream_state_has_free_stream_pressure(eps in 1e-3f64..2.0, e0 in 0.51f64..5.0) {
        let g = derive_parameters(eps, e0).unwrap();
        let p = pressure(1.0, 1.0, &g).unwrap();
        prop_assert!((p - g.p0).abs() <= 1e-14 * g.p0);
        prop_assert!((g.m0 * g.m0 * eps * g.e_prime - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sound_speed_independent_of_density(eps in 1e-3f64..1.0, rho in 0.1f64..50.0, u in -0.5f64..0.0, w in 0.3f64..1.0) {
        let g = derive_parameters(eps, 1.0).unwrap();
        let a = FlowState::new(0.5, rho, u, w, &g).unwrap();
        let b = FlowState::new(0.5, 2.0 * rho, u, w, &g).unwrap();
        prop_assert!((a.c - b.c).abs() <= 1e-14 * a.c);
    }

    #[test]
    fn jump_conditions_close((eps, e0, beta) in shock_inputs()) {
        let g = derive_parameters(eps, e0).unwrap();
        let post = shock_jump(beta, &g).unwrap();
        let r = verify_rankine_hugoniot(&post, &g);
        prop_assert!(r.max_abs() < 1e-12, "{:?}", r);
        prop_assert!(r.entropy_satisfied);
        prop_assert!(post.state.rho > 1.0);
        prop_assert!(post.state.p > g.p0);
        prop_assert!(post.mn_sq < 1.0);
        prop_assert!(post.state.q_perp > 0.0);
    }

    #[test]
    fn inverse_problem_invariants((eps, e0, beta) in shock_inputs()) {
        let g = derive_parameters(eps, e0).unwrap();
        let f = integrate_inverse(beta, &g, &opts()).unwrap();
        prop_assert!(f.theta_cone < beta && f.theta_cone > 0.0);
        prop_assert!(beta - f.theta_cone <= a_priori_gap_bound(f.theta_cone, beta, &g));
        prop_assert!(f.diagnostics.max_entropy_drift < 1e-8);
        prop_assert!(f.diagnostics.terminal_u_residual < 1e-10);
        let m = monotonicity_report(&f);
        prop_assert!(m.is_clean(), "{:?}", m);
        let want = PI * beta.sin().powi(2);
        prop_assert!((mass_flux(&f) - want).abs() < 1e-6 * want);
        prop_assert!(max_velocity_ratio(&f) <= velocity_ratio_bound(beta, &g) * (1.0 + 1e-9));
        // surface pressure exceeds the pressure right behind the shock
        prop_assert!(f.surface_pressure >= f.shock_state().p);
    }

    #[test]
    fn cone_angle_map_stable_under_tolerance((eps, e0, beta) in shock_inputs()) {
        let g = derive_parameters(eps, e0).unwrap();
        let loose = cone_angle_map(beta, &g, &opts().with_tolerances(1e-8, 1e-10)).unwrap();
        let tight = cone_angle_map(beta, &g, &opts().with_tolerances(1e-10, 1e-12)).unwrap();
        prop_assert!((loose - tight).abs() < 1e-7);
    }

    #[test]
    fn epsilon_star_bounded(b1 in 0.05f64..1.0, frac in 0.01f64..0.99, e_prime in 0.01f64..10.0) {
        let b2 = b1 + frac * (FRAC_PI_2 - b1);
        let e = epsilon_star(b1, b2, e_prime).unwrap();
        prop_assert!(e > 0.0);
        prop_assert!(e <= b1.sin().powi(2) / e_prime);
    }

    #[test]
    fn chaplygin_angle_is_characteristic(m0 in 1.001f64..50.0) {
        let b = chaplygin_shock_angle(m0).unwrap();
        prop_assert!((m0 * b.sin() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn pairing_is_linear_in_test_function(scale in -5.0f64..5.0) {
        let g = derive_parameters(0.02, 1.0).unwrap();
        let f = integrate_inverse(0.5, &g, &opts()).unwrap();
        let base = TestFunction::cos_theta();
        let scaled = TestFunction::new("scaled", true, true, move |t, _| scale * t.cos());
        for fam in [Family::Density, Family::RadialMomentum, Family::Pressure] {
            let a = pair_measure(MeasureSource::Field(&f), fam, &base).unwrap();
            let b = pair_measure(MeasureSource::Field(&f), fam, &scaled).unwrap();
            prop_assert!((b - scale * a).abs() <= 1e-12 * (1.0 + a.abs() * scale.abs()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn wider_cone_gets_wider_shock(eps in 0.005f64..0.05, t0 in 8f64..35.0, dt in 0.5f64..5.0) {
        let g = derive_parameters(eps, 1.0).unwrap();
        let a = solve_direct(t0.to_radians(), &g, &opts(), 1e-9).unwrap();
        let b = solve_direct((t0 + dt).to_radians(), &g, &opts(), 1e-9).unwrap();
        prop_assert!(b.beta > a.beta);
        prop_assert!(a.beta > a.theta0);
    }
}
