//! Randomised invariants of the analytic model.

use std::f64::consts::PI;

use isac_thz_core::channel::{expected_noise, interference_probability, received_power, LinkBudget};
use isac_thz_core::misalignment::{beam_misalignment, expected_closest_blockage, timeout_probability};
use isac_thz_core::pattern::{objective, optimal_allocation, PatternRequirement};
use isac_thz_core::sensing::{a_theta, span_ability, ResourceSpan, SensingAbility};
use isac_thz_core::{parse_config, Config, Deployment, SystemParams};
use proptest::prelude::*;

fn deployment() -> impl Strategy<Value = Deployment> {
    (1e-4f64..2e-2, 0.0f64..2e-2, 0.0f64..5e-2, 0.1f64..1.0, 8u32..1024, 8u32..1024, 1.0f64..60.0).prop_map(
        |(lambda_b, lambda_m, lambda_s, r_b, n_b, n_m, v)| Deployment { lambda_b, lambda_m, lambda_s, r_b, n_b, n_m, v },
    )
}

fn ability(delta_db: f64, delta_v: f64) -> SensingAbility {
    SensingAbility {
        delta_r: delta_db,
        delta_db,
        delta_v,
        d_max: isac_thz_core::sensing::Bound::Unbounded,
        v_max: isac_thz_core::sensing::Bound::Unbounded,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn received_power_decreases(k in 0.0f64..0.1, r in 1.0f64..500.0, dr in 1e-3f64..50.0) {
        let b = LinkBudget::with_constant(1.0, k, 0.1, 0.1).unwrap();
        prop_assert!(received_power(&b, r + dr) < received_power(&b, r));
    }

    #[test]
    fn interference_probability_is_a_decreasing_probability(
        d in deployment(), p_ms in 0.0f64..=1.0, r in 1.0f64..500.0, dr in 0.0f64..100.0
    ) {
        let sys = SystemParams::default();
        prop_assume!(d.n_b as f64 * sys.t_ssb <= sys.tau);
        let r = r.max(2.0 * d.r_b);
        let a = interference_probability(&d, &sys, r, p_ms).unwrap();
        let b = interference_probability(&d, &sys, r + dr, p_ms).unwrap();
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a);
    }

    #[test]
    fn mean_noise_is_at_least_thermal(d in deployment(), k in 0.0f64..0.1, r1 in 1.0f64..200.0) {
        let sys = SystemParams { k, ..SystemParams::default() };
        let b = LinkBudget::new(&sys, &d).unwrap();
        prop_assert!(expected_noise(&b, &d, &sys, r1.max(2.0 * d.r_b)).unwrap() >= sys.thermal_noise_power());
    }

    #[test]
    fn finer_sensing_never_raises_misalignment(
        db in 0.0f64..0.5, dv in 0.0f64..2.0, fdb in 0.0f64..=1.0, fdv in 0.0f64..=1.0
    ) {
        let d = Deployment::default();
        let coarse = beam_misalignment(&d, &ability(db, dv), 20e-3).unwrap();
        let fine = beam_misalignment(&d, &ability(db * fdb, dv * fdv), 20e-3).unwrap();
        prop_assert!(fine.p_ms <= coarse.p_ms + 1e-15);
        prop_assert!((0.0..=1.0).contains(&coarse.p_ms));
    }

    #[test]
    fn objective_is_convex_in_alpha(a in 0.01f64..0.99, b in 0.01f64..0.99, u in 1u32..8, v in 1u32..60) {
        let sys = SystemParams::default();
        let th = 2.0 * PI / 128.0;
        let mid = objective(0.5 * (a + b), u, v, &sys, th).unwrap();
        let chord = 0.5 * (objective(a, u, v, &sys, th).unwrap() + objective(b, u, v, &sys, th).unwrap());
        prop_assert!(mid <= chord * (1.0 + 1e-12));
    }

    #[test]
    fn resolutions_scale_with_span(u in 1u32..6, v in 1u32..6, b_s in 1e7f64..1e9, t_s in 1e-5f64..1e-2, n_b in 8u32..1024) {
        let sys = SystemParams::default();
        let th = 2.0 * PI / n_b as f64;
        let one = span_ability(&ResourceSpan { u, v, b_s, t_s }, &sys, th).unwrap();
        let two = span_ability(&ResourceSpan { u, v, b_s: 2.0 * b_s, t_s: 2.0 * t_s }, &sys, th).unwrap();
        prop_assert!((two.delta_db / one.delta_db - 0.5).abs() < 1e-12);
        prop_assert!((two.delta_v / one.delta_v - 0.5).abs() < 1e-12);
        prop_assert!((one.delta_db / one.delta_r - a_theta(th).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn optimal_ratio_falls_with_beam_width_and_carrier(n_b in 8u32..1000, f_lo in 0.1e12f64..0.5e12, f_hi in 0.5e12f64..1e12) {
        let req = PatternRequirement { d_max_req: 78.1, v_max_req: 5.0, n_rs: 5000 };
        let narrow = 2.0 * PI / (n_b as f64 + 8.0);
        let wide = 2.0 * PI / n_b as f64;
        let sys = SystemParams::default();
        // wider beams mean a larger A_θ and less time-domain allocation
        let a_n = optimal_allocation(&req, &sys, narrow).unwrap();
        let a_w = optimal_allocation(&req, &sys, wide).unwrap();
        prop_assert_eq!((a_n.u, a_n.v), (a_w.u, a_w.v));
        prop_assert!(a_w.alpha_raw < a_n.alpha_raw);
        // fixed spacings: compare the stationary point at two carriers
        let lo = isac_thz_core::pattern::alpha_for_spacings(1, 1, &SystemParams { f_c: f_lo, ..sys }, wide).unwrap();
        let hi = isac_thz_core::pattern::alpha_for_spacings(1, 1, &SystemParams { f_c: f_hi, ..sys }, wide).unwrap();
        prop_assert!(hi < lo);
    }

    #[test]
    fn config_text_round_trips(d in deployment(), n_rs in 2u64..100_000, f_c in 0.2e12f64..0.9e12) {
        let mut cfg = Config::default();
        cfg.deployment = d;
        cfg.system.n_rs = n_rs;
        cfg.system.f_c = f_c;
        cfg.requirement.n_rs = n_rs;
        let back = parse_config(&cfg.to_toml_string(), None).unwrap();
        prop_assert_eq!(back, cfg);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn timeout_is_bounded_by_nearest_blockage(d in deployment()) {
        let p_to = timeout_probability(&d).unwrap();
        let p_b = expected_closest_blockage(&d).unwrap();
        prop_assert!(p_to >= 0.0);
        prop_assert!(p_to <= p_b + 1e-10, "{p_to} > {p_b}");
    }
}
