//! Behaviour of the coverage integral in limits and along parameter sweeps.

mod common;

use std::f64::consts::PI;

use common::{rel, simpson_semi_infinite};
use isac_thz_core::channel::{effective_noise, received_power, LinkBudget};
use isac_thz_core::coverage::{
    coverage_given_misalignment, coverage_sweep, db_to_linear, default_outer_spec, CoverageQuery, LowerBoundMode,
    ShotNoiseField,
};
use isac_thz_core::{Config, Deployment, Scheme, SystemParams};

fn defaults() -> (SystemParams, Deployment, LinkBudget) {
    let sys = SystemParams::default();
    let d = Deployment::default();
    let b = LinkBudget::new(&sys, &d).unwrap();
    (sys, d, b)
}

/// f_r and f_i evaluated from their defining integrals at a signed s.
fn defining_parts(c: f64, k: f64, lower: f64, s: f64) -> (f64, f64) {
    let phase = |r: f64| 2.0 * PI * s * c * (-k * r).exp() / (r * r);
    let re = simpson_semi_infinite(|r| r * (1.0 - phase(r).cos()), lower, lower, 400_000);
    let im = simpson_semi_infinite(|r| r * phase(r).sin(), lower, lower, 400_000);
    (re, im)
}

#[test]
fn shot_noise_parts_have_even_and_odd_parity() {
    let (_, d, b) = defaults();
    let lower = 20.0;
    let field = ShotNoiseField::new(&b, &d, lower).unwrap();
    let c = b.a * b.absorption_share();
    for s in [1e8, 1e9, 1e10, 1e11] {
        // with w_s = 0 only the absorption basis remains
        let (f_r, f_i) = field.parts(s, 0.0).unwrap();
        let (neg_r, neg_i) = defining_parts(c, b.k, lower, -s);
        assert!(rel(neg_r, f_r) < 1e-6, "s {s}: f_r(-s) {neg_r} vs f_r(s) {f_r}");
        assert!(rel(neg_i, -f_i) < 1e-6, "s {s}: f_i(-s) {neg_i} vs -f_i(s) {f_i}");
    }
}

#[test]
fn two_sided_integrand_folds_onto_the_sine_form() {
    let (sys, d, b) = defaults();
    let r1 = 20.0;
    let threshold = db_to_linear(5.0);
    let field = ShotNoiseField::new(&b, &d, 2.0 * d.r_b).unwrap();
    let w_s = isac_thz_core::channel::interference_weight(&d, &sys, 0.1);
    let p_eff = effective_noise(&b, &sys, r1);
    let gap = 2.0 * PI * received_power(&b, r1) / threshold;
    let lam = d.lambda_b;
    // complex integrand env·(e^{iφ₂} − e^{iφ₁})/(2πi s), with the negative
    // half rebuilt from f_r(−s) = f_r(s), f_i(−s) = −f_i(s)
    let half = |s: f64, sign: f64| -> (f64, f64) {
        let (f_r, f_i) = field.parts(s, w_s).unwrap();
        let f_i = sign * f_i;
        let ss = sign * s;
        let env = (-2.0 * PI * lam * f_r).exp();
        let p1 = -2.0 * PI * lam * f_i - 2.0 * PI * ss * p_eff;
        let p2 = p1 + gap * ss;
        let (re, im) = (p2.cos() - p1.cos(), p2.sin() - p1.sin());
        // divide (re + i im) by 2πi·ss
        (env * im / (2.0 * PI * ss), -env * re / (2.0 * PI * ss))
    };
    for s in [1e2, 1e4, 1e6, 1e8, 1e9, 3e9, 1e10, 1e11] {
        let (pr, pi) = half(s, 1.0);
        let (nr, ni) = half(s, -1.0);
        let (f_r, f_i) = field.parts(s, w_s).unwrap();
        let env = (-2.0 * PI * lam * f_r).exp();
        let p1 = -2.0 * PI * lam * f_i - 2.0 * PI * s * p_eff;
        let folded = env * ((p1 + gap * s).sin() - p1.sin()) / (PI * s);
        assert!((pi + ni).abs() <= 1e-12 * folded.abs().max(1e-300), "imaginary part survives at s {s}");
        assert!((pr + nr - folded).abs() <= 1e-4 * folded.abs().max(1e-16), "s {s}: {} vs {folded}", pr + nr);
    }
}

#[test]
fn noise_only_limit_is_a_step() {
    // negligible interference and absorption: coverage reduces to P_C/T > P_N
    let sys = SystemParams { k: 0.0, t_ssb: 1e-12, ..SystemParams::default() };
    let d = Deployment { lambda_b: 1e-9, n_b: 4096, n_m: 4096, ..Deployment::default() };
    let b = LinkBudget::new(&sys, &d).unwrap();
    let field = ShotNoiseField::new(&b, &d, 2.0 * d.r_b).unwrap();
    for r1 in [10.0, 40.0, 150.0] {
        let snr = received_power(&b, r1) / sys.thermal_noise_power();
        for (factor, expect) in [(0.5, 1.0), (2.0, 0.0), (10.0, 0.0), (0.1, 1.0)] {
            let q = CoverageQuery::new(r1, snr * factor, Scheme::Perfect);
            let p = coverage_given_misalignment(&q, &field, &b, &d, &sys, 0.0).unwrap();
            assert!((p.p_cm - expect).abs() < 1e-6, "r1 {r1}, T/SNR {factor}: {}", p.p_cm);
        }
    }
}

#[test]
fn coverage_does_not_rise_with_threshold() {
    let cfg = Config::default();
    let t_grid: Vec<f64> = (-10..=30).step_by(4).map(f64::from).collect();
    let schemes = [Scheme::Perfect, Scheme::Jsrs, Scheme::FiveG];
    for mode in [LowerBoundMode::Theorem, LowerBoundMode::Derivation] {
        let rows = coverage_sweep(&cfg, &[10.0, 40.0, 120.0], &t_grid, &schemes, mode, &default_outer_spec()).unwrap();
        for s in schemes {
            for r1 in [10.0, 40.0, 120.0] {
                let seq: Vec<f64> = rows
                    .iter()
                    .filter(|r| r.scheme == s && r.r1 == r1)
                    .map(|r| r.result.p_cvp)
                    .collect();
                assert_eq!(seq.len(), t_grid.len());
                for w in seq.windows(2) {
                    assert!(w[1] <= w[0] + 1e-7, "{s} r1 {r1} {mode:?}: {seq:?}");
                }
            }
        }
    }
}

#[test]
fn denser_networks_cover_less_at_fixed_misalignment() {
    let sys = SystemParams::default();
    let mut last = f64::INFINITY;
    for lambda_b in [1e-3, 2e-3, 5e-3, 1e-2, 3e-2] {
        let d = Deployment { lambda_b, n_b: 16, n_m: 16, ..Deployment::default() };
        let b = LinkBudget::new(&sys, &d).unwrap();
        let field = ShotNoiseField::new(&b, &d, 2.0 * d.r_b).unwrap();
        let q = CoverageQuery::new(40.0, db_to_linear(10.0), Scheme::Jsrs);
        let p = coverage_given_misalignment(&q, &field, &b, &d, &sys, 0.1).unwrap().p_cm;
        assert!(p <= last + 1e-7, "lambda_b {lambda_b}: {p} > {last}");
        last = p;
    }
    assert!(last < 0.99);
}

#[test]
fn coverage_factorises_over_misalignment() {
    let (sys, d, b) = defaults();
    let field = ShotNoiseField::new(&b, &d, 2.0 * d.r_b).unwrap();
    let q = CoverageQuery::new(20.0, db_to_linear(5.0), Scheme::Jsrs);
    for p_ms in [0.0, 0.05, 0.3, 0.9] {
        let r = coverage_given_misalignment(&q, &field, &b, &d, &sys, p_ms).unwrap();
        assert!((r.p_cvp - (1.0 - p_ms) * r.p_cm).abs() < 1e-15);
        assert!((0.0..=1.0).contains(&r.p_cm));
    }
}
