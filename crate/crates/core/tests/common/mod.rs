//! Plain composite Simpson quadrature, kept independent of the library's
//! adaptive integrators so it can serve as an oracle.
#![allow(dead_code)]

/// Composite Simpson on [a, b] with `n` (even) intervals.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let n = n + n % 2;
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

/// ∫_a^∞ f(r) dr via r = a + scale·t/(1 − t); `scale` should match the decay length.
pub fn simpson_semi_infinite(f: impl Fn(f64) -> f64, a: f64, scale: f64, n: usize) -> f64 {
    let g = |t: f64| {
        if t >= 1.0 {
            return 0.0;
        }
        let u = 1.0 - t;
        let v = f(a + scale * t / u) * scale / (u * u);
        if v.is_finite() {
            v
        } else {
            0.0
        }
    };
    simpson(g, 0.0, 1.0, n)
}

/// Relative difference |a − b| / |b|.
pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

use std::f64::consts::PI;

use isac_thz_core::{Deployment, SystemParams};

/// 20 parameter points spread over densities, beam counts, K and r1.
pub fn parameter_grid() -> Vec<(SystemParams, Deployment, f64)> {
    let lambda_b = [1e-3, 2e-3, 5e-3, 1e-2];
    let lambda_s = [5e-3, 1.5e-2, 3e-2];
    let n_b = [32, 128, 512];
    let k = [0.001, 0.004, 0.02, 0.05, 0.0005];
    let r1 = [5.0, 10.0, 20.0, 40.0, 80.0, 150.0, 3.0];
    (0..20)
        .map(|i| {
            let sys = SystemParams { k: k[i % 5], ..SystemParams::default() };
            let deploy = Deployment {
                lambda_b: lambda_b[i % 4],
                lambda_s: lambda_s[i % 3],
                n_b: n_b[(i / 3) % 3],
                n_m: n_b[(i / 2) % 3],
                ..Deployment::default()
            };
            (sys, deploy, r1[i % 7])
        })
        .collect()
}

const ORACLE_POINTS: usize = 200_000;

/// ∫_{r1}^∞ 2πλ_B r p_I(r) A r⁻² e^(−Kr) dr with p_I built from scratch.
pub fn mean_interference_oracle(sys: &SystemParams, d: &Deployment, a: f64, r1: f64, p_ms: f64) -> f64 {
    let lam = d.lambda_s + d.lambda_m + d.lambda_b;
    let sweep = d.n_b as f64 * sys.t_ssb / sys.tau;
    let w_s = (sweep + (1.0 - sweep) * p_ms) / (d.n_b as f64 * d.n_m as f64);
    let decay = 2.0 * lam * d.r_b + sys.k;
    simpson_semi_infinite(
        |r| {
            let p_i = w_s * (-lam * (r - 2.0 * d.r_b) * 2.0 * d.r_b).exp();
            2.0 * PI * d.lambda_b * r * p_i * a * (-sys.k * r).exp() / (r * r)
        },
        r1,
        r1.min(1.0 / decay),
        ORACLE_POINTS,
    )
}

/// Absorption-noise part of the mean noise, ∫_{r1}^∞ 2πλ_B r (K/(n_b n_m)) A r⁻² e^(−Kr) dr.
pub fn absorption_noise_oracle(sys: &SystemParams, d: &Deployment, a: f64, r1: f64) -> f64 {
    let share = sys.k / (d.n_b as f64 * d.n_m as f64);
    simpson_semi_infinite(
        |r| 2.0 * PI * d.lambda_b * r * share * a * (-sys.k * r).exp() / (r * r),
        r1,
        r1.min(1.0 / sys.k),
        ORACLE_POINTS,
    )
}

/// ∫_{2r_b}^∞ p_B(r)·2πλ_B r e^(−λ_B π r²) dr.
pub fn closest_blockage_oracle(d: &Deployment) -> f64 {
    let lb = d.lambda_b;
    let w1 = (d.lambda_m + d.lambda_s) * 2.0 * d.r_b;
    simpson_semi_infinite(
        |r| -(-w1 * (r - 2.0 * d.r_b)).exp_m1() * 2.0 * PI * lb * r * (-lb * PI * r * r).exp(),
        2.0 * d.r_b,
        0.5 / (lb * PI).sqrt(),
        ORACLE_POINTS,
    )
}

/// Thermal noise −174 dBm/Hz over the noise bandwidth, in W.
pub fn thermal_noise(sys: &SystemParams) -> f64 {
    10f64.powf(-20.4) * sys.noise_bandwidth
}
