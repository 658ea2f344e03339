//! THz link budget, noise, and per-interferer probabilities.

use std::f64::consts::PI;

use crate::config::{Deployment, SystemParams};
use crate::error::{domain, Result};
use crate::specfun::exp_integral_e1;
use crate::SPEED_OF_LIGHT;

/// Composite path-loss constant and beam geometry of one link.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    /// A = P_T G_b G_m c² / (16 π² f_c²), in W·m².
    pub a: f64,
    pub k: f64,
    pub g_b: f64,
    pub g_m: f64,
    pub theta_b: f64,
    pub theta_m: f64,
}

impl LinkBudget {
    pub fn new(sys: &SystemParams, deploy: &Deployment) -> Result<Self> {
        let theta_b = deploy.theta_b();
        let theta_m = deploy.theta_m();
        let g_b = antenna_gain(theta_b)?;
        let g_m = antenna_gain(theta_m)?;
        let a = sys.p_t * g_b * g_m * SPEED_OF_LIGHT.powi(2) / (16.0 * PI * PI * sys.f_c * sys.f_c);
        Ok(Self { a, k: sys.k, g_b, g_m, theta_b, theta_m })
    }

    /// A budget with an explicit constant A (gains derived from the beam widths).
    pub fn with_constant(a: f64, k: f64, theta_b: f64, theta_m: f64) -> Result<Self> {
        if !(a >= 0.0) || !(k >= 0.0) {
            return Err(domain("A and K must be >= 0"));
        }
        Ok(Self { a, k, g_b: antenna_gain(theta_b)?, g_m: antenna_gain(theta_m)?, theta_b, theta_m })
    }

    /// Share of received power re-radiated as absorption noise, K/(n_b n_m).
    pub fn absorption_share(&self) -> f64 {
        self.k * self.theta_b * self.theta_m / (4.0 * PI * PI)
    }
}

/// Ideal cone gain 2/(1 − cos(θ/2)).
pub fn antenna_gain(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(domain(format!("beam width must lie in (0, pi), got {theta}")));
    }
    Ok(2.0 / (1.0 - (theta / 2.0).cos()))
}

/// A r⁻² e^(−K r).
pub fn received_power(budget: &LinkBudget, r: f64) -> f64 {
    budget.a * (-budget.k * r).exp() / (r * r)
}

/// n_b T_SSB / τ: fraction of each period spent beam sweeping.
pub fn beam_sweep_fraction(deploy: &Deployment, sys: &SystemParams) -> f64 {
    deploy.n_b as f64 * sys.t_ssb / sys.tau
}

/// w_s: product of the phase and orientation factors of the interference probability.
pub fn interference_weight(deploy: &Deployment, sys: &SystemParams, p_ms: f64) -> f64 {
    let sweep = beam_sweep_fraction(deploy, sys);
    (sweep + (1.0 - sweep) * p_ms) * deploy.theta_b() * deploy.theta_m() / (4.0 * PI * PI)
}

/// Probability that an interfering link of length r is not blocked.
pub fn interferer_unblocked(deploy: &Deployment, r: f64) -> f64 {
    (-deploy.lambda_total() * (r - 2.0 * deploy.r_b) * 2.0 * deploy.r_b).exp()
}

pub fn interference_probability(deploy: &Deployment, sys: &SystemParams, r: f64, p_ms: f64) -> Result<f64> {
    if !(r >= 2.0 * deploy.r_b) {
        return Err(domain(format!("interferer distance {r} is below 2 r_b")));
    }
    if beam_sweep_fraction(deploy, sys) > 1.0 {
        return Err(domain("n_b * t_ssb exceeds tau"));
    }
    if !(0.0..=1.0).contains(&p_ms) {
        return Err(domain(format!("p_ms must lie in [0, 1], got {p_ms}")));
    }
    Ok(interference_weight(deploy, sys, p_ms) * interferer_unblocked(deploy, r))
}

/// Mean interference from BSs beyond r1.
pub fn expected_interference(
    budget: &LinkBudget,
    deploy: &Deployment,
    sys: &SystemParams,
    r1: f64,
    p_ms: f64,
) -> Result<f64> {
    interference_probability(deploy, sys, r1, p_ms)?;
    let w = interference_weight(deploy, sys, p_ms);
    if deploy.lambda_b == 0.0 || w == 0.0 || budget.a == 0.0 {
        return Ok(0.0);
    }
    let lam = deploy.lambda_total();
    let rb = deploy.r_b;
    let e1 = exp_integral_e1((2.0 * lam * rb + budget.k) * r1)?;
    Ok(2.0 * PI * deploy.lambda_b * w * (4.0 * lam * rb * rb).exp() * budget.a * e1)
}

/// Mean noise: thermal plus absorption noise from BSs beyond r1.
pub fn expected_noise(budget: &LinkBudget, deploy: &Deployment, sys: &SystemParams, r1: f64) -> Result<f64> {
    if !(r1 > 0.0) {
        return Err(domain(format!("r1 must be > 0, got {r1}")));
    }
    let thermal = sys.thermal_noise_power();
    if budget.k == 0.0 || deploy.lambda_b == 0.0 {
        return Ok(thermal);
    }
    Ok(thermal + 2.0 * PI * deploy.lambda_b * budget.a * budget.absorption_share() * exp_integral_e1(budget.k * r1)?)
}

/// Thermal noise plus the serving BS's own absorption noise.
pub fn effective_noise(budget: &LinkBudget, sys: &SystemParams, r1: f64) -> f64 {
    sys.thermal_noise_power() + budget.absorption_share() * received_power(budget, r1)
}
