//! Beam-misalignment probability and its constituents.

use std::f64::consts::PI;

use crate::config::Deployment;
use crate::error::{domain, Error, Result};
use crate::sensing::SensingAbility;
use crate::specfun::{erfcx, gk, QuadratureSpec};

/// Constituents of the misalignment probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisalignmentBreakdown {
    /// Imperfect-sensing term.
    pub p_err: f64,
    /// Both nearest BSs blocked (association timeout).
    pub p_to: f64,
    /// min(p_err + p_to, 1).
    pub p_ms: f64,
    /// Beam-switch density n_b √λ_B / π (1/m).
    pub mu_g: f64,
    pub w1: f64,
    pub w2: f64,
}

fn require_bs(deploy: &Deployment) -> Result<()> {
    if !(deploy.lambda_b > 0.0) {
        return Err(domain("misalignment analysis needs lambda_b > 0"));
    }
    Ok(())
}

pub fn mu_g(deploy: &Deployment) -> f64 {
    deploy.n_b as f64 * deploy.lambda_b.sqrt() / PI
}

/// (w₁, w₂) of the closest-blockage closed form.
pub fn blockage_shape(deploy: &Deployment) -> (f64, f64) {
    let w1 = deploy.lambda_obstacle() * 2.0 * deploy.r_b;
    let s = (deploy.lambda_b * PI).sqrt();
    (w1, 2.0 * deploy.r_b * s + w1 / (2.0 * s))
}

/// Probability that a serving link of length r is blocked by an MT or blocker.
pub fn blockage_probability(deploy: &Deployment, r: f64) -> Result<f64> {
    if !(r >= 2.0 * deploy.r_b) {
        return Err(domain(format!("link length {r} is below 2 r_b")));
    }
    Ok(link_blocked(deploy, r))
}

fn link_blocked(deploy: &Deployment, r: f64) -> f64 {
    -(-deploy.lambda_obstacle() * (r - 2.0 * deploy.r_b) * 2.0 * deploy.r_b).exp_m1()
}

/// Probability that both of the two nearest BSs are blocked, by nested quadrature.
pub fn timeout_probability(deploy: &Deployment) -> Result<f64> {
    timeout_probability_with(deploy, &QuadratureSpec::default().with_tolerances(1e-14, 1e-10))
}

pub fn timeout_probability_with(deploy: &Deployment, spec: &QuadratureSpec) -> Result<f64> {
    require_bs(deploy)?;
    if deploy.lambda_obstacle() == 0.0 {
        return Ok(0.0);
    }
    let lb = deploy.lambda_b;
    let scale = 1.0 / (lb * PI).sqrt();
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol / 10.0,
        rel_tol: spec.rel_tol / 10.0,
        initial_panel: scale / 4.0,
        ..*spec
    };
    let outer_spec = QuadratureSpec { initial_panel: scale / 4.0, ..*spec };
    let mut inner_ok = true;
    let g = |r1: f64, ok: &mut bool| -> f64 {
        let (v, _, conv) = gk::semi_infinite::<1, _>(
            |r2| [link_blocked(deploy, r2) * (-lb * PI * r2 * r2).exp() * r2],
            r1,
            &inner_spec,
        );
        *ok &= conv;
        v[0]
    };
    let (v, err, ok) = gk::semi_infinite::<1, _>(
        |r1| [r1 * link_blocked(deploy, r1) * g(r1, &mut inner_ok)],
        2.0 * deploy.r_b,
        &outer_spec,
    );
    let factor = (2.0 * lb * PI).powi(2);
    if !(ok && inner_ok) {
        return Err(Error::NonConvergence { partial: factor * v[0], bound: factor * err });
    }
    Ok((factor * v[0]).clamp(0.0, 1.0))
}

/// Probability that the sensed displacement misses the beam switch.
pub fn speed_underestimate_probability(deploy: &Deployment, ability: &SensingAbility, tau: f64) -> f64 {
    let mu = mu_g(deploy);
    let sensed = ((deploy.v - ability.delta_v) * tau - ability.delta_db).max(0.0);
    ((-mu * sensed).exp() - (-mu * deploy.v * tau).exp()).max(0.0)
}

/// Blockage probability of the nearest BS, ∫_{2r_B}^∞ p_B(r) f(r) dr, closed form.
///
/// After completing the square this reduces to
/// (w₁/(2√λ_B))·e^(−4πλ_B r_B²)·erfcx(w₂).
pub fn expected_closest_blockage(deploy: &Deployment) -> Result<f64> {
    require_bs(deploy)?;
    let (w1, w2) = blockage_shape(deploy);
    if w1 == 0.0 {
        return Ok(0.0);
    }
    let lb = deploy.lambda_b;
    let v = w1 / (2.0 * lb.sqrt()) * (-4.0 * PI * lb * deploy.r_b * deploy.r_b).exp() * erfcx(w2);
    Ok(v.clamp(0.0, 1.0))
}

/// The closed form as printed in the source analysis,
/// 1 − e^(2r_B w₁ + w₁²/(4λ_Bπ))[e^(−w₂²) − (w₁/(2√λ_B)) erfc(w₂)].
///
/// It also counts the nearest-BS mass below 2r_B (probability
/// 1 − e^(−4πλ_B r_B²)) as blocked; kept for comparison only.
pub fn closest_blockage_including_overlap(deploy: &Deployment) -> Result<f64> {
    require_bs(deploy)?;
    let (w1, w2) = blockage_shape(deploy);
    let lb = deploy.lambda_b;
    let pre = 2.0 * deploy.r_b * w1 + w1 * w1 / (4.0 * lb * PI);
    // e^{pre}·e^{-w2²} and e^{pre}·erfc(w2), each combined in the exponent
    let first = (pre - w2 * w2).exp();
    let second = w1 / (2.0 * lb.sqrt()) * (pre - w2 * w2).exp() * erfcx(w2);
    Ok(1.0 - (first - second))
}

/// Quadrature of ∫_{2r_B}^∞ p_B(r)·2πλ_B r e^(−λ_B π r²) dr.
pub fn closest_blockage_quadrature(deploy: &Deployment, spec: &QuadratureSpec) -> Result<f64> {
    require_bs(deploy)?;
    let lb = deploy.lambda_b;
    let spec = QuadratureSpec { initial_panel: 0.25 / (lb * PI).sqrt(), ..*spec };
    crate::specfun::integrate_semi_infinite(
        |r| link_blocked(deploy, r) * 2.0 * PI * lb * r * (-lb * PI * r * r).exp(),
        2.0 * deploy.r_b,
        &spec,
    )
}

/// Misalignment probability for a sensing ability.
pub fn beam_misalignment(deploy: &Deployment, ability: &SensingAbility, tau: f64) -> Result<MisalignmentBreakdown> {
    let p_to = timeout_probability(deploy)?;
    beam_misalignment_given_timeout(deploy, ability, tau, p_to)
}

/// As [`beam_misalignment`] with a precomputed timeout probability.
pub fn beam_misalignment_given_timeout(
    deploy: &Deployment,
    ability: &SensingAbility,
    tau: f64,
    p_to: f64,
) -> Result<MisalignmentBreakdown> {
    require_bs(deploy)?;
    let p_ve = speed_underestimate_probability(deploy, ability, tau);
    let p_err = (p_ve * (1.0 - expected_closest_blockage(deploy)?)).clamp(0.0, 1.0);
    let (w1, w2) = blockage_shape(deploy);
    Ok(MisalignmentBreakdown { p_err, p_to, p_ms: (p_err + p_to).min(1.0), mu_g: mu_g(deploy), w1, w2 })
}
