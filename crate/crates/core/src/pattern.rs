//! Optimal sensing-signal pattern and its brute-force check.

use rayon::prelude::*;

use crate::config::SystemParams;
use crate::error::{invalid, Error, Result};
use crate::sensing::{a_theta, SensingPattern};
use crate::SPEED_OF_LIGHT as C;

/// Detection radius and trackable speed the pattern must support.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatternRequirement {
    pub d_max_req: f64,
    pub v_max_req: f64,
    pub n_rs: u64,
}

impl PatternRequirement {
    pub fn validate(&self) -> Result<()> {
        if !(self.d_max_req > 0.0 && self.d_max_req.is_finite()) {
            return Err(invalid(format!("d_max_req must be > 0, got {}", self.d_max_req)));
        }
        if !(self.v_max_req > 0.0 && self.v_max_req.is_finite()) {
            return Err(invalid(format!("v_max_req must be > 0, got {}", self.v_max_req)));
        }
        if self.n_rs < 2 {
            return Err(invalid(format!("n_rs must be >= 2, got {}", self.n_rs)));
        }
        Ok(())
    }
}

/// Δv·τ + Δd_b for a continuous allocation ratio α.
pub fn objective(alpha: f64, u: u32, v: u32, sys: &SystemParams, theta_b: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) || u < 1 || v < 1 {
        return Err(invalid("objective needs 0 < alpha < 1 and U, V >= 1"));
    }
    let n = sys.n_rs as f64;
    let a = a_theta(theta_b)?;
    Ok(C * sys.tau / (2.0 * sys.f_c * v as f64 * n.powf(alpha) * sys.t_sym)
        + C * a / (2.0 * u as f64 * n.powf(1.0 - alpha) * sys.f_scs))
}

/// Unconstrained stationary point of the objective in α for given spacings.
pub fn alpha_for_spacings(u: u32, v: u32, sys: &SystemParams, theta_b: f64) -> Result<f64> {
    let ratio = u as f64 * sys.f_scs * sys.tau / (v as f64 * sys.f_c * sys.t_sym * a_theta(theta_b)?);
    Ok(0.5 * (ratio.ln() / (sys.n_rs as f64).ln() + 1.0))
}

/// Range of α whose pattern fits in B_tot and T_tot, intersected with [0.01, 0.99].
pub fn feasible_alpha_window(sys: &SystemParams) -> Result<(f64, f64)> {
    let ln_n = (sys.n_rs as f64).ln();
    let lo = (1.0 - (sys.b_tot / sys.f_scs).ln() / ln_n).max(0.01);
    let hi = ((sys.t_tot / sys.t_sym).ln() / ln_n).min(0.99);
    if lo > hi {
        return Err(Error::Infeasible(format!(
            "{} REs cannot fit in the time/bandwidth budget (alpha window [{lo}, {hi}])",
            sys.n_rs
        )));
    }
    Ok((lo, hi))
}

/// Closed-form optimum before rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Allocation {
    pub u: u32,
    pub v: u32,
    /// Stationary point of the objective.
    pub alpha_raw: f64,
    /// α actually used (after clamping into the feasible window).
    pub alpha: f64,
    pub clamped: bool,
}

fn spacing_feasible(u: u32, v: u32, req: &PatternRequirement, sys: &SystemParams) -> bool {
    let (u, v) = (u as f64, v as f64);
    C / (2.0 * u * sys.f_scs) >= req.d_max_req
        && u * C * sys.f_scs / (20.0 * sys.f_c) >= req.v_max_req
        && C / (2.0 * sys.f_c * v * sys.t_sym) >= req.v_max_req
}

pub fn optimal_allocation(req: &PatternRequirement, sys: &SystemParams, theta_b: f64) -> Result<Allocation> {
    req.validate()?;
    let sys = SystemParams { n_rs: req.n_rs, ..*sys };
    let u = (C / (2.0 * sys.f_scs * req.d_max_req)).floor();
    let v = (C / (2.0 * sys.f_c * sys.t_sym * req.v_max_req)).floor();
    if u < 1.0 {
        return Err(Error::Infeasible(format!(
            "d_max_req = {} m exceeds c/(2 f_scs) = {} m",
            req.d_max_req,
            C / (2.0 * sys.f_scs)
        )));
    }
    if v < 1.0 {
        return Err(Error::Infeasible(format!(
            "v_max_req = {} m/s exceeds c/(2 f_c T_sym) = {} m/s",
            req.v_max_req,
            C / (2.0 * sys.f_c * sys.t_sym)
        )));
    }
    let (u, v) = (u as u32, v as u32);
    if !spacing_feasible(u, v, req, &sys) {
        return Err(Error::Infeasible(format!(
            "U = {u} limits the Doppler range to {} m/s, below v_max_req = {} m/s",
            u as f64 * C * sys.f_scs / (20.0 * sys.f_c),
            req.v_max_req
        )));
    }
    let alpha_raw = alpha_for_spacings(u, v, &sys, theta_b)?;
    let (lo, hi) = feasible_alpha_window(&sys)?;
    let alpha = alpha_raw.clamp(lo, hi);
    let clamped = alpha != alpha_raw;
    if clamped {
        log::warn!("allocation ratio {alpha_raw} outside feasible window [{lo}, {hi}]; clamped to {alpha}");
    }
    Ok(Allocation { u, v, alpha_raw, alpha, clamped })
}

pub fn optimal_pattern(req: &PatternRequirement, sys: &SystemParams, theta_b: f64) -> Result<SensingPattern> {
    let alloc = optimal_allocation(req, sys, theta_b)?;
    SensingPattern::from_allocation(alloc.alpha, alloc.u, alloc.v, &SystemParams { n_rs: req.n_rs, ..*sys })
}

/// Exhaustive search over an α grid and all feasible (U, V).
///
/// Returns the winning (α, U, V) materialised as a pattern; ties resolve to
/// the smallest (objective, U, V, α).
pub fn brute_force_pattern(
    req: &PatternRequirement,
    sys: &SystemParams,
    theta_b: f64,
    grid_size: usize,
) -> Result<SensingPattern> {
    let (alpha, u, v) = brute_force_search(req, sys, theta_b, grid_size)?;
    SensingPattern::from_allocation(alpha, u, v, &SystemParams { n_rs: req.n_rs, ..*sys })
}

/// Same search as [`brute_force_pattern`], returning the raw (α, U, V).
pub fn brute_force_search(
    req: &PatternRequirement,
    sys: &SystemParams,
    theta_b: f64,
    grid_size: usize,
) -> Result<(f64, u32, u32)> {
    req.validate()?;
    if grid_size < 100 {
        return Err(invalid("grid_size must be >= 100"));
    }
    let sys = SystemParams { n_rs: req.n_rs, ..*sys };
    let (lo, hi) = feasible_alpha_window(&sys)?;
    let u_cap = (C / (2.0 * sys.f_scs)).floor() as u32;
    let v_cap = (C / (2.0 * sys.f_c * sys.t_sym * 0.1)).floor() as u32;
    let alphas: Vec<f64> = (1..grid_size)
        .map(|j| j as f64 / grid_size as f64)
        .filter(|a| *a >= lo && *a <= hi)
        .collect();
    if alphas.is_empty() {
        return Err(Error::Infeasible("no grid point inside the feasible alpha window".into()));
    }
    let pairs: Vec<(u32, u32)> = (1..=u_cap)
        .flat_map(|u| (1..=v_cap).map(move |v| (u, v)))
        .filter(|&(u, v)| spacing_feasible(u, v, req, &sys))
        .collect();
    if pairs.is_empty() {
        return Err(Error::Infeasible("no pilot spacing satisfies the range and speed requirements".into()));
    }
    let n = sys.n_rs as f64;
    let a_th = a_theta(theta_b)?;
    let time_coef = C * sys.tau / (2.0 * sys.f_c * sys.t_sym);
    let freq_coef = C * a_th / (2.0 * sys.f_scs);
    let pow: Vec<(f64, f64)> = alphas.iter().map(|&a| (n.powf(-a), n.powf(a - 1.0))).collect();
    let key = |x: &(f64, u32, u32, f64), y: &(f64, u32, u32, f64)| {
        x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)).then(x.3.total_cmp(&y.3))
    };
    let best = pairs
        .par_iter()
        .map(|&(u, v)| {
            let tc = time_coef / v as f64;
            let fc = freq_coef / u as f64;
            let mut best = (f64::INFINITY, u, v, 0.0);
            for (i, &(p_t, p_f)) in pow.iter().enumerate() {
                let g = tc * p_t + fc * p_f;
                let cand = (g, u, v, alphas[i]);
                if key(&cand, &best).is_lt() {
                    best = cand;
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, u32::MAX, u32::MAX, 1.0), |x, y| if key(&x, &y).is_le() { x } else { y });
    Ok((best.3, best.1, best.2))
}
