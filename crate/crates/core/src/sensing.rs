//! OFDM sensing abilities: resolutions, unambiguous ranges and the
//! transverse factor A_θ.

use std::f64::consts::PI;
use std::fmt;

use crate::config::SystemParams;
use crate::error::{domain, invalid, Result};
use crate::SPEED_OF_LIGHT as C;

/// A range limit that may be absent for idealised baselines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    Finite(f64),
    Unbounded,
}

impl Bound {
    pub fn value(&self) -> Option<f64> {
        match self {
            Bound::Finite(x) => Some(*x),
            Bound::Unbounded => None,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bound::Finite(x) => write!(f, "{x}"),
            Bound::Unbounded => Ok(()),
        }
    }
}

/// Pilot spacings and the bandwidth/time they occupy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResourceSpan {
    pub u: u32,
    pub v: u32,
    pub b_s: f64,
    pub t_s: f64,
}

/// Reference-signal resource split.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingPattern {
    pub alpha: f64,
    pub u: u32,
    pub v: u32,
    pub n_s: u64,
    pub n_f: u64,
    pub b_s: f64,
    pub t_s: f64,
}

impl SensingPattern {
    /// Materialises α into symbol/subcarrier counts, rounded to the nearest
    /// integer ≥ 1 and capped by the total time and bandwidth.
    pub fn from_allocation(alpha: f64, u: u32, v: u32, sys: &SystemParams) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
        }
        if u < 1 || v < 1 {
            return Err(invalid("pilot spacings U and V must be >= 1"));
        }
        let n = sys.n_rs as f64;
        let max_f = (sys.b_tot / sys.f_scs).floor().max(1.0) as u64;
        let max_s = (sys.t_tot / sys.t_sym).floor().max(1.0) as u64;
        let n_s = (n.powf(alpha).round() as u64).clamp(1, max_s);
        let n_f = (n.powf(1.0 - alpha).round() as u64).clamp(1, max_f);
        Ok(Self {
            alpha,
            u,
            v,
            n_s,
            n_f,
            b_s: n_f as f64 * sys.f_scs,
            t_s: n_s as f64 * sys.t_sym,
        })
    }

    pub fn span(&self) -> ResourceSpan {
        ResourceSpan { u: self.u, v: self.v, b_s: self.b_s, t_s: self.t_s }
    }
}

/// Achieved resolutions and unambiguous ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SensingAbility {
    pub delta_r: f64,
    pub delta_db: f64,
    pub delta_v: f64,
    pub d_max: Bound,
    pub v_max: Bound,
}

/// Average transverse-to-longitudinal resolution ratio for beam width θ_b.
pub fn a_theta(theta_b: f64) -> Result<f64> {
    if !(theta_b > 0.0 && theta_b < PI / 2.0) {
        return Err(domain(format!("A_theta needs 0 < theta_b < pi/2, got {theta_b}")));
    }
    let c = theta_b.cos();
    Ok(theta_b.sin() / (PI - 2.0 * theta_b) * ((1.0 + c) / (1.0 - c)).ln())
}

/// Unambiguous range c/(2 U f_scs).
pub fn max_range(u: u32, sys: &SystemParams) -> f64 {
    C / (2.0 * u as f64 * sys.f_scs)
}

/// Unambiguous velocity min(U c f_scs/(20 f_c), c/(2 f_c V T_sym)).
pub fn max_velocity(u: u32, v: u32, sys: &SystemParams) -> f64 {
    let doppler = u as f64 * C * sys.f_scs / (20.0 * sys.f_c);
    let time = C / (2.0 * sys.f_c * v as f64 * sys.t_sym);
    doppler.min(time)
}

pub fn span_ability(span: &ResourceSpan, sys: &SystemParams, theta_b: f64) -> Result<SensingAbility> {
    if span.u < 1 || span.v < 1 || !(span.b_s > 0.0) || !(span.t_s > 0.0) {
        return Err(invalid("resource span needs U, V >= 1 and positive B_s, T_s"));
    }
    let delta_r = C / (2.0 * span.u as f64 * span.b_s);
    Ok(SensingAbility {
        delta_r,
        delta_db: a_theta(theta_b)? * delta_r,
        delta_v: C / (2.0 * sys.f_c * span.v as f64 * span.t_s),
        d_max: Bound::Finite(max_range(span.u, sys)),
        v_max: Bound::Finite(max_velocity(span.u, span.v, sys)),
    })
}

pub fn sensing_ability(pattern: &SensingPattern, sys: &SystemParams, theta_b: f64) -> Result<SensingAbility> {
    span_ability(&pattern.span(), sys, theta_b)
}

/// Abilities of sensing with a single SSB (U = V = 1).
pub fn ssb_ability(sys: &SystemParams, theta_b: f64) -> Result<SensingAbility> {
    let delta_r = C / (2.0 * sys.b_ssb);
    Ok(SensingAbility {
        delta_r,
        delta_db: a_theta(theta_b)? * delta_r,
        delta_v: C / (2.0 * sys.f_c * sys.t_ssb),
        d_max: Bound::Finite(max_range(1, sys)),
        v_max: Bound::Finite(max_velocity(1, 1, sys)),
    })
}

/// Resolutions required for general V2X use cases.
pub fn baseline_5g_ability() -> SensingAbility {
    SensingAbility { delta_r: 0.3, delta_db: 0.3, delta_v: 1.0, d_max: Bound::Unbounded, v_max: Bound::Unbounded }
}

/// Error-free sensing.
pub fn perfect_ability() -> SensingAbility {
    SensingAbility { delta_r: 0.0, delta_db: 0.0, delta_v: 0.0, d_max: Bound::Unbounded, v_max: Bound::Unbounded }
}
