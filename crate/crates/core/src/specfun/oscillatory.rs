//! Integrals of envelope(s)·[sin φ₂(s) − sin φ₁(s)]/(πs) over [lower, ∞).

use std::f64::consts::PI;

use super::gk::adaptive;
use super::{Estimate, QuadratureSpec};
use crate::error::{domain, Error, Result};

/// Integrand sample at one abscissa: the decaying envelope and both phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinePair {
    pub envelope: f64,
    pub phase_lo: f64,
    pub phase_hi: f64,
}

const MAX_HALF_PERIODS: usize = 20_000;
const MAX_TAIL_PANELS: usize = 2_000;
const WYNN_WINDOW: usize = 31;

/// Wynn's epsilon extrapolation of a sequence of partial sums.
///
/// Returns (limit estimate, error estimate). Uses the highest even column
/// that can be built from `partials`.
pub fn wynn_epsilon(partials: &[f64]) -> (f64, f64) {
    let n = partials.len();
    match n {
        0 => return (0.0, f64::INFINITY),
        1 => return (partials[0], f64::INFINITY),
        2 => return (partials[1], (partials[1] - partials[0]).abs()),
        _ => {}
    }
    let mut prev2 = vec![0.0; n + 1];
    let mut prev = partials.to_vec();
    let mut best = partials[n - 1];
    let mut best_err = (partials[n - 1] - partials[n - 2]).abs();
    for k in 1..n {
        let len = n - k;
        let mut cur = vec![0.0; len];
        for j in 0..len {
            let diff = prev[j + 1] - prev[j];
            if diff == 0.0 || !diff.is_finite() {
                return (best, best_err);
            }
            cur[j] = prev2[j + 1] + 1.0 / diff;
        }
        if k % 2 == 0 {
            let est = cur[len - 1];
            if !est.is_finite() {
                break;
            }
            best_err = (est - best).abs();
            best = est;
        }
        prev2 = prev;
        prev = cur;
    }
    (best, best_err)
}

/// Integrates envelope(s)·[sin φ_hi(s) − sin φ_lo(s)]/(πs) from `lower` to ∞.
///
/// The phase gap must be linear, φ_hi − φ_lo = `gap_slope`·s. The region up
/// to a few periods of the gap is integrated in difference form (with the
/// analytic limit on [0, ε] when `lower` is 0). Beyond it the two sine terms
/// are integrated separately: the fast one over half periods with Wynn
/// extrapolation, the slow one over doubling panels.
pub fn integrate_oscillatory<F>(mut f: F, gap_slope: f64, lower: f64, spec: &QuadratureSpec) -> Result<Estimate>
where
    F: FnMut(f64) -> Result<SinePair>,
{
    spec.validate()?;
    if !(lower >= 0.0) {
        return Err(domain("oscillatory integral needs lower >= 0"));
    }
    if gap_slope == 0.0 {
        return Ok(Estimate { value: 0.0, abs_error: 0.0 });
    }
    let mut failure: Option<Error> = None;
    let mut sample = |s: f64, failure: &mut Option<Error>| -> SinePair {
        match f(s) {
            Ok(p) => p,
            Err(e) => {
                failure.get_or_insert(e);
                SinePair { envelope: f64::NAN, phase_lo: 0.0, phase_hi: 0.0 }
            }
        }
    };

    let a = gap_slope.abs();
    let half = PI / a;
    let s_a = lower + 8.0 * half;
    let mut total = 0.0;
    let mut err = 0.0;
    let mut converged = true;

    // region A: difference form
    let mut start = lower;
    if lower == 0.0 {
        let eps = s_a * 1e-12;
        let p = sample(eps, &mut failure);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let gap = p.phase_hi - p.phase_lo;
        if !(gap.is_finite() && p.envelope.is_finite()) || (gap - gap_slope * eps).abs() > 1e-6 * a * eps {
            return Err(domain("phase gap is not linear near s = 0; removable limit unavailable"));
        }
        total += p.envelope * p.phase_lo.cos() * gap_slope / PI * eps;
        start = eps;
    }
    let diff_form = |s: f64, failure: &mut Option<Error>, sample: &mut dyn FnMut(f64, &mut Option<Error>) -> SinePair| {
        let p = sample(s, failure);
        let mean = 0.5 * (p.phase_hi + p.phase_lo);
        let halfgap = 0.5 * (p.phase_hi - p.phase_lo);
        p.envelope * 2.0 * mean.cos() * halfgap.sin() / (PI * s)
    };
    let panels = 8;
    let step = (s_a - start) / panels as f64;
    for k in 0..panels {
        let lo = start + step * k as f64;
        let hi = if k + 1 == panels { s_a } else { lo + step };
        let mut g = |s: f64| [diff_form(s, &mut failure, &mut sample)];
        let (v, e, ok) = adaptive(&mut g, lo, hi, spec.abs_tol / 32.0, spec.rel_tol, spec.max_subdivisions);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        converged &= ok;
        total += v[0];
        err += e;
    }

    // region B: fast sine, half periods + extrapolation
    let mut partials: Vec<f64> = Vec::new();
    let mut running = 0.0;
    let mut fast = None;
    let mut last_ext = f64::NAN;
    // panels follow the measured rate of the fast phase so that successive
    // partial sums alternate even when φ_hi has its own drift
    let mut lo = s_a;
    let mut width = half;
    let mut phase_at = sample(lo, &mut failure).phase_hi;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    for _ in 0..MAX_HALF_PERIODS {
        let hi = lo + width;
        let mut g = |s: f64| {
            let p = sample(s, &mut failure);
            [p.envelope * p.phase_hi.sin() / (PI * s)]
        };
        let (v, e, ok) = adaptive(&mut g, lo, hi, spec.abs_tol / 64.0, spec.rel_tol, spec.max_subdivisions);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        converged &= ok;
        running += v[0];
        err += e;
        partials.push(running);
        let end = sample(hi, &mut failure);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let bound = end.envelope.abs() / (PI * hi) * width;
        let scale = (total + running).abs().max(1e-300);
        if bound <= spec.tail_cutoff_envelope * scale {
            fast = Some((running, 0.0));
            break;
        }
        let omega = ((end.phase_hi - phase_at) / width).abs();
        phase_at = end.phase_hi;
        lo = hi;
        if omega > 0.0 {
            width = (PI / omega).clamp(0.25 * half, 4.0 * half.max(width));
        }
        if partials.len() >= 6 {
            let window = &partials[partials.len().saturating_sub(WYNN_WINDOW)..];
            let (ext, ext_err) = wynn_epsilon(window);
            let change = (ext - last_ext).abs();
            if ext.is_finite() && change.max(ext_err) <= spec.target(total + ext) * 0.25 {
                fast = Some((ext, change.max(ext_err)));
                break;
            }
            last_ext = ext;
        }
    }
    let Some((fast_value, fast_err)) = fast else {
        return Err(Error::NonConvergence { partial: total + running, bound: err + running.abs() });
    };
    total += fast_value;
    err += fast_err;

    // region C: slow sine, doubling panels capped by the local phase rate
    let mut slow = 0.0;
    let mut lo = s_a;
    let mut width = s_a.max(half);
    let p_lo = sample(lo, &mut failure);
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let mut phase_at_lo = p_lo.phase_lo;
    let mut quiet = 0;
    let mut done = false;
    // partial sums over half periods once the slow phase oscillates
    let mut wave: Vec<f64> = Vec::new();
    let mut wave_ext = f64::NAN;
    let mut oscillating = false;
    for _ in 0..MAX_TAIL_PANELS {
        let hi = lo + width;
        let mut g = |s: f64| {
            let p = sample(s, &mut failure);
            [p.envelope * p.phase_lo.sin() / (PI * s)]
        };
        let (v, e, ok) = adaptive(&mut g, lo, hi, spec.abs_tol / 16.0, spec.rel_tol, spec.max_subdivisions);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        converged &= ok;
        slow -= v[0];
        err += e;
        let end = sample(hi, &mut failure);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        let scale = (total + slow).abs().max(1e-300);
        if end.envelope.abs() <= spec.tail_cutoff_envelope * scale
            && v[0].abs() <= spec.tail_cutoff_envelope.sqrt() * scale
        {
            quiet += 1;
        } else {
            quiet = 0;
        }
        if quiet >= 2 {
            done = true;
            break;
        }
        if oscillating {
            wave.push(slow);
            if wave.len() >= 6 {
                let (ext, ext_err) = wynn_epsilon(&wave[wave.len().saturating_sub(WYNN_WINDOW)..]);
                let change = (ext - wave_ext).abs();
                if ext.is_finite() && change.max(ext_err) <= spec.target(total + ext) * 0.25 {
                    slow = ext;
                    err += change.max(ext_err);
                    done = true;
                    break;
                }
                wave_ext = ext;
            }
        }
        let omega = ((end.phase_lo - phase_at_lo) / width).abs();
        phase_at_lo = end.phase_lo;
        lo = hi;
        width = lo;
        oscillating = omega > 0.0 && PI / omega < width;
        if oscillating {
            width = PI / omega;
        } else {
            wave.clear();
            wave_ext = f64::NAN;
        }
    }
    total += slow;
    // individual panels may stall on integrand noise; accept when the summed
    // error estimate still meets the requested tolerance
    if !done || (!converged && err > spec.target(total)) {
        return Err(Error::NonConvergence { partial: total, bound: err });
    }
    Ok(Estimate { value: total, abs_error: err })
}
