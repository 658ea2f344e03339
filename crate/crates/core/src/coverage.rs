//! Coverage probability by inverting the characteristic function of the
//! aggregate interference-plus-absorption-noise shot-noise field.

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::str::FromStr;

use rayon::prelude::*;

use crate::channel::{effective_noise, interference_weight, received_power, LinkBudget};
use crate::config::{Config, Deployment, SystemParams};
use crate::error::{domain, invalid, Error, Result};
use crate::misalignment::{beam_misalignment_given_timeout, timeout_probability};
use crate::scheme::Scheme;
use crate::sensing::SensingAbility;
use crate::specfun::gk::{adaptive, semi_infinite};
use crate::specfun::{integrate_oscillatory, QuadratureSpec, SinePair};

/// Lower limit of the interferer integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LowerBoundMode {
    /// Integrate interferers from 2 r_b.
    Theorem,
    /// Integrate interferers from the serving distance r1.
    Derivation,
}

impl LowerBoundMode {
    pub fn radius(&self, deploy: &Deployment, r1: f64) -> f64 {
        match self {
            LowerBoundMode::Theorem => 2.0 * deploy.r_b,
            LowerBoundMode::Derivation => r1,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LowerBoundMode::Theorem => "theorem",
            LowerBoundMode::Derivation => "derivation",
        }
    }
}

impl FromStr for LowerBoundMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theorem" => Ok(LowerBoundMode::Theorem),
            "derivation" => Ok(LowerBoundMode::Derivation),
            other => Err(invalid(format!("unknown lower-bound mode {other:?} (theorem, derivation)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageQuery {
    pub r1: f64,
    /// Linear SINR threshold.
    pub threshold: f64,
    pub scheme: Scheme,
    pub integration: QuadratureSpec,
    pub lower_bound_mode: LowerBoundMode,
}

impl CoverageQuery {
    pub fn new(r1: f64, threshold: f64, scheme: Scheme) -> Self {
        Self {
            r1,
            threshold,
            scheme,
            integration: default_outer_spec(),
            lower_bound_mode: LowerBoundMode::Theorem,
        }
    }

    pub fn validate(&self, deploy: &Deployment) -> Result<()> {
        if !(self.r1 >= 2.0 * deploy.r_b && self.r1.is_finite()) {
            return Err(invalid(format!("r1 = {} must be >= 2 r_b", self.r1)));
        }
        if !(self.threshold > 0.0) {
            return Err(invalid(format!("threshold must be > 0, got {}", self.threshold)));
        }
        self.integration.validate()
    }
}

pub fn default_outer_spec() -> QuadratureSpec {
    QuadratureSpec { abs_tol: 1e-7, rel_tol: 1e-8, max_subdivisions: 200, tail_cutoff_envelope: 1e-12, initial_panel: 1.0 }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageResult {
    pub p_cvp: f64,
    /// Probability that SINR exceeds the threshold, given aligned beams.
    pub p_cm: f64,
    pub p_ms: f64,
    pub integral_abs_error: f64,
}

/// Phase at which the inner r-integral switches to its asymptotic form.
const FAST_PHASE: f64 = 2.0 * PI * 64.0;

/// Shot-noise integrals f_r(s), f_i(s) for one (deployment, budget, lower limit).
///
/// Both are linear in the interference weight w_s, so three basis integrals
/// are cached per s and shared by every scheme.
pub struct ShotNoiseField {
    lower: f64,
    k: f64,
    c_int: f64,
    c_abs: f64,
    /// 2 λ r_b: decay rate of the unblocked-interferer probability.
    beta: f64,
    /// 4 λ r_b².
    gamma: f64,
    spec: QuadratureSpec,
    cache: RefCell<HashMap<u64, [f64; 6]>>,
}

impl ShotNoiseField {
    pub fn new(budget: &LinkBudget, deploy: &Deployment, lower: f64) -> Result<Self> {
        if !(lower >= 2.0 * deploy.r_b) {
            return Err(domain(format!("lower limit {lower} is below 2 r_b")));
        }
        let share = budget.absorption_share();
        let lam = deploy.lambda_total();
        Ok(Self {
            lower,
            k: budget.k,
            c_int: budget.a * (1.0 + share),
            c_abs: budget.a * share,
            beta: 2.0 * lam * deploy.r_b,
            gamma: 4.0 * lam * deploy.r_b * deploy.r_b,
            spec: QuadratureSpec {
                abs_tol: 1e-12,
                rel_tol: 1e-12,
                max_subdivisions: 100,
                tail_cutoff_envelope: 1e-14,
                initial_panel: 1.0,
            },
            cache: RefCell::new(HashMap::new()),
        })
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    /// (f_r, f_i) at s > 0 for interference weight w_s.
    pub fn parts(&self, s: f64, w_s: f64) -> Result<(f64, f64)> {
        let b = self.basis(s)?;
        Ok((w_s * b[0] + b[2] - w_s * b[4], w_s * b[1] + b[3] - w_s * b[5]))
    }

    fn basis(&self, s: f64) -> Result<[f64; 6]> {
        if let Some(b) = self.cache.borrow().get(&s.to_bits()) {
            return Ok(*b);
        }
        let i = self.term(self.c_int, true, s)?;
        let a1 = self.term(self.c_abs, false, s)?;
        let ap = self.term(self.c_abs, true, s)?;
        let b = [i[0], i[1], a1[0], a1[1], ap[0], ap[1]];
        self.cache.borrow_mut().insert(s.to_bits(), b);
        Ok(b)
    }

    fn unblocked(&self, r: f64) -> f64 {
        (self.gamma - self.beta * r).exp()
    }

    /// ∫_r^∞ x·p_UB(x) dx.
    fn unblocked_mass_above(&self, r: f64) -> f64 {
        let b = self.beta;
        if b == 0.0 {
            return f64::INFINITY;
        }
        self.unblocked(r) * (r / b + 1.0 / (b * b))
    }

    /// r with C·2πs·r⁻²e^(−Kr) = phase.
    fn radius_at_phase(&self, amp: f64, phase: f64) -> f64 {
        let ell = (amp / phase).ln();
        if self.k == 0.0 {
            return (0.5 * ell).exp();
        }
        // 2u + K e^u = ℓ with u = ln r; convex and increasing, Newton from the right
        let mut u = 0.5 * ell;
        for _ in 0..200 {
            let eu = u.exp();
            let h = 2.0 * u + self.k * eu - ell;
            let step = h / (2.0 + self.k * eu);
            u -= step;
            if step.abs() <= 1e-15 * u.abs().max(1.0) {
                break;
            }
        }
        u.exp()
    }

    /// [∫_L^∞ r q (1 − cos φ) dr, ∫_L^∞ r q sin φ dr] with φ = 2πsC r⁻²e^(−Kr),
    /// q = p_UB (weighted) or 1.
    fn term(&self, c: f64, weighted: bool, s: f64) -> Result<[f64; 2]> {
        if c == 0.0 || s == 0.0 {
            return Ok([0.0; 2]);
        }
        let amp = 2.0 * PI * s * c;
        let k = self.k;
        let phase = |r: f64| amp * (-k * r).exp() / (r * r);
        let q = |r: f64| if weighted { self.unblocked(r) } else { 1.0 };
        let dlnq = if weighted { -self.beta } else { 0.0 };
        let l = self.lower;
        let mut acc = [0.0; 2];
        let mut ok = true;

        let mut r_a = l;
        let mut phi_a = phase(l);
        if phi_a > FAST_PHASE {
            let r_x = self.radius_at_phase(amp, FAST_PHASE);
            let mass = if weighted {
                self.unblocked_mass_above(l) - self.unblocked_mass_above(r_x)
            } else {
                0.5 * (r_x * r_x - l * l)
            };
            // two integrations by parts for ∫ r q cos φ and ∫ r q sin φ
            let ends = |r: f64, phi: f64| -> (f64, f64) {
                let u = -r * r * q(r) / (phi * (2.0 + k * r));
                let du = u * (4.0 / r + k + dlnq - k / (2.0 + k * r));
                let dphi = -phi * (2.0 + k * r) / r;
                let v = du / dphi;
                let (sn, cs) = phi.sin_cos();
                (u * sn + v * cs, -u * cs + v * sn)
            };
            let (c_hi, s_hi) = ends(r_x, FAST_PHASE);
            let (c_lo, s_lo) = ends(l, phi_a);
            acc[0] += mass - (c_hi - c_lo);
            acc[1] += s_hi - s_lo;
            r_a = r_x;
            phi_a = FAST_PHASE;
        }

        let mut integrand = |r: f64| {
            let phi = phase(r);
            let w = r * q(r);
            let h = (0.5 * phi).sin();
            [w * 2.0 * h * h, w * phi.sin()]
        };
        while phi_a > 2.0 * PI * (1.0 + 1e-12) {
            if weighted && 2.0 * self.unblocked_mass_above(r_a) < self.spec.abs_tol * 1e-3 {
                return Ok(acc);
            }
            let phi_b = (phi_a - 2.0 * PI).max(2.0 * PI);
            let r_b = self.radius_at_phase(amp, phi_b);
            let (v, _, conv) =
                adaptive(&mut integrand, r_a, r_b, self.spec.abs_tol / 64.0, self.spec.rel_tol, self.spec.max_subdivisions);
            ok &= conv;
            acc[0] += v[0];
            acc[1] += v[1];
            r_a = r_b;
            phi_a = phi_b;
        }
        if weighted && 2.0 * self.unblocked_mass_above(r_a) < self.spec.abs_tol * 1e-3 {
            return Ok(acc);
        }
        let spec = QuadratureSpec { initial_panel: r_a, ..self.spec };
        let (v, e, conv) = semi_infinite(integrand, r_a, &spec);
        ok &= conv;
        acc[0] += v[0];
        acc[1] += v[1];
        if !ok {
            return Err(Error::NonConvergence { partial: acc[0], bound: e });
        }
        Ok(acc)
    }
}

/// (f_r(s), f_i(s)) for a single query.
pub fn shot_noise_parts(
    s: f64,
    query: &CoverageQuery,
    budget: &LinkBudget,
    deploy: &Deployment,
    sys: &SystemParams,
    p_ms: f64,
) -> Result<(f64, f64)> {
    if !(s > 0.0) {
        return Err(domain(format!("shot-noise parts need s > 0, got {s}")));
    }
    let field = ShotNoiseField::new(budget, deploy, query.lower_bound_mode.radius(deploy, query.r1))?;
    field.parts(s, interference_weight(deploy, sys, p_ms))
}

/// Coverage for a known misalignment probability, reusing a shot-noise field.
pub fn coverage_given_misalignment(
    query: &CoverageQuery,
    field: &ShotNoiseField,
    budget: &LinkBudget,
    deploy: &Deployment,
    sys: &SystemParams,
    p_ms: f64,
) -> Result<CoverageResult> {
    query.validate(deploy)?;
    if !(0.0..=1.0).contains(&p_ms) {
        return Err(domain(format!("p_ms must lie in [0, 1], got {p_ms}")));
    }
    let w_s = interference_weight(deploy, sys, p_ms);
    let p_eff = effective_noise(budget, sys, query.r1);
    let gap = 2.0 * PI * received_power(budget, query.r1) / query.threshold;
    let lam_b = deploy.lambda_b;
    let est = integrate_oscillatory(
        |s| {
            let (f_r, f_i) = if lam_b == 0.0 { (0.0, 0.0) } else { field.parts(s, w_s)? };
            let phase_lo = -2.0 * PI * lam_b * f_i - 2.0 * PI * s * p_eff;
            Ok(SinePair { envelope: (-2.0 * PI * lam_b * f_r).exp(), phase_lo, phase_hi: phase_lo + gap * s })
        },
        gap,
        0.0,
        &query.integration,
    )?;
    let tol = est.abs_error.max(query.integration.abs_tol);
    let raw = est.value;
    if raw < -10.0 * tol || raw > 1.0 + 10.0 * tol {
        return Err(Error::Numerical(format!(
            "conditional coverage {raw} outside [0, 1] beyond tolerance {tol:e}"
        )));
    }
    let p_cm = raw.clamp(0.0, 1.0);
    Ok(CoverageResult { p_cvp: (1.0 - p_ms) * p_cm, p_cm, p_ms, integral_abs_error: est.abs_error })
}

/// Coverage probability of a user at distance r1 from its serving BS.
pub fn coverage_probability(
    query: &CoverageQuery,
    budget: &LinkBudget,
    deploy: &Deployment,
    sys: &SystemParams,
    ability: &SensingAbility,
) -> Result<CoverageResult> {
    query.validate(deploy)?;
    let p_ms = beam_misalignment_given_timeout(deploy, ability, sys.tau, timeout_probability(deploy)?)?.p_ms;
    let field = ShotNoiseField::new(budget, deploy, query.lower_bound_mode.radius(deploy, query.r1))?;
    coverage_given_misalignment(query, &field, budget, deploy, sys, p_ms)
}

/// One row of a coverage sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageRow {
    pub scheme: Scheme,
    pub r1: f64,
    pub threshold_db: f64,
    pub result: CoverageResult,
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Cross product of r1 × threshold × scheme. Rows are ordered by r1, then
/// threshold, then scheme as given.
pub fn coverage_sweep(
    cfg: &Config,
    r1_grid: &[f64],
    threshold_db_grid: &[f64],
    schemes: &[Scheme],
    mode: LowerBoundMode,
    spec: &QuadratureSpec,
) -> Result<Vec<CoverageRow>> {
    if r1_grid.is_empty() || threshold_db_grid.is_empty() || schemes.is_empty() {
        return Err(invalid("coverage sweep grids must be non-empty"));
    }
    let deploy = &cfg.deployment;
    let sys = &cfg.system;
    let budget = LinkBudget::new(sys, deploy)?;
    let p_to = timeout_probability(deploy)?;
    let p_ms: Vec<f64> = schemes
        .iter()
        .map(|s| Ok(beam_misalignment_given_timeout(deploy, &s.ability(cfg)?, sys.tau, p_to)?.p_ms))
        .collect::<Result<_>>()?;
    let per_r1: Vec<Result<Vec<CoverageRow>>> = r1_grid
        .par_iter()
        .map(|&r1| {
            let field = ShotNoiseField::new(&budget, deploy, mode.radius(deploy, r1))?;
            let mut rows = Vec::new();
            for &t_db in threshold_db_grid {
                for (scheme, &pm) in schemes.iter().zip(&p_ms) {
                    let query = CoverageQuery {
                        r1,
                        threshold: db_to_linear(t_db),
                        scheme: *scheme,
                        integration: *spec,
                        lower_bound_mode: mode,
                    };
                    let result = coverage_given_misalignment(&query, &field, &budget, deploy, sys, pm)?;
                    rows.push(CoverageRow { scheme: *scheme, r1, threshold_db: t_db, result });
                }
            }
            Ok(rows)
        })
        .collect();
    let mut out = Vec::new();
    for rows in per_r1 {
        out.extend(rows?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn setup() -> (SystemParams, Deployment, LinkBudget) {
        let sys = SystemParams::default();
        let dep = Deployment::default();
        let b = LinkBudget::new(&sys, &dep).unwrap();
        (sys, dep, b)
    }

    /// Plain adaptive quadrature of the defining integrand, no asymptotics.
    fn brute_term(field: &ShotNoiseField, c: f64, weighted: bool, s: f64) -> [f64; 2] {
        let amp = 2.0 * PI * s * c;
        let mut g = |r: f64| {
            let phi = amp * (-field.k * r).exp() / (r * r);
            let q = if weighted { field.unblocked(r) } else { 1.0 };
            [r * q * (1.0 - phi.cos()), r * q * phi.sin()]
        };
        let mut acc = [0.0; 2];
        let mut a = field.lower;
        for _ in 0..60 {
            let b = a * 1.25;
            let (v, _, _) = adaptive(&mut g, a, b, 1e-14, 1e-12, 2000);
            acc[0] += v[0];
            acc[1] += v[1];
            a = b;
            if a > 2e4 {
                break;
            }
        }
        let (v, _, _) = semi_infinite(g, a, &QuadratureSpec::default().with_initial_panel(a));
        [acc[0] + v[0], acc[1] + v[1]]
    }

    #[test]
    fn radius_inversion() {
        let (_, dep, b) = setup();
        let f = ShotNoiseField::new(&b, &dep, 1.0).unwrap();
        let amp = 1e4;
        for phase in [1.0, 10.0, 400.0] {
            let r = f.radius_at_phase(amp, phase);
            assert_relative_eq!(amp * (-f.k * r).exp() / (r * r), phase, max_relative = 1e-12);
        }
    }

    #[test]
    fn terms_match_brute_force() {
        let (_, dep, b) = setup();
        let f = ShotNoiseField::new(&b, &dep, 1.0).unwrap();
        for s in [1e6, 1e9, 3e10] {
            for (c, w) in [(f.c_abs, false), (f.c_abs, true)] {
                let fast = f.term(c, w, s).unwrap();
                let slow = brute_term(&f, c, w, s);
                assert_relative_eq!(fast[0], slow[0], max_relative = 1e-7, epsilon = 1e-12);
                assert_relative_eq!(fast[1], slow[1], max_relative = 1e-7, epsilon = 1e-12);
            }
        }
        // interference term with many oscillations near r = L
        let fast = f.term(f.c_int, true, 1e6).unwrap();
        let slow = brute_term(&f, f.c_int, true, 1e6);
        assert_relative_eq!(fast[0], slow[0], max_relative = 1e-6);
        assert_relative_eq!(fast[1], slow[1], max_relative = 1e-4, epsilon = 1e-6);
    }

    #[test]
    fn parts_vanish_at_small_s_and_zero_power() {
        let (sys, dep, b) = setup();
        let q = CoverageQuery::new(20.0, 3.0, Scheme::Jsrs);
        // f_r is quadratic and f_i linear in s near 0
        let (fr1, fi1) = shot_noise_parts(1e-3, &q, &b, &dep, &sys, 0.1).unwrap();
        let (fr2, fi2) = shot_noise_parts(1e-6, &q, &b, &dep, &sys, 0.1).unwrap();
        assert!(fr1 < 1e-12 && fi1 < 1e-6);
        assert!(fr2 <= 1e-5 * fr1);
        assert_relative_eq!(fi2, 1e-3 * fi1, max_relative = 1e-6);
        let zero = LinkBudget { a: 0.0, ..b };
        assert_eq!(shot_noise_parts(1e9, &q, &zero, &dep, &sys, 0.1).unwrap(), (0.0, 0.0));
        for s in [1e3, 1e7, 1e9, 1e11] {
            assert!(shot_noise_parts(s, &q, &b, &dep, &sys, 0.1).unwrap().0 >= 0.0);
        }
    }

    #[test]
    fn misaligned_user_has_no_coverage() {
        let (sys, dep, b) = setup();
        let f = ShotNoiseField::new(&b, &dep, 1.0).unwrap();
        let q = CoverageQuery::new(20.0, 3.0, Scheme::Jsrs);
        let r = coverage_given_misalignment(&q, &f, &b, &dep, &sys, 1.0).unwrap();
        assert_eq!(r.p_cvp, 0.0);
    }
}
