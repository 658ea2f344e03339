//! Poisson-point-process Monte-Carlo simulator used as an independent check
//! of the analytical results.
//!
//! The typical MT sits at the origin. Every trial draws its randomness from
//! its own ChaCha stream keyed by (seed, trial index), so estimates do not
//! depend on how trials are scheduled across threads.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp, Poisson};
use rayon::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::channel::{beam_sweep_fraction, effective_noise, received_power, LinkBudget};
use crate::config::{Deployment, SystemParams};
use crate::coverage::LowerBoundMode;
use crate::error::{domain, Result};
use crate::misalignment::{beam_misalignment, mu_g};
use crate::sensing::SensingAbility;
use crate::specfun::exp_integral_e1;

pub type Point = [f64; 2];

const ORIGIN: Point = [0.0, 0.0];

/// Default simulation disc radius for coverage runs (m).
pub const DEFAULT_WINDOW: f64 = 400.0;

/// Fraction of the window treated as the edge guard band.
const GUARD_FRACTION: f64 = 0.25;

/// λπR² at which a disc holds fewer than two points with probability < 1e-13.
const TWO_POINT_MASS: f64 = 36.0;

/// One realisation of the network around the typical MT.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub window_radius: f64,
    /// Width of the edge band; quantities of interest should stay inside
    /// `window_radius - guard`.
    pub guard: f64,
    pub bs_points: Vec<Point>,
    pub mt_points: Vec<Point>,
    pub blocker_points: Vec<Point>,
    pub rng_seed: u64,
}

impl Scene {
    pub fn interior_radius(&self) -> f64 {
        self.window_radius - self.guard
    }
}

/// Mean and standard error of a Monte-Carlo estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    /// Estimate of a probability from `hits` successes in `trials` trials.
    pub fn from_counts(hits: u64, trials: u64) -> Result<Self> {
        if trials == 0 || hits > trials {
            return Err(domain(format!("invalid counts {hits}/{trials}")));
        }
        let n = trials as f64;
        let p = hits as f64 / n;
        let std_error = if trials > 1 { (p * (1.0 - p) / (n - 1.0)).sqrt() } else { 0.0 };
        Ok(Self { mean: p, std_error, trials })
    }

    /// (analytic − mean)/σ; zero when both agree and σ = 0.
    pub fn sigmas_off(&self, analytic: f64) -> f64 {
        let d = analytic - self.mean;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            d.signum() * f64::INFINITY
        }
    }
}

/// How the two serving-link candidates of a timeout trial see obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BlockerSharing {
    /// Each link sees its own obstacle realisation, so blockages of the two
    /// links are independent as in the analysis.
    #[default]
    PerLink,
    /// Both links see the same obstacles; corridors overlap near the MT.
    Shared,
}

/// Which node kinds act as obstacles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Obstacles {
    pub blockers: bool,
    pub mts: bool,
    pub bss: bool,
}

impl Obstacles {
    /// Blockers and MTs: the obstacle set of a serving link.
    pub const SERVING: Self = Self { blockers: true, mts: true, bss: false };
    /// Every node kind: the obstacle set of an interfering link.
    pub const ALL: Self = Self { blockers: true, mts: true, bss: true };
}

pub(crate) fn trial_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn poisson_count<R: Rng>(rng: &mut R, mean: f64) -> usize {
    if !(mean > 0.0) {
        return 0;
    }
    Poisson::new(mean).map(|d| d.sample(rng) as usize).unwrap_or(0)
}

/// Uniform PPP of intensity `lambda` on the disc of radius `radius`.
fn disc_ppp<R: Rng>(rng: &mut R, lambda: f64, radius: f64) -> Vec<Point> {
    let n = poisson_count(rng, lambda * PI * radius * radius);
    (0..n)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let (s, c) = (2.0 * PI * rng.random::<f64>()).sin_cos();
            [r * c, r * s]
        })
        .collect()
}

/// Uniform PPP of intensity `lambda` on an axis-aligned box.
fn box_ppp<R: Rng>(rng: &mut R, lambda: f64, x: (f64, f64), y: (f64, f64)) -> Vec<Point> {
    let n = poisson_count(rng, lambda * (x.1 - x.0) * (y.1 - y.0));
    (0..n)
        .map(|_| [rng.random_range(x.0..x.1), rng.random_range(y.0..y.1)])
        .collect()
}

fn sample_scene_from<R: Rng>(rng: &mut R, deploy: &Deployment, window_radius: f64, seed: u64) -> Scene {
    let bs_points = disc_ppp(rng, deploy.lambda_b, window_radius);
    let mt_points = disc_ppp(rng, deploy.lambda_m, window_radius);
    let blocker_points = disc_ppp(rng, deploy.lambda_s, window_radius);
    Scene {
        window_radius,
        guard: GUARD_FRACTION * window_radius,
        bs_points,
        mt_points,
        blocker_points,
        rng_seed: seed,
    }
}

/// Independent PPP draws of BSs, MTs and blockers on a disc around the typical MT.
pub fn sample_scene(deploy: &Deployment, window_radius: f64, seed: u64) -> Result<Scene> {
    if !(window_radius > 0.0 && window_radius.is_finite()) {
        return Err(domain(format!("window radius must be > 0, got {window_radius}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(sample_scene_from(&mut rng, deploy, window_radius, seed))
}

/// Corridor test: `p` lies within r_b of the segment axis and at least r_b
/// from both ends, i.e. inside the 2r_b × (|to − from| − 2r_b) rectangle.
#[inline]
fn in_corridor(p: Point, from: Point, dir: Point, len: f64, r_b: f64) -> bool {
    let dx = p[0] - from[0];
    let dy = p[1] - from[1];
    let t = dx * dir[0] + dy * dir[1];
    if t < r_b || t > len - r_b {
        return false;
    }
    (dx * dir[1] - dy * dir[0]).abs() <= r_b
}

fn corridor_hit<'a>(points: impl IntoIterator<Item = &'a Point>, from: Point, to: Point, r_b: f64) -> bool {
    let dx = to[0] - from[0];
    let dy = to[1] - from[1];
    let len = dx.hypot(dy);
    if len < 2.0 * r_b || len == 0.0 {
        return false;
    }
    let dir = [dx / len, dy / len];
    points
        .into_iter()
        .any(|&p| p != from && p != to && in_corridor(p, from, dir, len, r_b))
}

/// Whether an MT or blocker obstructs the link `from`–`to`.
pub fn is_blocked(scene: &Scene, from: Point, to: Point, deploy: &Deployment) -> bool {
    is_blocked_by(scene, from, to, deploy, Obstacles::SERVING)
}

/// Whether any node of the selected kinds (other than the endpoints) lies in
/// the link's corridor.
pub fn is_blocked_by(scene: &Scene, from: Point, to: Point, deploy: &Deployment, kinds: Obstacles) -> bool {
    let r_b = deploy.r_b;
    (kinds.blockers && corridor_hit(&scene.blocker_points, from, to, r_b))
        || (kinds.mts && corridor_hit(&scene.mt_points, from, to, r_b))
        || (kinds.bss && corridor_hit(&scene.bs_points, from, to, r_b))
}

fn require_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        return Err(domain("need at least one trial"));
    }
    Ok(())
}

/// Counts trials for which `hit` returns true, in parallel.
fn count_hits<F>(trials: u64, hit: F) -> u64
where
    F: Fn(u64) -> bool + Sync,
{
    (0..trials).into_par_iter().filter(|&i| hit(i)).count() as u64
}

/// Frequency with which a link of length r from the MT is blocked by MTs or blockers.
pub fn estimate_blockage(deploy: &Deployment, r: f64, trials: u64, seed: u64) -> Result<McEstimate> {
    require_trials(trials)?;
    deploy.validate()?;
    if !(r >= 2.0 * deploy.r_b) {
        return Err(domain(format!("link length {r} is below 2 r_b")));
    }
    let rb = deploy.r_b;
    let lam = deploy.lambda_obstacle();
    let hits = count_hits(trials, |i| {
        let mut rng = trial_rng(seed, i);
        // the corridor with a margin on every side; PPP restricted to a box is exact
        let pts = box_ppp(&mut rng, lam, (-rb, r + rb), (-2.0 * rb, 2.0 * rb));
        corridor_hit(&pts, ORIGIN, [r, 0.0], rb)
    });
    McEstimate::from_counts(hits, trials)
}

/// Disc radius that holds at least two BSs except with negligible probability.
pub fn two_bs_window(deploy: &Deployment) -> Result<f64> {
    if !(deploy.lambda_b > 0.0) {
        return Err(domain("need lambda_b > 0"));
    }
    Ok((TWO_POINT_MASS / (PI * deploy.lambda_b)).sqrt() + 2.0 * deploy.r_b)
}

fn nearest_two(points: &[Point]) -> Option<(Point, Point)> {
    let mut best = [(f64::INFINITY, ORIGIN); 2];
    for &p in points {
        let d = p[0].hypot(p[1]);
        if d < best[0].0 {
            best[1] = best[0];
            best[0] = (d, p);
        } else if d < best[1].0 {
            best[1] = (d, p);
        }
    }
    (best[1].0.is_finite()).then(|| (best[0].1, best[1].1))
}

struct LinkOutcome {
    first_blocked: bool,
    both_blocked: bool,
}

fn obstacle_scene<R: Rng>(rng: &mut R, deploy: &Deployment, radius: f64, seed: u64) -> Scene {
    Scene {
        window_radius: radius,
        guard: 0.0,
        bs_points: Vec::new(),
        mt_points: disc_ppp(rng, deploy.lambda_m, radius),
        blocker_points: disc_ppp(rng, deploy.lambda_s, radius),
        rng_seed: seed,
    }
}

fn nearest_links<R: Rng>(rng: &mut R, deploy: &Deployment, window: f64, seed: u64, sharing: BlockerSharing) -> LinkOutcome {
    let bss = disc_ppp(rng, deploy.lambda_b, window);
    let Some((b1, b2)) = nearest_two(&bss) else {
        // no reachable BS at all; vanishingly rare by the window choice
        return LinkOutcome { first_blocked: true, both_blocked: true };
    };
    // a corridor from the origin stays inside the disc of its own length, so
    // obstacles only need to be drawn there
    let r1 = b1[0].hypot(b1[1]);
    let r2 = b2[0].hypot(b2[1]);
    match sharing {
        BlockerSharing::Shared => {
            let scene = obstacle_scene(rng, deploy, r2, seed);
            let first_blocked = is_blocked(&scene, ORIGIN, b1, deploy);
            LinkOutcome { first_blocked, both_blocked: first_blocked && is_blocked(&scene, ORIGIN, b2, deploy) }
        }
        BlockerSharing::PerLink => {
            let first_blocked = is_blocked(&obstacle_scene(rng, deploy, r1, seed), ORIGIN, b1, deploy);
            let both_blocked =
                first_blocked && is_blocked(&obstacle_scene(rng, deploy, r2, seed), ORIGIN, b2, deploy);
            LinkOutcome { first_blocked, both_blocked }
        }
    }
}

/// Frequency with which both of the two nearest BSs are blocked.
pub fn estimate_timeout(deploy: &Deployment, trials: u64, seed: u64) -> Result<McEstimate> {
    estimate_timeout_with(deploy, trials, seed, BlockerSharing::PerLink)
}

pub fn estimate_timeout_with(deploy: &Deployment, trials: u64, seed: u64, sharing: BlockerSharing) -> Result<McEstimate> {
    require_trials(trials)?;
    deploy.validate()?;
    let window = two_bs_window(deploy)?;
    let hits = count_hits(trials, |i| {
        let mut rng = trial_rng(seed, i);
        nearest_links(&mut rng, deploy, window, seed, sharing).both_blocked
    });
    McEstimate::from_counts(hits, trials)
}

/// Frequency of beam misalignment: the next beam switch falls between the
/// sensed and the true displacement while the nearest BS is visible, or both
/// nearest BSs are blocked.
pub fn estimate_misalignment(
    deploy: &Deployment,
    ability: &SensingAbility,
    tau: f64,
    trials: u64,
    seed: u64,
    sharing: BlockerSharing,
) -> Result<McEstimate> {
    require_trials(trials)?;
    deploy.validate()?;
    let window = two_bs_window(deploy)?;
    let gap = Exp::new(mu_g(deploy)).map_err(|e| domain(e.to_string()))?;
    let travelled = deploy.v * tau;
    let sensed = ((deploy.v - ability.delta_v) * tau - ability.delta_db).max(0.0);
    let hits = count_hits(trials, |i| {
        let mut rng = trial_rng(seed, i);
        let switch_at: f64 = gap.sample(&mut rng);
        let links = nearest_links(&mut rng, deploy, window, seed, sharing);
        let missed = switch_at > sensed && switch_at <= travelled;
        (missed && !links.first_blocked) || links.both_blocked
    });
    McEstimate::from_counts(hits, trials)
}

/// Joint (r₁, r₂) distances of the two nearest BSs over independent scenes.
pub fn nearest_two_samples(deploy: &Deployment, samples: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let window = two_bs_window(deploy)?;
    let lb = deploy.lambda_b;
    Ok((0..samples)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng = trial_rng(seed, i);
            let pts = disc_ppp(&mut rng, lb, window);
            nearest_two(&pts).map(|(a, b)| (a[0].hypot(a[1]), b[0].hypot(b[1])))
        })
        .collect())
}

/// Outcome of a chi-square goodness-of-fit test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GofResult {
    pub statistic: f64,
    pub dof: u32,
    pub p_value: f64,
}

/// Chi-square test of nearest-two distances against the PPP joint density
/// (2πλ)² r₁ r₂ e^(−λπr₂²), r₁ < r₂.
///
/// With uᵢ = λπrᵢ² the pair maps to independent x = u₁/u₂ ~ U(0,1) and
/// u₂ ~ Gamma(2, 1); both are binned into `bins` equiprobable classes.
pub fn nearest_two_gof(samples: &[(f64, f64)], lambda_b: f64, bins: usize) -> Result<GofResult> {
    if bins < 2 || samples.is_empty() || !(lambda_b > 0.0) {
        return Err(domain("gof needs samples, lambda_b > 0 and at least 2 bins"));
    }
    let mut counts = vec![0u64; bins * bins];
    for &(r1, r2) in samples {
        if !(r1 <= r2) {
            return Err(domain(format!("sample pair not ordered: {r1} > {r2}")));
        }
        let u1 = lambda_b * PI * r1 * r1;
        let u2 = lambda_b * PI * r2 * r2;
        let x = u1 / u2;
        let g = 1.0 - (-u2).exp() * (1.0 + u2);
        let bx = ((x * bins as f64) as usize).min(bins - 1);
        let bg = ((g * bins as f64) as usize).min(bins - 1);
        counts[bx * bins + bg] += 1;
    }
    let expected = samples.len() as f64 / (bins * bins) as f64;
    let statistic: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    let dof = (bins * bins - 1) as u32;
    let chi = ChiSquared::new(dof as f64).map_err(|e| domain(e.to_string()))?;
    Ok(GofResult { statistic, dof, p_value: chi.sf(statistic) })
}

/// Setup of a coverage simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverageSim {
    /// Serving-link length (m); the serving BS sits at (r1, 0).
    pub r1: f64,
    /// Linear SINR threshold.
    pub threshold: f64,
    pub p_ms: f64,
    /// BSs closer than this radius are left out, as in the analysis.
    pub lower_bound_mode: LowerBoundMode,
    pub window_radius: f64,
    /// Add the mean absorption noise of BSs beyond the window as a constant.
    pub far_field: bool,
}

impl CoverageSim {
    pub fn new(r1: f64, threshold: f64, p_ms: f64) -> Self {
        Self {
            r1,
            threshold,
            p_ms,
            lower_bound_mode: LowerBoundMode::Theorem,
            window_radius: DEFAULT_WINDOW,
            far_field: true,
        }
    }

    fn validate(&self, deploy: &Deployment) -> Result<()> {
        if !(self.r1 >= 2.0 * deploy.r_b) {
            return Err(domain(format!("r1 = {} is below 2 r_b", self.r1)));
        }
        if !(self.threshold > 0.0) {
            return Err(domain("threshold must be > 0"));
        }
        if !(0.0..=1.0).contains(&self.p_ms) {
            return Err(domain(format!("p_ms must lie in [0, 1], got {}", self.p_ms)));
        }
        if !(self.window_radius * (1.0 - GUARD_FRACTION) > self.r1) {
            return Err(domain(format!("window {} too small for r1 = {}", self.window_radius, self.r1)));
        }
        Ok(())
    }
}

/// Coverage frequency at the default window and theorem lower bound, with
/// p_ms taken from the misalignment analysis of `ability`.
#[allow(clippy::too_many_arguments)]
pub fn estimate_coverage(
    deploy: &Deployment,
    budget: &LinkBudget,
    sys: &SystemParams,
    ability: &SensingAbility,
    r1: f64,
    threshold: f64,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    let p_ms = beam_misalignment(deploy, ability, sys.tau)?.p_ms;
    estimate_coverage_given_misalignment(deploy, budget, sys, &CoverageSim::new(r1, threshold, p_ms), trials, seed)
}

/// Stream offset separating obstacle draws from the BS layer of a trial.
const OBSTACLE_STREAM: u64 = 1 << 63;

/// Fraction of trials with aligned beams and SINR above the threshold.
///
/// Per trial the BS layer is drawn on the window. Each BS beyond the lower
/// bound adds absorption noise; it interferes when it is in its sweep phase
/// (or serving a misaligned MT), its beam points at the typical MT, it lies
/// inside the MT's beam (aimed at the serving BS) and its corridor is free of
/// BSs, MTs and blockers. Obstacles are only drawn when some BS passes the
/// beam tests. The pinned serving BS is an added point, not part of the
/// PPP, and does not act as an obstacle.
pub fn estimate_coverage_given_misalignment(
    deploy: &Deployment,
    budget: &LinkBudget,
    sys: &SystemParams,
    sim: &CoverageSim,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    require_trials(trials)?;
    deploy.validate()?;
    sim.validate(deploy)?;
    let lower = sim.lower_bound_mode.radius(deploy, sim.r1);
    let window = sim.window_radius;
    let share = budget.absorption_share();
    let signal = received_power(budget, sim.r1);
    let mut floor = effective_noise(budget, sys, sim.r1);
    if sim.far_field && budget.k > 0.0 {
        floor += 2.0 * PI * deploy.lambda_b * budget.a * share * exp_integral_e1(budget.k * window)?;
    }
    let sweep = beam_sweep_fraction(deploy, sys);
    let half_b = deploy.theta_b() / 2.0;
    let half_m = deploy.theta_m() / 2.0;

    let hits = count_hits(trials, |i| {
        let mut rng = trial_rng(seed, i);
        if rng.random::<f64>() < sim.p_ms {
            return false;
        }
        let n = poisson_count(&mut rng, deploy.lambda_b * PI * window * window);
        let mut bss = Vec::with_capacity(n);
        let mut candidates = Vec::new();
        let mut noise = floor;
        for _ in 0..n {
            let r = window * rng.random::<f64>().sqrt();
            let ang = PI * (2.0 * rng.random::<f64>() - 1.0);
            let p = [r * ang.cos(), r * ang.sin()];
            bss.push(p);
            if r < lower {
                continue;
            }
            let power = received_power(budget, r);
            noise += share * power;
            // MT beam aimed along +x at the serving BS
            if ang.abs() >= half_m {
                continue;
            }
            // the BS beam direction relative to the MT is uniform
            if PI * rng.random::<f64>() >= half_b {
                continue;
            }
            let u: f64 = rng.random();
            if u < sweep || rng.random::<f64>() < sim.p_ms {
                candidates.push((p, power));
            }
        }
        if !candidates.is_empty() {
            let mut orng = trial_rng(seed, i | OBSTACLE_STREAM);
            let scene = Scene {
                window_radius: window,
                guard: GUARD_FRACTION * window,
                bs_points: bss,
                mt_points: disc_ppp(&mut orng, deploy.lambda_m, window),
                blocker_points: disc_ppp(&mut orng, deploy.lambda_s, window),
                rng_seed: seed,
            };
            for &(p, power) in &candidates {
                if !is_blocked_by(&scene, p, ORIGIN, deploy, Obstacles::ALL) {
                    noise += power;
                }
            }
        }
        signal > sim.threshold * noise
    });
    McEstimate::from_counts(hits, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_scene_never_blocks() {
        let d = Deployment { lambda_b: 0.0, lambda_m: 0.0, lambda_s: 0.0, ..Deployment::default() };
        let s = sample_scene(&d, 100.0, 1).unwrap();
        assert!(s.bs_points.is_empty() && s.mt_points.is_empty() && s.blocker_points.is_empty());
        assert!(!is_blocked_by(&s, ORIGIN, [50.0, 0.0], &d, Obstacles::ALL));
    }

    #[test]
    fn midpoint_blocker() {
        let d = Deployment::default();
        let s = Scene {
            window_radius: 100.0,
            guard: 25.0,
            bs_points: vec![],
            mt_points: vec![],
            blocker_points: vec![[10.0, 10.0]],
            rng_seed: 0,
        };
        assert!(is_blocked(&s, ORIGIN, [20.0, 20.0], &d));
        assert!(!is_blocked(&s, ORIGIN, [20.0, -20.0], &d));
        // within r_b of an endpoint: outside the corridor
        assert!(!is_blocked(&s, [10.3, 10.0], [40.0, 10.0], &d));
    }

    #[test]
    fn endpoints_are_not_obstacles() {
        let d = Deployment::default();
        let s = Scene {
            window_radius: 100.0,
            guard: 25.0,
            bs_points: vec![[30.0, 0.0]],
            mt_points: vec![],
            blocker_points: vec![],
            rng_seed: 0,
        };
        assert!(!is_blocked_by(&s, ORIGIN, [30.0, 0.0], &d, Obstacles::ALL));
        assert!(is_blocked_by(&s, ORIGIN, [60.0, 0.0], &d, Obstacles::ALL));
        assert!(!is_blocked(&s, ORIGIN, [60.0, 0.0], &d));
    }

    #[test]
    fn seeds_are_deterministic() {
        let d = Deployment::default();
        assert_eq!(sample_scene(&d, 80.0, 7).unwrap(), sample_scene(&d, 80.0, 7).unwrap());
        assert_ne!(sample_scene(&d, 80.0, 7).unwrap(), sample_scene(&d, 80.0, 8).unwrap());
        assert_eq!(estimate_timeout(&d, 2000, 3).unwrap(), estimate_timeout(&d, 2000, 3).unwrap());
    }

    #[test]
    fn counts() {
        let e = McEstimate::from_counts(25, 100).unwrap();
        assert_eq!(e.mean, 0.25);
        assert!((e.std_error - (0.25f64 * 0.75 / 99.0).sqrt()).abs() < 1e-15);
        assert!(McEstimate::from_counts(3, 0).is_err());
        assert!(McEstimate::from_counts(3, 2).is_err());
        assert_eq!(McEstimate::from_counts(0, 10).unwrap().sigmas_off(0.0), 0.0);
    }

    #[test]
    fn no_obstacles_no_timeout() {
        let d = Deployment { lambda_m: 0.0, lambda_s: 0.0, ..Deployment::default() };
        assert_eq!(estimate_timeout(&d, 1000, 1).unwrap().mean, 0.0);
        assert_eq!(estimate_blockage(&d, 30.0, 1000, 1).unwrap().mean, 0.0);
    }
}
