//! Sweeps, baseline comparisons and CSV/markdown emission.

use std::fmt::Write as _;
use std::io::Write;

use crate::channel::LinkBudget;
use crate::config::{mps_to_kmh, Config, Deployment, SystemParams};
use crate::coverage::{
    coverage_given_misalignment, coverage_sweep, db_to_linear, CoverageQuery, CoverageResult, CoverageRow,
    LowerBoundMode, ShotNoiseField,
};
use crate::error::{invalid, Result};
use crate::mcsim::{estimate_coverage_given_misalignment, estimate_misalignment, BlockerSharing, CoverageSim, McEstimate};
use crate::misalignment::{beam_misalignment_given_timeout, timeout_probability, MisalignmentBreakdown};
use crate::scheme::Scheme;
use crate::sensing::{span_ability, ssb_ability, Bound, ResourceSpan, SensingAbility};
use crate::specfun::QuadratureSpec;

/// Formats with 6 significant digits, shortest plain representation.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let rounded: f64 = format!("{x:.5e}").parse().unwrap_or(x);
    format!("{rounded}")
}

fn bound_cell(b: Bound, scale: f64) -> String {
    b.value().map(|v| sig6(v * scale)).unwrap_or_default()
}

/// One line of the sensing-ability table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table2Row {
    /// "ssb" or "rs".
    pub signal: &'static str,
    pub u: u32,
    pub v: u32,
    pub b_s: f64,
    pub t_s: f64,
    pub f_c: f64,
    pub ability: SensingAbility,
}

pub const TABLE2_U: [u32; 2] = [2, 3];
pub const TABLE2_V: [u32; 2] = [1, 3];
pub const TABLE2_FC: [f64; 2] = [0.22e12, 1e12];
pub const TABLE2_BS: [f64; 2] = [0.1e9, 0.2e9];
pub const TABLE2_TS: [f64; 2] = [0.5e-3, 1e-3];

/// SSB row followed by every (U, V, f_c, B_s, T_s) combination of the
/// reference-signal grid.
pub fn emit_table2(sys: &SystemParams, deploy: &Deployment) -> Result<Vec<Table2Row>> {
    let theta_b = deploy.theta_b();
    let mut rows = vec![Table2Row {
        signal: "ssb",
        u: 1,
        v: 1,
        b_s: sys.b_ssb,
        t_s: sys.t_ssb,
        f_c: sys.f_c,
        ability: ssb_ability(sys, theta_b)?,
    }];
    for u in TABLE2_U {
        for v in TABLE2_V {
            for f_c in TABLE2_FC {
                let sys_f = SystemParams { f_c, ..*sys };
                for b_s in TABLE2_BS {
                    for t_s in TABLE2_TS {
                        let ability = span_ability(&ResourceSpan { u, v, b_s, t_s }, &sys_f, theta_b)?;
                        rows.push(Table2Row { signal: "rs", u, v, b_s, t_s, f_c, ability });
                    }
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_table2_csv<W: Write>(rows: &[Table2Row], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "signal",
        "U",
        "V",
        "B_s",
        "T_s",
        "f_c",
        "d_max_m",
        "delta_db_m",
        "delta_v_mps",
        "vmax_mps",
        "vmax_kmh",
    ])?;
    for r in rows {
        w.write_record([
            r.signal.to_string(),
            r.u.to_string(),
            r.v.to_string(),
            sig6(r.b_s),
            sig6(r.t_s),
            sig6(r.f_c),
            bound_cell(r.ability.d_max, 1.0),
            sig6(r.ability.delta_db),
            sig6(r.ability.delta_v),
            bound_cell(r.ability.v_max, 1.0),
            bound_cell(r.ability.v_max, mps_to_kmh(1.0)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Axis of a misalignment sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// BS and MT beam counts, varied together.
    NB,
    /// Reference-signal resource elements.
    NRs,
}

impl SweepAxis {
    pub fn name(&self) -> &'static str {
        match self {
            SweepAxis::NB => "n_b",
            SweepAxis::NRs => "n_rs",
        }
    }

    pub fn default_grid(&self) -> Vec<f64> {
        match self {
            SweepAxis::NB => vec![32.0, 64.0, 128.0, 256.0, 512.0],
            SweepAxis::NRs => vec![1e3, 1.5e3, 2e3, 5e3, 1e4, 2e4, 5e4, 1e5],
        }
    }

    /// `cfg` with this axis set to `value`.
    pub fn apply(&self, cfg: &Config, value: f64) -> Result<Config> {
        if !(value >= 1.0 && value.fract() == 0.0) {
            return Err(invalid(format!("{} must be a positive integer, got {value}", self.name())));
        }
        let mut c = *cfg;
        match self {
            SweepAxis::NB => {
                c.deployment.n_b = value as u32;
                c.deployment.n_m = value as u32;
                c.deployment.validate()?;
            }
            SweepAxis::NRs => {
                c.system.n_rs = value as u64;
                c.requirement.n_rs = value as u64;
                c.system.validate()?;
            }
        }
        Ok(c)
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "n_b" | "nb" => Ok(SweepAxis::NB),
            "n_rs" | "nrs" => Ok(SweepAxis::NRs),
            other => Err(invalid(format!("unknown sweep axis '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MisalignRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub scheme: Scheme,
    pub breakdown: MisalignmentBreakdown,
}

/// Misalignment breakdown of every scheme at every axis value.
pub fn misalign_sweep(cfg: &Config, axis: SweepAxis, values: &[f64], schemes: &[Scheme]) -> Result<Vec<MisalignRow>> {
    if values.is_empty() || schemes.is_empty() {
        return Err(invalid("misalignment sweep grids must be non-empty"));
    }
    // the timeout term only depends on densities and r_b, not on the axes
    let p_to = timeout_probability(&cfg.deployment)?;
    let mut rows = Vec::with_capacity(values.len() * schemes.len());
    for &value in values {
        let c = axis.apply(cfg, value)?;
        for &scheme in schemes {
            let ab = scheme.ability(&c)?;
            let breakdown = beam_misalignment_given_timeout(&c.deployment, &ab, c.system.tau, p_to)?;
            rows.push(MisalignRow { axis, value, scheme, breakdown });
        }
    }
    Ok(rows)
}

pub fn write_misalign_csv<W: Write>(rows: &[MisalignRow], mc: Option<&[McEstimate]>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["sweep_var", "value", "scheme", "p_err", "p_to", "p_ms"];
    if mc.is_some() {
        header.extend(["mc_mean", "mc_std_error", "sigmas_off"]);
    }
    w.write_record(&header)?;
    for (i, r) in rows.iter().enumerate() {
        let b = &r.breakdown;
        let mut rec =
            vec![r.axis.name().to_string(), sig6(r.value), r.scheme.name().to_string(), sig6(b.p_err), sig6(b.p_to), sig6(b.p_ms)];
        if let Some(mc) = mc {
            let e = &mc[i];
            rec.extend([sig6(e.mean), sig6(e.std_error), sig6(e.sigmas_off(b.p_ms))]);
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_coverage_csv<W: Write>(rows: &[CoverageRow], mc: Option<&[McEstimate]>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["scheme", "r1_m", "threshold_db", "p_ms", "p_cm", "p_cvp", "abs_err"];
    if mc.is_some() {
        header.extend(["mc_mean", "mc_std_error", "sigmas_off"]);
    }
    w.write_record(&header)?;
    for (i, r) in rows.iter().enumerate() {
        let c = &r.result;
        let mut rec = vec![
            r.scheme.name().to_string(),
            sig6(r.r1),
            sig6(r.threshold_db),
            sig6(c.p_ms),
            sig6(c.p_cm),
            sig6(c.p_cvp),
            sig6(c.integral_abs_error),
        ];
        if let Some(mc) = mc {
            let e = &mc[i];
            rec.extend([sig6(e.mean), sig6(e.std_error), sig6(e.sigmas_off(c.p_cvp))]);
        }
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

/// Monte-Carlo settings for annotating analytic rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McPlan {
    pub trials: u64,
    pub seed: u64,
    pub window_radius: f64,
}

fn row_seed(seed: u64, i: usize) -> u64 {
    seed.wrapping_add((i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Monte-Carlo counterpart of every misalignment row.
pub fn misalign_mc(cfg: &Config, rows: &[MisalignRow], plan: &McPlan) -> Result<Vec<McEstimate>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let c = r.axis.apply(cfg, r.value)?;
            let ab = r.scheme.ability(&c)?;
            estimate_misalignment(&c.deployment, &ab, c.system.tau, plan.trials, row_seed(plan.seed, i), BlockerSharing::PerLink)
        })
        .collect()
}

/// Monte-Carlo counterpart of every coverage row.
pub fn coverage_mc(cfg: &Config, rows: &[CoverageRow], mode: LowerBoundMode, plan: &McPlan) -> Result<Vec<McEstimate>> {
    let budget = LinkBudget::new(&cfg.system, &cfg.deployment)?;
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let sim = CoverageSim {
                lower_bound_mode: mode,
                window_radius: plan.window_radius,
                ..CoverageSim::new(r.r1, db_to_linear(r.threshold_db), r.result.p_ms)
            };
            estimate_coverage_given_misalignment(&cfg.deployment, &budget, &cfg.system, &sim, plan.trials, row_seed(plan.seed, i))
        })
        .collect()
}

/// (base − new)/base; zero when both vanish.
pub fn relative_reduction(base: f64, new: f64) -> f64 {
    if base == 0.0 {
        if new == 0.0 {
            0.0
        } else {
            f64::NEG_INFINITY
        }
    } else {
        (base - new) / base
    }
}

/// Coverage of JSRS and perfect sensing at one N_RS value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapRow {
    pub n_rs: f64,
    pub jsrs: CoverageResult,
    pub perfect: CoverageResult,
}

impl GapRow {
    pub fn gap(&self) -> f64 {
        self.perfect.p_cvp - self.jsrs.p_cvp
    }
}

/// Coverage gap between perfect sensing and JSRS along an N_RS sweep at one
/// (r1, threshold) point.
pub fn coverage_gap_sweep(
    cfg: &Config,
    n_rs_grid: &[f64],
    r1: f64,
    threshold_db: f64,
    mode: LowerBoundMode,
    spec: &QuadratureSpec,
) -> Result<Vec<GapRow>> {
    let deploy = &cfg.deployment;
    let sys = &cfg.system;
    let budget = LinkBudget::new(sys, deploy)?;
    let field = ShotNoiseField::new(&budget, deploy, mode.radius(deploy, r1))?;
    let p_to = timeout_probability(deploy)?;
    let eval = |c: &Config, scheme: Scheme| -> Result<CoverageResult> {
        let p_ms = beam_misalignment_given_timeout(deploy, &scheme.ability(c)?, sys.tau, p_to)?.p_ms;
        let query = CoverageQuery { integration: *spec, lower_bound_mode: mode, ..CoverageQuery::new(r1, db_to_linear(threshold_db), scheme) };
        coverage_given_misalignment(&query, &field, &budget, deploy, sys, p_ms)
    };
    let perfect = eval(cfg, Scheme::Perfect)?;
    n_rs_grid
        .iter()
        .map(|&n| {
            let c = SweepAxis::NRs.apply(cfg, n)?;
            Ok(GapRow { n_rs: n, jsrs: eval(&c, Scheme::Jsrs)?, perfect })
        })
        .collect()
}

/// What `run_compare` evaluates.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparePlan {
    pub nb_grid: Vec<f64>,
    pub nrs_grid: Vec<f64>,
    pub r1_grid: Vec<f64>,
    pub threshold_db_grid: Vec<f64>,
    pub lower_bound_mode: LowerBoundMode,
    /// (r1, threshold dB) of the N_RS coverage-gap sweep.
    pub gap_point: (f64, f64),
    /// N_RS from which the JSRS coverage should be near perfect sensing.
    pub gap_from_nrs: f64,
    pub spec: QuadratureSpec,
    pub mc: Option<McPlan>,
}

impl Default for ComparePlan {
    fn default() -> Self {
        Self {
            nb_grid: SweepAxis::NB.default_grid(),
            nrs_grid: SweepAxis::NRs.default_grid(),
            r1_grid: vec![10.0, 20.0, 40.0, 60.0, 80.0],
            threshold_db_grid: vec![0.0, 5.0, 10.0],
            lower_bound_mode: LowerBoundMode::Theorem,
            gap_point: (20.0, 5.0),
            gap_from_nrs: 1500.0,
            spec: crate::coverage::default_outer_spec(),
            mc: None,
        }
    }
}

impl ComparePlan {
    pub fn validate(&self) -> Result<()> {
        if self.nb_grid.is_empty() || self.r1_grid.is_empty() || self.threshold_db_grid.is_empty() {
            return Err(invalid("compare grids must be non-empty"));
        }
        Ok(())
    }
}

/// Headline numbers of a comparison, computed from the rows alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareSummary {
    /// Mean relative p_ms reduction of JSRS over the n_b sweep.
    pub ms_reduction_vs_5g: f64,
    pub ms_reduction_vs_ssb: f64,
    /// Mean relative p_cvp increase of JSRS over the coverage grid.
    pub cvp_increase_vs_5g: f64,
    pub cvp_increase_vs_ssb: f64,
    /// Mean and max of p_cvp(perfect) − p_cvp(jsrs) over the coverage grid.
    pub mean_gap: f64,
    pub max_gap: f64,
    /// Max gap along the N_RS sweep for N_RS at or above the plan's threshold.
    pub max_gap_above_nrs: f64,
    /// Grid points where perfect ≤ jsrs ≤ 5g (p_ms) or the reverse p_cvp
    /// order fails.
    pub ordering_violations: usize,
}

fn lookup<T: Copy>(rows: &[(Scheme, T)], s: Scheme) -> Option<T> {
    rows.iter().find(|(k, _)| *k == s).map(|(_, v)| *v)
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

impl CompareSummary {
    pub fn from_rows(misalign: &[MisalignRow], coverage: &[CoverageRow], gaps: &[GapRow], gap_from_nrs: f64) -> Self {
        const SLACK: f64 = 1e-12;
        let mut violations = 0;
        let (mut red_5g, mut red_ssb) = (Vec::new(), Vec::new());
        let mut keys: Vec<(SweepAxis, f64)> = Vec::new();
        for r in misalign {
            if !keys.iter().any(|k| k.0 == r.axis && k.1 == r.value) {
                keys.push((r.axis, r.value));
            }
        }
        for (axis, value) in keys {
            let at: Vec<(Scheme, f64)> = misalign
                .iter()
                .filter(|r| r.axis == axis && r.value == value)
                .map(|r| (r.scheme, r.breakdown.p_ms))
                .collect();
            let (p, j, g) = (lookup(&at, Scheme::Perfect), lookup(&at, Scheme::Jsrs), lookup(&at, Scheme::FiveG));
            if let (Some(p), Some(j)) = (p, j) {
                violations += (p > j + SLACK) as usize;
            }
            if let (Some(j), Some(g)) = (j, g) {
                violations += (j > g + SLACK) as usize;
            }
            if axis == SweepAxis::NB {
                if let (Some(j), Some(g)) = (j, g) {
                    red_5g.push(relative_reduction(g, j));
                }
                if let (Some(j), Some(s)) = (j, lookup(&at, Scheme::Ssb)) {
                    red_ssb.push(relative_reduction(s, j));
                }
            }
        }

        let (mut inc_5g, mut inc_ssb, mut gaps_cov) = (Vec::new(), Vec::new(), Vec::new());
        let mut points: Vec<(f64, f64)> = Vec::new();
        for r in coverage {
            if !points.iter().any(|k| k.0 == r.r1 && k.1 == r.threshold_db) {
                points.push((r.r1, r.threshold_db));
            }
        }
        for (r1, t) in points {
            let at: Vec<(Scheme, f64)> = coverage
                .iter()
                .filter(|r| r.r1 == r1 && r.threshold_db == t)
                .map(|r| (r.scheme, r.result.p_cvp))
                .collect();
            let (p, j, g) = (lookup(&at, Scheme::Perfect), lookup(&at, Scheme::Jsrs), lookup(&at, Scheme::FiveG));
            if let (Some(p), Some(j)) = (p, j) {
                violations += (p + SLACK < j) as usize;
                gaps_cov.push(p - j);
            }
            if let (Some(j), Some(g)) = (j, g) {
                violations += (j + SLACK < g) as usize;
                if g > 0.0 {
                    inc_5g.push((j - g) / g);
                }
            }
            if let (Some(j), Some(s)) = (j, lookup(&at, Scheme::Ssb)) {
                if s > 0.0 {
                    inc_ssb.push((j - s) / s);
                }
            }
        }
        let max_gap_above_nrs =
            gaps.iter().filter(|g| g.n_rs >= gap_from_nrs).map(GapRow::gap).fold(f64::NEG_INFINITY, f64::max);
        Self {
            ms_reduction_vs_5g: mean(&red_5g),
            ms_reduction_vs_ssb: mean(&red_ssb),
            cvp_increase_vs_5g: mean(&inc_5g),
            cvp_increase_vs_ssb: mean(&inc_ssb),
            mean_gap: mean(&gaps_cov),
            max_gap: gaps_cov.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            max_gap_above_nrs,
            ordering_violations: violations,
        }
    }
}

/// Everything `run_compare` produced.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareReport {
    pub plan: ComparePlan,
    pub misalign: Vec<MisalignRow>,
    pub coverage: Vec<CoverageRow>,
    pub gaps: Vec<GapRow>,
    pub misalign_mc: Option<Vec<McEstimate>>,
    pub coverage_mc: Option<Vec<McEstimate>>,
    pub summary: CompareSummary,
}

/// Per-scheme misalignment and coverage over the sweep, with the JSRS
/// reductions against the baselines and its gap to perfect sensing.
pub fn run_compare(cfg: &Config, plan: &ComparePlan) -> Result<CompareReport> {
    plan.validate()?;
    let schemes = Scheme::ALL;
    let mut misalign = misalign_sweep(cfg, SweepAxis::NB, &plan.nb_grid, &schemes)?;
    if !plan.nrs_grid.is_empty() {
        misalign.extend(misalign_sweep(cfg, SweepAxis::NRs, &plan.nrs_grid, &schemes)?);
    }
    let coverage = coverage_sweep(cfg, &plan.r1_grid, &plan.threshold_db_grid, &schemes, plan.lower_bound_mode, &plan.spec)?;
    let gaps = if plan.nrs_grid.is_empty() {
        Vec::new()
    } else {
        let (r1, t) = plan.gap_point;
        coverage_gap_sweep(cfg, &plan.nrs_grid, r1, t, plan.lower_bound_mode, &plan.spec)?
    };
    let (misalign_mc, coverage_mc) = match &plan.mc {
        Some(mc) => (
            Some(misalign_mc(cfg, &misalign, mc)?),
            Some(coverage_mc(cfg, &coverage, plan.lower_bound_mode, mc)?),
        ),
        None => (None, None),
    };
    let summary = CompareSummary::from_rows(&misalign, &coverage, &gaps, plan.gap_from_nrs);
    Ok(CompareReport { plan: plan.clone(), misalign, coverage, gaps, misalign_mc, coverage_mc, summary })
}

fn pct(x: f64) -> String {
    format!("{:.1}%", 100.0 * x)
}

impl CompareReport {
    /// Largest |sigmas_off| over all MC-annotated rows.
    pub fn max_abs_sigmas(&self) -> Option<f64> {
        let ms = self.misalign_mc.as_ref()?;
        let cv = self.coverage_mc.as_ref()?;
        let a = self.misalign.iter().zip(ms).map(|(r, e)| e.sigmas_off(r.breakdown.p_ms).abs());
        let b = self.coverage.iter().zip(cv).map(|(r, e)| e.sigmas_off(r.result.p_cvp).abs());
        Some(a.chain(b).fold(0.0, f64::max))
    }

    pub fn markdown(&self) -> String {
        let s = &self.summary;
        let mut o = String::new();
        let _ = writeln!(o, "# Scheme comparison\n");
        let _ = writeln!(o, "## Summary\n");
        let _ = writeln!(o, "| quantity | value |\n|---|---|");
        let _ = writeln!(o, "| mean p_ms reduction, JSRS vs 5G (n_b sweep) | {} |", pct(s.ms_reduction_vs_5g));
        let _ = writeln!(o, "| mean p_ms reduction, JSRS vs SSB (n_b sweep) | {} |", pct(s.ms_reduction_vs_ssb));
        let _ = writeln!(o, "| mean p_cvp increase, JSRS vs 5G | {} |", pct(s.cvp_increase_vs_5g));
        let _ = writeln!(o, "| mean p_cvp increase, JSRS vs SSB | {} |", pct(s.cvp_increase_vs_ssb));
        let _ = writeln!(o, "| mean p_cvp gap, perfect − JSRS | {} |", sig6(s.mean_gap));
        let _ = writeln!(o, "| max p_cvp gap, perfect − JSRS | {} |", sig6(s.max_gap));
        if !self.gaps.is_empty() {
            let (r1, t) = self.plan.gap_point;
            let _ = writeln!(
                o,
                "| max p_cvp gap for N_RS ≥ {} (r1 = {} m, T = {} dB) | {} |",
                self.plan.gap_from_nrs,
                r1,
                t,
                sig6(s.max_gap_above_nrs)
            );
        }
        let _ = writeln!(o, "| ordering violations | {} |", s.ordering_violations);
        if let Some(m) = self.max_abs_sigmas() {
            let _ = writeln!(o, "| max abs(sigmas_off) vs Monte Carlo | {} |", sig6(m));
        }

        let with_mc = self.misalign_mc.is_some();
        let _ = writeln!(o, "\n## Beam misalignment\n");
        let _ = write!(o, "| sweep | value | scheme | p_err | p_to | p_ms |");
        let _ = writeln!(o, "{}", if with_mc { " sigmas_off |\n|---|---|---|---|---|---|---|" } else { "\n|---|---|---|---|---|---|" });
        for (i, r) in self.misalign.iter().enumerate() {
            let b = &r.breakdown;
            let _ = write!(
                o,
                "| {} | {} | {} | {} | {} | {} |",
                r.axis.name(),
                sig6(r.value),
                r.scheme,
                sig6(b.p_err),
                sig6(b.p_to),
                sig6(b.p_ms)
            );
            match &self.misalign_mc {
                Some(mc) => {
                    let _ = writeln!(o, " {:.2} |", mc[i].sigmas_off(b.p_ms));
                }
                None => o.push('\n'),
            }
        }

        let _ = writeln!(o, "\n## Coverage ({} lower bound)\n", self.plan.lower_bound_mode.name());
        let _ = write!(o, "| r1 (m) | T (dB) | scheme | p_ms | p_cm | p_cvp |");
        let _ = writeln!(o, "{}", if with_mc { " sigmas_off |\n|---|---|---|---|---|---|---|" } else { "\n|---|---|---|---|---|---|" });
        for (i, r) in self.coverage.iter().enumerate() {
            let c = &r.result;
            let _ = write!(
                o,
                "| {} | {} | {} | {} | {} | {} |",
                sig6(r.r1),
                sig6(r.threshold_db),
                r.scheme,
                sig6(c.p_ms),
                sig6(c.p_cm),
                sig6(c.p_cvp)
            );
            match &self.coverage_mc {
                Some(mc) => {
                    let _ = writeln!(o, " {:.2} |", mc[i].sigmas_off(c.p_cvp));
                }
                None => o.push('\n'),
            }
        }

        if !self.gaps.is_empty() {
            let _ = writeln!(o, "\n## Coverage gap along N_RS\n");
            let _ = writeln!(o, "| N_RS | p_cvp jsrs | p_cvp perfect | gap |\n|---|---|---|---|");
            for g in &self.gaps {
                let _ = writeln!(o, "| {} | {} | {} | {} |", sig6(g.n_rs), sig6(g.jsrs.p_cvp), sig6(g.perfect.p_cvp), sig6(g.gap()));
            }
        }
        o
    }
}
