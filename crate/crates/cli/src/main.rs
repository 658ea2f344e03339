use std::fs::File;
use std::hash::Hasher;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use fnv::FnvHasher;

use isac_thz_core::channel::LinkBudget;
use isac_thz_core::coverage::{coverage_sweep, db_to_linear, default_outer_spec, CoverageQuery, LowerBoundMode};
use isac_thz_core::mcsim::{self, BlockerSharing, CoverageSim, McEstimate};
use isac_thz_core::misalignment::{beam_misalignment, blockage_probability, timeout_probability};
use isac_thz_core::pattern::{brute_force_search, objective, optimal_allocation, PatternRequirement};
use isac_thz_core::report::{self, sig6, ComparePlan, McPlan, SweepAxis};
use isac_thz_core::sensing::{sensing_ability, SensingPattern};
use isac_thz_core::{load_config, Config, Error, Scheme};

/// Sensing-aided THz network analysis: sensing abilities, pattern design,
/// beam misalignment and coverage, with Monte-Carlo checks.
#[derive(Parser, Debug)]
#[command(name = "isac-thz", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    #[command(flatten)]
    global: Global,
}

#[derive(Args, Debug)]
struct Global {
    /// TOML configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output file (CSV, or markdown for `compare`); stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,

    /// Monte-Carlo trials per estimate.
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: u64,

    /// Exit with status 4 when Monte Carlo disagrees with the analysis.
    #[arg(long, global = true)]
    strict: bool,

    /// Annotate analytic rows with Monte-Carlo estimates.
    #[arg(long, global = true)]
    with_mc: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sensing abilities of SSBs and the reference-signal grid.
    Abilities,
    /// Optimal reference-signal pattern for a range/velocity requirement.
    Pattern {
        /// Required unambiguous range (m).
        #[arg(long)]
        d_max_req: Option<f64>,
        /// Required unambiguous velocity (m/s).
        #[arg(long)]
        v_max_req: Option<f64>,
        #[arg(long)]
        n_rs: Option<u64>,
        /// Check against an exhaustive search and report the gap.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 10_000)]
        grid: usize,
    },
    /// Beam misalignment per scheme along n_b or N_RS.
    Misalign {
        #[arg(long, default_value = "n_b")]
        sweep: String,
        /// Comma-separated sweep values; the axis default grid when omitted.
        #[arg(long, value_delimiter = ',')]
        values: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "perfect,jsrs,5g,ssb")]
        schemes: Vec<String>,
    },
    /// Coverage probability over r1 × threshold × scheme.
    Coverage {
        #[arg(long, value_delimiter = ',', default_value = "10,20,40,60,80")]
        r1_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "0,5,10")]
        threshold_db_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',', default_value = "perfect,jsrs,5g,ssb")]
        schemes: Vec<String>,
        #[arg(long, value_enum, default_value_t = Lower::Theorem)]
        lower_bound: Lower,
        #[arg(long, default_value_t = mcsim::DEFAULT_WINDOW)]
        window_m: f64,
    },
    /// One Monte-Carlo estimate next to its analytic value.
    Simulate {
        #[arg(long, value_enum)]
        what: What,
        #[arg(long, default_value_t = mcsim::DEFAULT_WINDOW)]
        window_m: f64,
        /// Link length for `blockage` (m).
        #[arg(long, default_value_t = 52.0)]
        r: f64,
        #[arg(long, default_value_t = 20.0)]
        r1: f64,
        #[arg(long, default_value_t = 5.0)]
        threshold_db: f64,
        #[arg(long, default_value = "jsrs")]
        scheme: String,
        #[arg(long, value_enum, default_value_t = Lower::Theorem)]
        lower_bound: Lower,
        #[arg(long, value_enum, default_value_t = Sharing::PerLink)]
        sharing: Sharing,
    },
    /// Markdown comparison of all schemes with the JSRS reductions.
    Compare {
        #[arg(long, value_delimiter = ',')]
        nb_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        nrs_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        r1_grid: Vec<f64>,
        #[arg(long, value_delimiter = ',')]
        threshold_db_grid: Vec<f64>,
        #[arg(long, value_enum, default_value_t = Lower::Theorem)]
        lower_bound: Lower,
        #[arg(long, default_value_t = mcsim::DEFAULT_WINDOW)]
        window_m: f64,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Lower {
    Theorem,
    Derivation,
}

impl From<Lower> for LowerBoundMode {
    fn from(l: Lower) -> Self {
        match l {
            Lower::Theorem => LowerBoundMode::Theorem,
            Lower::Derivation => LowerBoundMode::Derivation,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum What {
    Blockage,
    Timeout,
    Misalign,
    Coverage,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Sharing {
    PerLink,
    Shared,
}

/// Why the run failed, mapped to the process exit status.
enum Failure {
    Core(Error),
    Usage(String),
    Disagreement(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(Error::NonConvergence { .. } | Error::Numerical(_)) => 3,
            Failure::Disagreement(_) => 4,
            _ => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Usage(m) => f.write_str(m),
            Failure::Disagreement(m) => write!(f, "Monte Carlo disagrees with the analysis: {m}"),
        }
    }
}

/// |analytic − MC| beyond 3σ, or for coverage beyond max(3σ, 0.02).
const SIGMA_LIMIT: f64 = 3.0;
const COVERAGE_FLOOR: f64 = 0.02;

fn disagrees(e: &McEstimate, analytic: f64, floor: f64) -> bool {
    let d = (analytic - e.mean).abs();
    d > (SIGMA_LIMIT * e.std_error).max(floor)
}

fn open_out(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(io::BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn parse_schemes(names: &[String]) -> Result<Vec<Scheme>, Failure> {
    names.iter().map(|n| n.parse::<Scheme>().map_err(Failure::from)).collect()
}

fn params_hash(cfg: &Config, extra: &str) -> String {
    let mut h = FnvHasher::default();
    h.write(cfg.to_toml_string().as_bytes());
    h.write(extra.as_bytes());
    format!("{:016x}", h.finish())
}

fn mc_plan(g: &Global, window: f64) -> McPlan {
    McPlan { trials: g.trials, seed: g.seed, window_radius: window }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let g = &cli.global;
    let cfg = match &g.config {
        Some(p) => load_config(p)?,
        None => Config::default(),
    };
    let out = g.out.as_deref();
    match cli.command {
        Command::Abilities => {
            let rows = report::emit_table2(&cfg.system, &cfg.deployment)?;
            report::write_table2_csv(&rows, open_out(out)?)?;
        }
        Command::Pattern { d_max_req, v_max_req, n_rs, verify, grid } => {
            let req = PatternRequirement {
                d_max_req: d_max_req.unwrap_or(cfg.requirement.d_max_req),
                v_max_req: v_max_req.unwrap_or(cfg.requirement.v_max_req),
                n_rs: n_rs.unwrap_or(cfg.system.n_rs),
            };
            req.validate()?;
            pattern_row(&cfg, &req, verify, grid, out)?;
        }
        Command::Misalign { sweep, values, schemes } => {
            let axis: SweepAxis = sweep.parse()?;
            let values = if values.is_empty() { axis.default_grid() } else { values };
            let rows = report::misalign_sweep(&cfg, axis, &values, &parse_schemes(&schemes)?)?;
            let mc = if g.with_mc { Some(report::misalign_mc(&cfg, &rows, &mc_plan(g, mcsim::DEFAULT_WINDOW))?) } else { None };
            report::write_misalign_csv(&rows, mc.as_deref(), open_out(out)?)?;
            if let (true, Some(mc)) = (g.strict, &mc) {
                let bad = rows.iter().zip(mc).filter(|(r, e)| disagrees(e, r.breakdown.p_ms, 0.0)).count();
                if bad > 0 {
                    return Err(Failure::Disagreement(format!("{bad} misalignment rows beyond {SIGMA_LIMIT} sigma")));
                }
            }
        }
        Command::Coverage { r1_grid, threshold_db_grid, schemes, lower_bound, window_m } => {
            let mode = LowerBoundMode::from(lower_bound);
            let rows =
                coverage_sweep(&cfg, &r1_grid, &threshold_db_grid, &parse_schemes(&schemes)?, mode, &default_outer_spec())?;
            let mc = if g.with_mc { Some(report::coverage_mc(&cfg, &rows, mode, &mc_plan(g, window_m))?) } else { None };
            report::write_coverage_csv(&rows, mc.as_deref(), open_out(out)?)?;
            if let (true, Some(mc)) = (g.strict, &mc) {
                let bad = rows.iter().zip(mc).filter(|(r, e)| disagrees(e, r.result.p_cvp, COVERAGE_FLOOR)).count();
                if bad > 0 {
                    return Err(Failure::Disagreement(format!("{bad} coverage rows")));
                }
            }
        }
        Command::Simulate { what, window_m, r, r1, threshold_db, scheme, lower_bound, sharing } => {
            let sharing = match sharing {
                Sharing::PerLink => BlockerSharing::PerLink,
                Sharing::Shared => BlockerSharing::Shared,
            };
            let scheme: Scheme = scheme.parse()?;
            let d = &cfg.deployment;
            let sys = &cfg.system;
            let (name, extra, est, analytic, floor) = match what {
                What::Blockage => (
                    "blockage",
                    format!("r={r}"),
                    mcsim::estimate_blockage(d, r, g.trials, g.seed)?,
                    blockage_probability(d, r)?,
                    0.0,
                ),
                What::Timeout => (
                    "timeout",
                    format!("{sharing:?}"),
                    mcsim::estimate_timeout_with(d, g.trials, g.seed, sharing)?,
                    timeout_probability(d)?,
                    0.0,
                ),
                What::Misalign => {
                    let ab = scheme.ability(&cfg)?;
                    (
                        "misalign",
                        format!("{scheme} {sharing:?}"),
                        mcsim::estimate_misalignment(d, &ab, sys.tau, g.trials, g.seed, sharing)?,
                        beam_misalignment(d, &ab, sys.tau)?.p_ms,
                        0.0,
                    )
                }
                What::Coverage => {
                    let mode = LowerBoundMode::from(lower_bound);
                    let budget = LinkBudget::new(sys, d)?;
                    let ab = scheme.ability(&cfg)?;
                    let query = CoverageQuery { lower_bound_mode: mode, ..CoverageQuery::new(r1, db_to_linear(threshold_db), scheme) };
                    let an = isac_thz_core::coverage::coverage_probability(&query, &budget, d, sys, &ab)?;
                    let sim = CoverageSim {
                        lower_bound_mode: mode,
                        window_radius: window_m,
                        ..CoverageSim::new(r1, db_to_linear(threshold_db), an.p_ms)
                    };
                    (
                        "coverage",
                        format!("{scheme} r1={r1} t={threshold_db} {} w={window_m}", mode.name()),
                        mcsim::estimate_coverage_given_misalignment(d, &budget, sys, &sim, g.trials, g.seed)?,
                        an.p_cvp,
                        COVERAGE_FLOOR,
                    )
                }
            };
            let mut w = csv::Writer::from_writer(open_out(out)?);
            w.write_record(["quantity", "params_hash", "mean", "std_error", "trials", "analytic_value", "sigmas_off"])
                .map_err(Error::from)?;
            w.write_record([
                name.to_string(),
                params_hash(&cfg, &format!("{extra} seed={}", g.seed)),
                sig6(est.mean),
                sig6(est.std_error),
                est.trials.to_string(),
                sig6(analytic),
                sig6(est.sigmas_off(analytic)),
            ])
            .map_err(Error::from)?;
            w.flush()?;
            if g.strict && disagrees(&est, analytic, floor) {
                return Err(Failure::Disagreement(format!("{name}: {} vs {analytic}", est.mean)));
            }
        }
        Command::Compare { nb_grid, nrs_grid, r1_grid, threshold_db_grid, lower_bound, window_m } => {
            let mut plan = ComparePlan { lower_bound_mode: lower_bound.into(), ..ComparePlan::default() };
            if !nb_grid.is_empty() {
                plan.nb_grid = nb_grid;
            }
            if !nrs_grid.is_empty() {
                plan.nrs_grid = nrs_grid;
            }
            if !r1_grid.is_empty() {
                plan.r1_grid = r1_grid;
            }
            if !threshold_db_grid.is_empty() {
                plan.threshold_db_grid = threshold_db_grid;
            }
            if g.with_mc {
                plan.mc = Some(mc_plan(g, window_m));
            }
            let rep = report::run_compare(&cfg, &plan)?;
            if let Some(path) = out {
                let stem = path.with_extension("");
                let side = |suffix: &str| PathBuf::from(format!("{}_{suffix}.csv", stem.display()));
                report::write_misalign_csv(&rep.misalign, rep.misalign_mc.as_deref(), File::create(side("misalign"))?)?;
                report::write_coverage_csv(&rep.coverage, rep.coverage_mc.as_deref(), File::create(side("coverage"))?)?;
            }
            open_out(out)?.write_all(rep.markdown().as_bytes())?;
            if g.strict {
                let bad_ms = match &rep.misalign_mc {
                    Some(mc) => rep.misalign.iter().zip(mc).filter(|(r, e)| disagrees(e, r.breakdown.p_ms, 0.0)).count(),
                    None => 0,
                };
                let bad_cv = match &rep.coverage_mc {
                    Some(mc) => rep.coverage.iter().zip(mc).filter(|(r, e)| disagrees(e, r.result.p_cvp, COVERAGE_FLOOR)).count(),
                    None => 0,
                };
                if bad_ms + bad_cv > 0 {
                    return Err(Failure::Disagreement(format!("{bad_ms} misalignment and {bad_cv} coverage rows")));
                }
            }
        }
    }
    Ok(())
}

fn pattern_row(cfg: &Config, req: &PatternRequirement, verify: bool, grid: usize, out: Option<&Path>) -> Result<(), Failure> {
    let sys = isac_thz_core::SystemParams { n_rs: req.n_rs, ..cfg.system };
    let theta_b = cfg.deployment.theta_b();
    let alloc = optimal_allocation(req, &sys, theta_b)?;
    let pat = SensingPattern::from_allocation(alloc.alpha, alloc.u, alloc.v, &sys)?;
    let ab = sensing_ability(&pat, &sys, theta_b)?;
    let mut header = vec![
        "alpha", "U", "V", "N_s", "N_f", "B_s", "T_s", "delta_r_m", "delta_db_m", "delta_v_mps", "d_max_m", "vmax_mps",
        "vmax_kmh", "clamped",
    ];
    let mut rec = vec![
        sig6(pat.alpha),
        pat.u.to_string(),
        pat.v.to_string(),
        pat.n_s.to_string(),
        pat.n_f.to_string(),
        sig6(pat.b_s),
        sig6(pat.t_s),
        sig6(ab.delta_r),
        sig6(ab.delta_db),
        sig6(ab.delta_v),
        ab.d_max.value().map(sig6).unwrap_or_default(),
        ab.v_max.value().map(sig6).unwrap_or_default(),
        ab.v_max.value().map(|v| sig6(isac_thz_core::config::mps_to_kmh(v))).unwrap_or_default(),
        alloc.clamped.to_string(),
    ];
    if verify {
        let (a, u, v) = brute_force_search(req, &sys, theta_b, grid)?;
        let gap = objective(a, u, v, &sys, theta_b)? - objective(alloc.alpha, alloc.u, alloc.v, &sys, theta_b)?;
        header.extend(["bf_alpha", "bf_U", "bf_V", "objective_gap"]);
        rec.extend([sig6(a), u.to_string(), v.to_string(), sig6(gap)]);
        if (u, v) != (alloc.u, alloc.v) || (a - alloc.alpha).abs() > 1e-3 {
            eprintln!("warning: exhaustive search disagrees: alpha {a}, U {u}, V {v}");
        }
    }
    let mut w = csv::Writer::from_writer(open_out(out)?);
    w.write_record(&header).map_err(Error::from)?;
    w.write_record(&rec).map_err(Error::from)?;
    w.flush()?;
    Ok(())
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("ISAC_THZ_THREADS") {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("ISAC_THZ_THREADS must be a positive integer, got '{v}'")))?;
        if n == 0 {
            return Err(Failure::Usage("ISAC_THZ_THREADS must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
