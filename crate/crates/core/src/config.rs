//! Parameter ingestion, validation and the absorption-coefficient table.

use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::pattern::PatternRequirement;

const SAMPLE_TABLE: &str = include_str!("../data/absorption_sample.csv");

pub fn dbm_to_watt(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

pub fn watt_to_dbm(w: f64) -> f64 {
    10.0 * w.log10() + 30.0
}

pub fn kmh_to_mps(kmh: f64) -> f64 {
    kmh / 3.6
}

pub fn mps_to_kmh(mps: f64) -> f64 {
    mps * 3.6
}

/// Waveform numerology and radio constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    pub f_c: f64,
    pub f_scs: f64,
    pub t_sym: f64,
    pub tau: f64,
    pub b_ssb: f64,
    pub t_ssb: f64,
    pub n_rs: u64,
    pub b_tot: f64,
    pub t_tot: f64,
    pub p_t: f64,
    pub thermal_noise_density: f64,
    /// Bandwidth over which thermal noise is integrated (defaults to `b_tot`).
    pub noise_bandwidth: f64,
    /// Absorption coefficient at `f_c` (1/m).
    pub k: f64,
}

impl Default for SystemParams {
    fn default() -> Self {
        let f_scs = 1.92e6;
        let f_c = 0.34e12;
        Self {
            f_c,
            f_scs,
            t_sym: 4.46e-6,
            tau: 20e-3,
            b_ssb: 240.0 * f_scs,
            t_ssb: 4.0 * 4.46e-6,
            n_rs: 5000,
            b_tot: 1e9,
            t_tot: 20e-3,
            p_t: dbm_to_watt(23.0),
            thermal_noise_density: dbm_to_watt(-174.0),
            noise_bandwidth: 1e9,
            k: AbsorptionTable::sample().absorption_at(f_c).expect("sample table covers default f_c"),
        }
    }
}

impl SystemParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("f_c", self.f_c),
            ("f_scs", self.f_scs),
            ("t_sym", self.t_sym),
            ("tau", self.tau),
            ("b_ssb", self.b_ssb),
            ("t_ssb", self.t_ssb),
            ("b_tot", self.b_tot),
            ("t_tot", self.t_tot),
            ("p_t", self.p_t),
            ("thermal_noise_density", self.thermal_noise_density),
            ("noise_bandwidth", self.noise_bandwidth),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be a finite value > 0, got {v}")));
            }
        }
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return Err(invalid(format!("k must be >= 0, got {}", self.k)));
        }
        if self.n_rs < 1 {
            return Err(invalid("n_rs must be >= 1"));
        }
        if self.b_ssb > self.b_tot {
            return Err(invalid(format!("b_ssb ({}) must not exceed b_tot ({})", self.b_ssb, self.b_tot)));
        }
        if self.t_ssb > self.tau {
            return Err(invalid(format!("t_ssb ({}) must not exceed tau ({})", self.t_ssb, self.tau)));
        }
        Ok(())
    }

    /// P_N^T in watts.
    pub fn thermal_noise_power(&self) -> f64 {
        self.thermal_noise_density * self.noise_bandwidth
    }
}

/// Stochastic-geometry scene parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deployment {
    pub lambda_b: f64,
    pub lambda_m: f64,
    pub lambda_s: f64,
    pub r_b: f64,
    pub n_b: u32,
    pub n_m: u32,
    pub v: f64,
}

impl Default for Deployment {
    fn default() -> Self {
        Self {
            lambda_b: 2e-3,
            lambda_m: 5e-3,
            lambda_s: 1.5e-2,
            r_b: 0.5,
            n_b: 128,
            n_m: 128,
            v: kmh_to_mps(70.0),
        }
    }
}

impl Deployment {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("lambda_b", self.lambda_b), ("lambda_m", self.lambda_m), ("lambda_s", self.lambda_s)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(invalid(format!("{name} must be >= 0, got {v}")));
            }
        }
        if !(self.r_b > 0.0 && self.r_b.is_finite()) {
            return Err(invalid(format!("r_b must be > 0, got {}", self.r_b)));
        }
        if self.n_b < 4 {
            return Err(invalid(format!("n_b must be >= 4 so that theta_b < pi/2, got {}", self.n_b)));
        }
        if self.n_m < 4 {
            return Err(invalid(format!("n_m must be >= 4 so that theta_m < pi/2, got {}", self.n_m)));
        }
        if !(self.v >= 0.0 && self.v.is_finite()) {
            return Err(invalid(format!("v must be >= 0, got {}", self.v)));
        }
        Ok(())
    }

    pub fn theta_b(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_b as f64
    }

    pub fn theta_m(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.n_m as f64
    }

    /// λ_S + λ_M: obstacles that can block a serving link.
    pub fn lambda_obstacle(&self) -> f64 {
        self.lambda_s + self.lambda_m
    }

    /// λ_B + λ_M + λ_S: obstacles that can block an interfering link.
    pub fn lambda_total(&self) -> f64 {
        self.lambda_b + self.lambda_m + self.lambda_s
    }
}

/// Frequency-indexed absorption coefficients, linearly interpolated.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable {
    rows: Vec<(f64, f64)>,
}

impl AbsorptionTable {
    pub fn new(rows: Vec<(f64, f64)>) -> Result<Self> {
        if rows.is_empty() {
            return Err(invalid("absorption table is empty"));
        }
        for w in rows.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(invalid(format!(
                    "absorption table frequencies must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if let Some(&(f, k)) = rows.iter().find(|(f, k)| !(*k >= 0.0) || !f.is_finite()) {
            return Err(invalid(format!("absorption table row ({f}, {k}) needs finite frequency and K >= 0")));
        }
        Ok(Self { rows })
    }

    /// Reads a two-column CSV with header `frequency_hz,k_per_m`; `#` starts a comment.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers()?.clone();
        if headers.len() != 2 || &headers[0] != "frequency_hz" || &headers[1] != "k_per_m" {
            return Err(Error::Parse(format!("absorption table header must be frequency_hz,k_per_m, got {:?}", headers)));
        }
        let mut rows = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let parse = |i: usize| -> Result<f64> {
                rec[i].parse::<f64>().map_err(|e| Error::Parse(format!("absorption table value {:?}: {e}", &rec[i])))
            };
            rows.push((parse(0)?, parse(1)?));
        }
        Self::new(rows)
    }

    pub fn from_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    /// The bundled synthetic table (illustrative values only).
    pub fn sample() -> Self {
        Self::from_reader(SAMPLE_TABLE.as_bytes()).expect("bundled table parses")
    }

    pub fn rows(&self) -> &[(f64, f64)] {
        &self.rows
    }

    pub fn absorption_at(&self, f: f64) -> Result<f64> {
        absorption_at(self, f)
    }
}

/// Linear interpolation of K at frequency `f`; no extrapolation.
pub fn absorption_at(table: &AbsorptionTable, f: f64) -> Result<f64> {
    let rows = &table.rows;
    let (lo, hi) = (rows[0].0, rows[rows.len() - 1].0);
    if !(f >= lo && f <= hi) {
        return Err(Error::OutOfRange(f, lo, hi));
    }
    let i = rows.partition_point(|&(x, _)| x <= f);
    if i == 0 {
        return Ok(rows[0].1);
    }
    let (f0, k0) = rows[i - 1];
    if f == f0 || i == rows.len() {
        return Ok(k0);
    }
    let (f1, k1) = rows[i];
    let t = (f - f0) / (f1 - f0);
    Ok(k0 + t * (k1 - k0))
}

/// Everything a run needs: radio constants, scene and sensing requirement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub system: SystemParams,
    pub deployment: Deployment,
    pub requirement: PatternRequirement,
}

impl Default for Config {
    fn default() -> Self {
        let system = SystemParams::default();
        let deployment = Deployment::default();
        Self {
            requirement: PatternRequirement { d_max_req: 78.1, v_max_req: deployment.v, n_rs: system.n_rs },
            system,
            deployment,
        }
    }
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    #[serde(default)]
    system: RawSystem,
    #[serde(default)]
    deployment: RawDeployment,
    #[serde(default)]
    requirement: RawRequirement,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawSystem {
    f_c: Option<f64>,
    f_scs: Option<f64>,
    t_sym: Option<f64>,
    tau: Option<f64>,
    b_ssb: Option<f64>,
    t_ssb: Option<f64>,
    n_rs: Option<u64>,
    b_tot: Option<f64>,
    t_tot: Option<f64>,
    p_t: Option<f64>,
    p_t_dbm: Option<f64>,
    thermal_noise_density: Option<f64>,
    thermal_noise_density_dbm: Option<f64>,
    noise_bandwidth: Option<f64>,
    k: Option<f64>,
    absorption_table: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawDeployment {
    lambda_b: Option<f64>,
    lambda_m: Option<f64>,
    lambda_s: Option<f64>,
    r_b: Option<f64>,
    n_b: Option<u32>,
    n_m: Option<u32>,
    v: Option<f64>,
    v_kmh: Option<f64>,
}

#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
struct RawRequirement {
    d_max_req: Option<f64>,
    v_max_req: Option<f64>,
}

fn either(si: Option<f64>, alt: Option<f64>, convert: fn(f64) -> f64, name: &str, alt_name: &str) -> Result<Option<f64>> {
    match (si, alt) {
        (Some(_), Some(_)) => Err(invalid(format!("give either {name} or {alt_name}, not both"))),
        (Some(v), None) => Ok(Some(v)),
        (None, Some(v)) => Ok(Some(convert(v))),
        (None, None) => Ok(None),
    }
}

/// Parses config text. Relative table paths resolve against `base_dir`.
pub fn parse_config(text: &str, base_dir: Option<&Path>) -> Result<Config> {
    let raw: RawFile = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let d = Config::default();
    let s = raw.system;
    let f_c = s.f_c.unwrap_or(d.system.f_c);
    let f_scs = s.f_scs.unwrap_or(d.system.f_scs);
    let b_tot = s.b_tot.unwrap_or(d.system.b_tot);
    let k = match (s.k, s.absorption_table) {
        (Some(_), Some(_)) => return Err(invalid("give either k or absorption_table, not both")),
        (Some(k), None) => k,
        (None, Some(path)) => {
            let path = match base_dir {
                Some(dir) if path.is_relative() => dir.join(path),
                _ => path,
            };
            AbsorptionTable::from_csv(&path)?.absorption_at(f_c)?
        }
        (None, None) => AbsorptionTable::sample().absorption_at(f_c)?,
    };
    let system = SystemParams {
        f_c,
        f_scs,
        t_sym: s.t_sym.unwrap_or(d.system.t_sym),
        tau: s.tau.unwrap_or(d.system.tau),
        b_ssb: s.b_ssb.unwrap_or(240.0 * f_scs),
        t_ssb: s.t_ssb.unwrap_or(d.system.t_ssb),
        n_rs: s.n_rs.unwrap_or(d.system.n_rs),
        b_tot,
        t_tot: s.t_tot.unwrap_or(d.system.t_tot),
        p_t: either(s.p_t, s.p_t_dbm, dbm_to_watt, "p_t", "p_t_dbm")?.unwrap_or(d.system.p_t),
        thermal_noise_density: either(
            s.thermal_noise_density,
            s.thermal_noise_density_dbm,
            dbm_to_watt,
            "thermal_noise_density",
            "thermal_noise_density_dbm",
        )?
        .unwrap_or(d.system.thermal_noise_density),
        noise_bandwidth: s.noise_bandwidth.unwrap_or(b_tot),
        k,
    };
    system.validate()?;

    let r = raw.deployment;
    let deployment = Deployment {
        lambda_b: r.lambda_b.unwrap_or(d.deployment.lambda_b),
        lambda_m: r.lambda_m.unwrap_or(d.deployment.lambda_m),
        lambda_s: r.lambda_s.unwrap_or(d.deployment.lambda_s),
        r_b: r.r_b.unwrap_or(d.deployment.r_b),
        n_b: r.n_b.unwrap_or(d.deployment.n_b),
        n_m: r.n_m.unwrap_or(d.deployment.n_m),
        v: either(r.v, r.v_kmh, kmh_to_mps, "v", "v_kmh")?.unwrap_or(d.deployment.v),
    };
    deployment.validate()?;
    if deployment.n_b as f64 * system.t_ssb > system.tau {
        return Err(invalid(format!(
            "beam sweep n_b * t_ssb = {} s exceeds the SSB period tau = {} s",
            deployment.n_b as f64 * system.t_ssb,
            system.tau
        )));
    }

    let requirement = PatternRequirement {
        d_max_req: raw.requirement.d_max_req.unwrap_or(d.requirement.d_max_req),
        v_max_req: raw.requirement.v_max_req.unwrap_or(deployment.v),
        n_rs: system.n_rs,
    };
    requirement.validate()?;
    Ok(Config { system, deployment, requirement })
}

/// Loads and validates a config file; absent keys take the default values.
pub fn load_config(path: impl AsRef<Path>) -> Result<Config> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_config(&text, path.parent())
}

impl Config {
    /// Serializes every parameter in SI units; reloading yields the same values.
    pub fn to_toml_string(&self) -> String {
        let s = &self.system;
        let d = &self.deployment;
        let raw = RawFile {
            system: RawSystem {
                f_c: Some(s.f_c),
                f_scs: Some(s.f_scs),
                t_sym: Some(s.t_sym),
                tau: Some(s.tau),
                b_ssb: Some(s.b_ssb),
                t_ssb: Some(s.t_ssb),
                n_rs: Some(s.n_rs),
                b_tot: Some(s.b_tot),
                t_tot: Some(s.t_tot),
                p_t: Some(s.p_t),
                thermal_noise_density: Some(s.thermal_noise_density),
                noise_bandwidth: Some(s.noise_bandwidth),
                k: Some(s.k),
                ..Default::default()
            },
            deployment: RawDeployment {
                lambda_b: Some(d.lambda_b),
                lambda_m: Some(d.lambda_m),
                lambda_s: Some(d.lambda_s),
                r_b: Some(d.r_b),
                n_b: Some(d.n_b),
                n_m: Some(d.n_m),
                v: Some(d.v),
                v_kmh: None,
            },
            requirement: RawRequirement {
                d_max_req: Some(self.requirement.d_max_req),
                v_max_req: Some(self.requirement.v_max_req),
            },
        };
        toml::to_string(&raw).expect("plain numeric tables serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config("", None).unwrap();
        assert_eq!(c, Config::default());
        assert_eq!(c.system.f_c, 0.34e12);
        assert_eq!(c.deployment.n_b, 128);
        assert_eq!(c.system.n_rs, 5000);
        assert_relative_eq!(c.system.p_t, 0.199_526_231_496_887_9, max_relative = 1e-12);
        assert_relative_eq!(c.system.thermal_noise_power(), 3.981_071_705_534_97e-12, max_relative = 1e-12);
        assert_relative_eq!(c.deployment.v, 19.444_444_444_444_443, max_relative = 1e-12);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(matches!(parse_config("[deployment]\nn_b = 2\n", None), Err(Error::Validation(_))));
        assert!(matches!(parse_config("[deployment]\nlambda_b = -1.0\n", None), Err(Error::Validation(_))));
        assert!(matches!(parse_config("[system]\nt_ssb = 1.0\n", None), Err(Error::Validation(_))));
        assert!(matches!(parse_config("[system]\np_t = 1.0\np_t_dbm = 30.0\n", None), Err(Error::Validation(_))));
        assert!(matches!(parse_config("[system]\nbogus = 1.0\n", None), Err(Error::Parse(_))));
        assert!(matches!(parse_config("[system\n", None), Err(Error::Parse(_))));
    }

    #[test]
    fn unit_suffixes() {
        let c = parse_config("[system]\np_t_dbm = 30.0\n[deployment]\nv_kmh = 36.0\n", None).unwrap();
        assert_relative_eq!(c.system.p_t, 1.0, max_relative = 1e-12);
        assert_relative_eq!(c.deployment.v, 10.0, max_relative = 1e-12);
        assert_relative_eq!(c.requirement.v_max_req, 10.0, max_relative = 1e-12);
    }

    #[test]
    fn round_trip() {
        let c = parse_config("[system]\nf_c = 1e12\nk = 0.02\n[deployment]\nn_b = 64\nv_kmh = 50\n", None).unwrap();
        let again = parse_config(&c.to_toml_string(), None).unwrap();
        assert_eq!(c, again);
    }

    #[test]
    fn table_interpolation() {
        let t = AbsorptionTable::new(vec![(1.0, 0.002), (3.0, 0.004), (5.0, 0.001)]).unwrap();
        assert_eq!(t.absorption_at(3.0).unwrap(), 0.004);
        assert_eq!(t.absorption_at(1.0).unwrap(), 0.002);
        assert_eq!(t.absorption_at(5.0).unwrap(), 0.001);
        assert_relative_eq!(t.absorption_at(2.0).unwrap(), 0.003, max_relative = 1e-12);
        assert!(matches!(t.absorption_at(0.5), Err(Error::OutOfRange(..))));
        assert!(t.absorption_at(5.5).is_err());
        assert!(AbsorptionTable::new(vec![(2.0, 0.1), (1.0, 0.2)]).is_err());
        assert!(AbsorptionTable::new(vec![(1.0, -0.1)]).is_err());
    }

    #[test]
    fn sample_table_loads() {
        let t = AbsorptionTable::sample();
        assert_eq!(t.rows().len(), 5);
        assert_eq!(t.absorption_at(0.34e12).unwrap(), 0.004);
    }

    #[test]
    fn table_from_file_relative_to_config() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("k.csv"), "frequency_hz,k_per_m\n1e11,0.01\n1e12,0.02\n").unwrap();
        std::fs::write(dir.path().join("c.toml"), "[system]\nf_c = 5.5e11\nabsorption_table = \"k.csv\"\n").unwrap();
        let c = load_config(dir.path().join("c.toml")).unwrap();
        assert_relative_eq!(c.system.k, 0.015, max_relative = 1e-12);
    }
}
