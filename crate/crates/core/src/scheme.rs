//! Sensing schemes compared in the analysis.

use std::fmt;
use std::str::FromStr;

use crate::config::Config;
use crate::error::{invalid, Error, Result};
use crate::pattern::optimal_pattern;
use crate::sensing::{baseline_5g_ability, perfect_ability, sensing_ability, ssb_ability, SensingAbility};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    /// Joint SSB and reference-signal sensing with the optimal pattern.
    Jsrs,
    Perfect,
    FiveG,
    Ssb,
}

impl Scheme {
    pub const ALL: [Scheme; 4] = [Scheme::Perfect, Scheme::Jsrs, Scheme::FiveG, Scheme::Ssb];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::Jsrs => "jsrs",
            Scheme::Perfect => "perfect",
            Scheme::FiveG => "5g",
            Scheme::Ssb => "ssb",
        }
    }

    /// Sensing ability this scheme achieves under `cfg`.
    pub fn ability(&self, cfg: &Config) -> Result<SensingAbility> {
        let theta_b = cfg.deployment.theta_b();
        match self {
            Scheme::Perfect => Ok(perfect_ability()),
            Scheme::FiveG => Ok(baseline_5g_ability()),
            Scheme::Ssb => ssb_ability(&cfg.system, theta_b),
            Scheme::Jsrs => {
                let req = crate::pattern::PatternRequirement { n_rs: cfg.system.n_rs, ..cfg.requirement };
                let pattern = optimal_pattern(&req, &cfg.system, theta_b)?;
                sensing_ability(&pattern, &cfg.system, theta_b)
            }
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "jsrs" => Ok(Scheme::Jsrs),
            "perfect" => Ok(Scheme::Perfect),
            "5g" | "fiveg" => Ok(Scheme::FiveG),
            "ssb" => Ok(Scheme::Ssb),
            other => Err(invalid(format!("unknown scheme {other:?} (expected jsrs, perfect, 5g, ssb)"))),
        }
    }
}
