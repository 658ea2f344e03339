//! Analysis toolkit for integrated sensing and communication in terahertz
//! cellular networks: OFDM sensing abilities, sensing-pattern optimisation,
//! beam misalignment, coverage via characteristic-function inversion, and a
//! Poisson-point-process Monte-Carlo simulator to check them.

pub mod channel;
pub mod config;
pub mod coverage;
pub mod error;
pub mod mcsim;
pub mod misalignment;
pub mod pattern;
pub mod report;
pub mod scheme;
pub mod sensing;
pub mod specfun;

pub use config::{load_config, parse_config, AbsorptionTable, Config, Deployment, SystemParams};
pub use error::{Error, Result};
pub use scheme::Scheme;

/// Propagation speed used throughout (m/s).
pub const SPEED_OF_LIGHT: f64 = 3e8;
