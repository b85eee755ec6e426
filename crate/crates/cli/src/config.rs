//! Optional flat key-value configuration file (TOML syntax):
//!
//! ```toml
//! band_edges = [0.1, 0.3, 0.6, 0.8]   # weak, moderate, strong, very strong
//! ga_relative = false
//! abs_angles = false
//! display_precision = 2
//! ```
//!
//! Command-line flags override the file.

use std::path::Path;

use posture_symmetry::RhoBands;
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub band_edges: [f64; 4],
    pub ga_relative: bool,
    pub abs_angles: bool,
    pub display_precision: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { band_edges: RhoBands::default().edges(), ga_relative: false, abs_angles: false, display_precision: 2 }
    }
}

impl Config {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: Config = toml::from_str(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        config.bands()?;
        Ok(config)
    }

    pub fn load(path: Option<&Path>) -> Result<Self, CliError> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", p.display())))?;
                Self::parse(&text)
            }
        }
    }

    pub fn bands(&self) -> Result<RhoBands, CliError> {
        RhoBands::from_edges(self.band_edges).map_err(|e| CliError::Usage(format!("config: {e}")))
    }
}
