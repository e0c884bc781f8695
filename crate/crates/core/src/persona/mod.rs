//! Driver personalization: style clustering, lateral parameter extraction and
//! profile assembly.

mod cluster;
mod fit;
mod profile;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use cluster::{cluster_styles, Centroid, ClusterResult};
pub use fit::{average_optima, fit_case, fit_lateral_params, CaseFit, FitCase, FitOptions, LateralFit};
pub use profile::{build_profile, comparison_configs, headway_for_speed, ComparisonConfigs, DriverProfile};

use crate::error::{Error, Result};

/// Whether a driver's lateral behavior follows the leader's lateral motion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Style {
    Affected,
    Unaffected,
}

impl Style {
    pub fn as_str(&self) -> &'static str {
        match self {
            Style::Affected => "affected",
            Style::Unaffected => "unaffected",
        }
    }
}

impl fmt::Display for Style {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Style {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "affected" => Ok(Style::Affected),
            "unaffected" => Ok(Style::Unaffected),
            _ => Err(Error::InvalidInput(format!("unknown driving style {s:?}"))),
        }
    }
}
