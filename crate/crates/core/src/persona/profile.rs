use serde::{Deserialize, Serialize};

use super::fit::LateralFit;
use super::Style;
use crate::analysis::DriverFeatures;
use crate::error::{Error, Result};
use crate::idm::HeadwayTable;
use crate::lateral::{LateralParams, MAX_TAU};
use crate::sim::ControllerConfig;

/// One driver's personalization record.
///
/// Serialized with the key order `driver_id, style, t_p, tau_s, alpha`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverProfile {
    pub driver_id: String,
    pub style: Style,
    pub t_p: HeadwayTable,
    pub tau_s: f64,
    pub alpha: f64,
}

impl DriverProfile {
    pub fn validate(&self) -> Result<()> {
        self.t_p.validate()?;
        match self.style {
            Style::Unaffected if self.alpha != 0.0 || self.tau_s != 0.0 => {
                Err(Error::InvalidInput(format!(
                    "driver {}: unaffected profile must have alpha = tau = 0",
                    self.driver_id
                )))
            }
            Style::Affected
                if !(self.alpha > 0.0
                    && self.alpha <= 1.0
                    && self.tau_s > 0.0
                    && self.tau_s <= MAX_TAU) =>
            {
                Err(Error::InvalidInput(format!(
                    "driver {}: affected profile needs alpha in (0, 1] and tau in (0, {MAX_TAU}], got ({}, {})",
                    self.driver_id, self.alpha, self.tau_s
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn lateral(&self) -> LateralParams {
        LateralParams {
            alpha: self.alpha,
            tau: self.tau_s,
            ..LateralParams::centerline()
        }
    }

    pub fn controller(&self) -> ControllerConfig {
        ControllerConfig {
            headways: self.t_p.clone(),
            lateral: self.lateral(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let p: Self = serde_json::from_str(s)?;
        p.validate()?;
        Ok(p)
    }
}

/// Assembles a profile. Unaffected drivers always get `alpha = tau = 0`;
/// affected drivers need a lateral fit.
pub fn build_profile(
    driver_id: &str,
    features: Option<&DriverFeatures>,
    style: Style,
    headways: &[(f64, f64)],
    lateral: Option<&LateralFit>,
) -> Result<DriverProfile> {
    if let Some(f) = features {
        if f.driver_id != driver_id {
            return Err(Error::InconsistentInputs(format!(
                "features belong to {:?}, not {driver_id:?}",
                f.driver_id
            )));
        }
    }
    if headways.is_empty() {
        return Err(Error::InsufficientData(format!(
            "driver {driver_id}: no stage headways"
        )));
    }
    let t_p = HeadwayTable::new(headways.iter().copied())?;
    let (alpha, tau_s) = match style {
        Style::Unaffected => (0.0, 0.0),
        Style::Affected => {
            let fit = lateral.ok_or_else(|| {
                Error::InconsistentInputs(format!(
                    "driver {driver_id} is affected but has no fitted cases"
                ))
            })?;
            (fit.alpha, fit.tau)
        }
    };
    let profile = DriverProfile {
        driver_id: driver_id.to_string(),
        style,
        t_p,
        tau_s,
        alpha,
    };
    profile
        .validate()
        .map_err(|e| Error::InconsistentInputs(e.to_string()))?;
    Ok(profile)
}

pub fn headway_for_speed(profile: &DriverProfile, lead_speed: f64) -> f64 {
    profile.t_p.headway_for_speed(lead_speed)
}

/// The personalized controller P and the two comparison controllers.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonConfigs {
    pub p: ControllerConfig,
    pub c1: ControllerConfig,
    pub c2: ControllerConfig,
}

impl ComparisonConfigs {
    pub fn named(&self) -> [(&'static str, &ControllerConfig); 3] {
        [("p", &self.p), ("c1", &self.c1), ("c2", &self.c2)]
    }
}

/// Affected drivers: P follows with their own (alpha, tau), C1 keeps the
/// centerline, C2 moves opposite with (-alpha, tau). Unaffected drivers: P
/// keeps the centerline, C1 follows with (1, 1 s), C2 opposes with (-1, 1 s).
pub fn comparison_configs(profile: &DriverProfile) -> ComparisonConfigs {
    let with = |alpha: f64, tau: f64| ControllerConfig {
        headways: profile.t_p.clone(),
        lateral: LateralParams {
            alpha,
            tau,
            ..LateralParams::centerline()
        },
    };
    match profile.style {
        Style::Affected => ComparisonConfigs {
            p: with(profile.alpha, profile.tau_s),
            c1: with(0.0, 0.0),
            c2: with(-profile.alpha, profile.tau_s),
        },
        Style::Unaffected => ComparisonConfigs {
            p: with(0.0, 0.0),
            c1: with(1.0, 1.0),
            c2: with(-1.0, 1.0),
        },
    }
}
