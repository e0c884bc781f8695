//! Offline analytics over recorded or simulated following episodes.

mod affected;
mod anova;
mod gaze;
mod hausdorff;
mod headway;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use affected::{
    is_affected_case, percent_affected, reference_trajectory, AffectedCase, AffectedOptions,
};
pub use anova::{one_way_anova, AnovaResult};
pub use gaze::{gaze_proportions, Aoi, GazeSample};
pub use hausdorff::{directed_hausdorff, hausdorff, Point};
pub use headway::{stage_time_headway, GapMode, HeadwayOptions};

use crate::error::{Error, Result};
use crate::sim::CaseWindow;
use crate::trajectory::Trajectory;

/// Clustering features of one driver, both in percent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverFeatures {
    pub driver_id: String,
    pub pc_a: f64,
    pub pc_g: f64,
}

impl DriverFeatures {
    pub fn new(driver_id: impl Into<String>, pc_a: f64, pc_g: f64) -> Result<Self> {
        let f = Self {
            driver_id: driver_id.into(),
            pc_a,
            pc_g,
        };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("pc_a", self.pc_a), ("pc_g", self.pc_g)] {
            if !(v.is_finite() && (0.0..=100.0).contains(&v)) {
                return Err(Error::InvalidInput(format!(
                    "driver {}: {name} = {v} outside [0, 100]",
                    self.driver_id
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct AnalysisOptions {
    pub affected: AffectedOptions,
    pub headway: HeadwayOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub index: usize,
    pub window: CaseWindow,
    pub judgment: AffectedCase,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StageHeadway {
    pub stage_index: usize,
    pub speed_mps: f64,
    pub headway_s: f64,
}

/// Everything derived from one driver's recording.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriverAnalysis {
    pub driver_id: String,
    pub cases: Vec<CaseResult>,
    pub pc_a: Option<f64>,
    pub gaze: Option<BTreeMap<Aoi, f64>>,
    pub headways: Vec<StageHeadway>,
}

impl DriverAnalysis {
    pub fn pc_g(&self) -> Option<f64> {
        self.gaze.as_ref().map(|g| g[&Aoi::FrontLead])
    }

    /// Clustering features, when both percentages are available.
    pub fn features(&self) -> Option<DriverFeatures> {
        Some(DriverFeatures {
            driver_id: self.driver_id.clone(),
            pc_a: self.pc_a?,
            pc_g: self.pc_g()?,
        })
    }

    pub fn affected_windows(&self) -> impl Iterator<Item = &CaseWindow> {
        self.cases
            .iter()
            .filter(|c| c.judgment.affected)
            .map(|c| &c.window)
    }
}

/// Judges every case, computes pc_a, gaze proportions and the mean time
/// headway of every stage referenced by `cases`.
pub fn analyze_driver(
    driver_id: &str,
    ego: &Trajectory,
    lead: &Trajectory,
    cases: &[CaseWindow],
    gaze: Option<&[GazeSample]>,
    opts: &AnalysisOptions,
) -> Result<DriverAnalysis> {
    let results = cases
        .iter()
        .enumerate()
        .map(|(index, w)| {
            Ok(CaseResult {
                index,
                window: *w,
                judgment: is_affected_case(ego, lead, w.span(), &opts.affected)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let pc_a = if results.is_empty() {
        None
    } else {
        let flags: Vec<bool> = results.iter().map(|c| c.judgment.affected).collect();
        Some(percent_affected(&flags)?)
    };

    let mut stages: BTreeMap<usize, &CaseWindow> = BTreeMap::new();
    for w in cases {
        stages.entry(w.stage_index).or_insert(w);
    }
    let headways = stages
        .values()
        .map(|w| {
            Ok(StageHeadway {
                stage_index: w.stage_index,
                speed_mps: w.stage_speed,
                headway_s: stage_time_headway(ego, lead, w.stage_span(), &opts.headway)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let gaze = gaze.map(gaze_proportions).transpose()?;
    Ok(DriverAnalysis {
        driver_id: driver_id.to_string(),
        cases: results,
        pc_a,
        gaze,
        headways,
    })
}
