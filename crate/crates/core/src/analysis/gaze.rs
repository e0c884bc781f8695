use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Area of interest of an eye-tracking interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Aoi {
    Panel,
    FrontLead,
    LaneMarkers,
    Other,
}

impl Aoi {
    pub const ALL: [Aoi; 4] = [Aoi::Panel, Aoi::FrontLead, Aoi::LaneMarkers, Aoi::Other];

    pub fn as_str(&self) -> &'static str {
        match self {
            Aoi::Panel => "panel",
            Aoi::FrontLead => "front_lead",
            Aoi::LaneMarkers => "lane_markers",
            Aoi::Other => "other",
        }
    }
}

impl fmt::Display for Aoi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Aoi {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Aoi::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown area of interest {s:?}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GazeSample {
    pub t_start: f64,
    pub t_end: f64,
    pub aoi: Aoi,
}

impl GazeSample {
    pub fn duration(&self) -> f64 {
        self.t_end - self.t_start
    }
}

/// Percentage of total gaze time spent in each area; all four areas present.
pub fn gaze_proportions(samples: &[GazeSample]) -> Result<BTreeMap<Aoi, f64>> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("gaze samples"));
    }
    for s in samples {
        if !(s.t_start.is_finite() && s.t_end.is_finite() && s.t_start < s.t_end) {
            return Err(Error::InvalidInput(format!(
                "gaze interval [{}, {}] must have start < end",
                s.t_start, s.t_end
            )));
        }
    }
    let mut sorted: Vec<&GazeSample> = samples.iter().collect();
    sorted.sort_by(|a, b| a.t_start.total_cmp(&b.t_start));
    if let Some(w) = sorted.windows(2).find(|w| w[1].t_start < w[0].t_end) {
        return Err(Error::InvalidInput(format!(
            "gaze intervals overlap: [{}, {}] and [{}, {}]",
            w[0].t_start, w[0].t_end, w[1].t_start, w[1].t_end
        )));
    }

    let mut per_aoi: BTreeMap<Aoi, f64> = Aoi::ALL.into_iter().map(|a| (a, 0.0)).collect();
    for s in samples {
        *per_aoi.get_mut(&s.aoi).expect("all areas present") += s.duration();
    }
    let total: f64 = per_aoi.values().sum();
    for v in per_aoi.values_mut() {
        *v *= 100.0 / total;
    }
    Ok(per_aoi)
}
