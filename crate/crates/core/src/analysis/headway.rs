use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectory::{TimeSpan, Trajectory};

/// How the gap between leader and ego is measured.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum GapMode {
    #[default]
    CenterToCenter,
    /// Subtracts half of each vehicle length from the center distance.
    BumperToBumper { lead_length: f64, ego_length: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadwayOptions {
    /// Ego samples slower than this are ignored, m/s.
    pub speed_floor: f64,
    pub gap_mode: GapMode,
}

impl Default for HeadwayOptions {
    fn default() -> Self {
        Self {
            speed_floor: 5.0,
            gap_mode: GapMode::CenterToCenter,
        }
    }
}

/// Mean of `gap / v_ego` over the ego samples inside `window`.
pub fn stage_time_headway(
    ego: &Trajectory,
    lead: &Trajectory,
    window: TimeSpan,
    opts: &HeadwayOptions,
) -> Result<f64> {
    window.validate()?;
    for t in [window.start, window.end] {
        for tr in [ego, lead] {
            if !tr.covers(t) {
                return Err(Error::OutOfRange {
                    t,
                    start: tr.start_time(),
                    end: tr.end_time(),
                });
            }
        }
    }
    let length_offset = match opts.gap_mode {
        GapMode::CenterToCenter => 0.0,
        GapMode::BumperToBumper {
            lead_length,
            ego_length,
        } => 0.5 * (lead_length + ego_length),
    };
    let mut sum = 0.0;
    let mut n = 0usize;
    for s in ego.samples().iter().filter(|s| window.contains(s.t)) {
        if s.v < opts.speed_floor {
            continue;
        }
        let gap = lead.sample_at(s.t)?.x - s.x - length_offset;
        sum += gap / s.v;
        n += 1;
    }
    if n == 0 {
        return Err(Error::UndefinedHeadway {
            floor: opts.speed_floor,
        });
    }
    Ok(sum / n as f64)
}
