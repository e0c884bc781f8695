use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Straight single-lane geometry used for the lateral safety clamp.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaneGeometry {
    /// Lane width, m.
    pub lane_width: f64,
    /// Distance of each safe boundary inside the lane marking, m.
    pub safe_margin: f64,
    /// Ego vehicle width, m.
    pub ego_width: f64,
}

impl Default for LaneGeometry {
    fn default() -> Self {
        Self {
            lane_width: 3.75,
            safe_margin: 0.2,
            ego_width: 2.1,
        }
    }
}

impl LaneGeometry {
    pub fn new(lane_width: f64, safe_margin: f64, ego_width: f64) -> Result<Self> {
        let g = Self {
            lane_width,
            safe_margin,
            ego_width,
        };
        g.validate()?;
        Ok(g)
    }

    /// A zero margin is accepted so that the "ego fills the lane" limit can be
    /// expressed; every other field must be strictly positive.
    pub fn validate(&self) -> Result<()> {
        let finite = [self.lane_width, self.safe_margin, self.ego_width]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.lane_width <= 0.0 || self.ego_width <= 0.0 || self.safe_margin < 0.0
        {
            return Err(Error::InvalidInput(format!("invalid lane geometry {self:?}")));
        }
        if self.lane_width - 2.0 * self.safe_margin < self.ego_width {
            return Err(Error::InvalidInput(format!(
                "ego width {} does not fit between safe boundaries of a {} m lane",
                self.ego_width, self.lane_width
            )));
        }
        Ok(())
    }

    /// Width of the corridor between the two safe boundaries.
    pub fn safe_corridor(&self) -> f64 {
        self.lane_width - 2.0 * self.safe_margin
    }

    /// Largest admissible |y| of the ego center.
    pub fn max_lateral_freedom(&self) -> f64 {
        (self.safe_corridor() - self.ego_width) / 2.0
    }

    pub fn clamp_lateral(&self, y: f64) -> f64 {
        let f = self.max_lateral_freedom();
        y.clamp(-f, f)
    }
}

pub fn max_lateral_freedom(g: &LaneGeometry) -> f64 {
    g.max_lateral_freedom()
}
