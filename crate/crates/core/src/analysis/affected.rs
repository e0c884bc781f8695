//! Affected-case judgment: is the ego's lateral trace closer in shape to the
//! leader's than a straight line at the leader's mean lateral position?

use serde::{Deserialize, Serialize};

use super::hausdorff::{hausdorff, Point};
use crate::error::{Error, Result};
use crate::trajectory::{resample, uniform_grid, TimeSpan, Trajectory, VehicleSample};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectedOptions {
    /// Samples on the common time grid of a case window.
    pub n_samples: usize,
    /// Meters per second of time in the (t, y) embedding.
    pub time_weight: f64,
}

impl Default for AffectedOptions {
    fn default() -> Self {
        Self {
            n_samples: 50,
            time_weight: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffectedCase {
    pub affected: bool,
    /// H(ego, lead), m.
    pub ego_distance: f64,
    /// H(reference, lead), m.
    pub reference_distance: f64,
}

/// Straight line on the leader's time grid at the mean of its lateral samples.
pub fn reference_trajectory(lead: &Trajectory) -> Trajectory {
    let n = lead.len() as f64;
    let mean = lead.samples().iter().map(|s| s.y).sum::<f64>() / n;
    let samples = lead
        .samples()
        .iter()
        .map(|s| VehicleSample { y: mean, ..*s })
        .collect();
    Trajectory::new(lead.vehicle_id(), lead.lane_id(), samples)
        .expect("same time grid as a valid trajectory")
}

fn embed(tr: &Trajectory, t0: f64, time_weight: f64) -> Vec<Point> {
    tr.samples()
        .iter()
        .map(|s| [(s.t - t0) * time_weight, s.y])
        .collect()
}

/// Compares ego and leader inside `window`.
///
/// Both trajectories are resampled to `n_samples` points spanning the window
/// and embedded as `(t * time_weight, y)` with time measured from the window
/// start. The case counts as affected when the ego trace is strictly closer to
/// the leader's than the reference line is.
pub fn is_affected_case(
    ego: &Trajectory,
    lead: &Trajectory,
    window: TimeSpan,
    opts: &AffectedOptions,
) -> Result<AffectedCase> {
    if opts.n_samples < 2 || !(opts.time_weight.is_finite() && opts.time_weight >= 0.0) {
        return Err(Error::Configuration(format!(
            "invalid affected-case options {opts:?}"
        )));
    }
    window.validate()?;
    let grid = uniform_grid(window.start, window.end, opts.n_samples);
    let ego_w = resample(ego, &grid)?;
    let lead_w = resample(lead, &grid)?;
    let reference = reference_trajectory(&lead_w);

    let e = embed(&ego_w, window.start, opts.time_weight);
    let l = embed(&lead_w, window.start, opts.time_weight);
    let r = embed(&reference, window.start, opts.time_weight);
    let ego_distance = hausdorff(&e, &l)?;
    let reference_distance = hausdorff(&r, &l)?;
    Ok(AffectedCase {
        affected: ego_distance < reference_distance,
        ego_distance,
        reference_distance,
    })
}

pub fn percent_affected(flags: &[bool]) -> Result<f64> {
    if flags.is_empty() {
        return Err(Error::EmptyInput("affected-case list"));
    }
    let hits = flags.iter().filter(|&&f| f).count();
    Ok(100.0 * hits as f64 / flags.len() as f64)
}
