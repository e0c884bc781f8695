//! Ingestion of highD-style drone tracks.
//!
//! Rows are frame-indexed (`frame,id,x,y,xVelocity,laneId`, plus optional
//! `width,height`) in image coordinates: `x` along the road, `y` pointing
//! down, positions at the bounding-box corner when sizes are given. Each
//! vehicle is converted to lane-relative SI coordinates:
//!
//! * `t = frame / frame_rate`;
//! * `x` is flipped for vehicles driving toward negative image `x`, so that
//!   forward is always increasing `x`, and `v = |xVelocity|`;
//! * `y` is the offset of the box center from the lane center given in a
//!   lane-center table, signed so that left of the driving direction is
//!   positive.
//!
//! A vehicle that changes lane yields one trajectory per contiguous lane run.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::Deserialize;

use super::{parse_err, read_rows};
use crate::error::Result;
use crate::trajectory::{Trajectory, VehicleSample};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HighdOptions {
    /// Frames per second.
    pub frame_rate: f64,
}

impl Default for HighdOptions {
    fn default() -> Self {
        Self { frame_rate: 25.0 }
    }
}

/// Lateral image coordinate of each lane's center line, m.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LaneCenters(pub BTreeMap<String, f64>);

impl LaneCenters {
    pub fn get(&self, lane: &str) -> Option<f64> {
        self.0.get(lane).copied()
    }
}

#[derive(Debug, Deserialize)]
struct LaneRow {
    lane_id: String,
    center_y: f64,
}

/// Reads a `lane_id,center_y` table.
pub fn read_lane_centers(path: &Path) -> Result<LaneCenters> {
    let mut map = BTreeMap::new();
    for (line, r) in read_rows::<LaneRow>(path, &["lane_id", "center_y"])? {
        if !r.center_y.is_finite() {
            return Err(parse_err(path, line, "non-finite lane center"));
        }
        if map.insert(r.lane_id.clone(), r.center_y).is_some() {
            return Err(parse_err(path, line, format!("duplicate lane {}", r.lane_id)));
        }
    }
    Ok(LaneCenters(map))
}

#[derive(Debug, Deserialize)]
struct Row {
    frame: u64,
    id: String,
    x: f64,
    y: f64,
    #[serde(default)]
    width: Option<f64>,
    #[serde(default)]
    height: Option<f64>,
    #[serde(rename = "xVelocity")]
    x_velocity: f64,
    #[serde(rename = "laneId")]
    lane_id: String,
}

pub fn read_highd(path: &Path, lanes: &LaneCenters, opts: &HighdOptions) -> Result<Vec<Trajectory>> {
    if !(opts.frame_rate.is_finite() && opts.frame_rate > 0.0) {
        return Err(parse_err(path, 0, format!("invalid frame rate {}", opts.frame_rate)));
    }
    let rows: Vec<(usize, Row)> = read_rows(path, &["frame", "id", "x", "y", "xVelocity", "laneId"])?;

    let mut order: Vec<String> = Vec::new();
    let mut by_vehicle: HashMap<String, Vec<(usize, Row)>> = HashMap::new();
    for (line, r) in rows {
        if ![r.x, r.y, r.x_velocity].iter().all(|v| v.is_finite()) {
            return Err(parse_err(path, line, "non-finite value"));
        }
        if lanes.get(&r.lane_id).is_none() {
            return Err(parse_err(
                path,
                line,
                format!("no lane-center entry for lane {}", r.lane_id),
            ));
        }
        let rows = by_vehicle.entry(r.id.clone()).or_insert_with(|| {
            order.push(r.id.clone());
            Vec::new()
        });
        if let Some((prev_line, prev)) = rows.last() {
            if r.frame <= prev.frame {
                return Err(parse_err(
                    path,
                    line,
                    format!(
                        "frame {} for vehicle {} does not increase (previous {} on row {prev_line})",
                        r.frame, r.id, prev.frame
                    ),
                ));
            }
        }
        rows.push((line, r));
    }

    let mut out = Vec::new();
    for id in order {
        let rows = by_vehicle.remove(&id).unwrap_or_default();
        let mean_vx = rows.iter().map(|(_, r)| r.x_velocity).sum::<f64>() / rows.len() as f64;
        let forward = if mean_vx < 0.0 { -1.0 } else { 1.0 };

        let mut runs: Vec<(String, usize, Vec<VehicleSample>)> = Vec::new();
        for (line, r) in &rows {
            let cx = r.x + r.width.unwrap_or(0.0) / 2.0;
            let cy = r.y + r.height.unwrap_or(0.0) / 2.0;
            let center = lanes.get(&r.lane_id).expect("checked above");
            let sample = VehicleSample::new(
                r.frame as f64 / opts.frame_rate,
                forward * cx,
                // image y grows downward: left of a +x driver is smaller y
                -forward * (cy - center),
                r.x_velocity.abs(),
            );
            match runs.last_mut() {
                Some((lane, _, samples)) if *lane == r.lane_id => samples.push(sample),
                _ => runs.push((r.lane_id.clone(), *line, vec![sample])),
            }
        }
        for (lane, line, samples) in runs {
            if samples.len() < 2 {
                continue;
            }
            let tr = Trajectory::new(id.clone(), lane, samples)
                .map_err(|e| parse_err(path, line, e.to_string()))?;
            out.push(tr);
        }
    }
    Ok(out)
}
