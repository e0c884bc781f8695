//! Vehicle samples, trajectories and linear resampling.
//!
//! Coordinates are lane-relative: `x` runs along the lane, `y` is the lateral
//! offset from the lane centerline with left positive.

use crate::error::{Error, Result};

/// Grid points this close to a span end or a sample time snap onto it.
pub const TIME_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleSample {
    /// Seconds from episode start.
    pub t: f64,
    /// Longitudinal position, m.
    pub x: f64,
    /// Lateral position, m.
    pub y: f64,
    /// Longitudinal speed, m/s.
    pub v: f64,
}

impl VehicleSample {
    pub fn new(t: f64, x: f64, y: f64, v: f64) -> Self {
        Self { t, x, y, v }
    }

    fn check(&self) -> Result<()> {
        if !(self.t.is_finite() && self.t >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "sample time must be finite and non-negative, got {}",
                self.t
            )));
        }
        if !(self.x.is_finite() && self.y.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite position at t = {}",
                self.t
            )));
        }
        if !(self.v.is_finite() && self.v >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "speed must be finite and non-negative, got {} at t = {}",
                self.v, self.t
            )));
        }
        Ok(())
    }
}

/// Closed time interval `[start, end]`, seconds.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TimeSpan {
    pub start: f64,
    pub end: f64,
}

impl TimeSpan {
    pub fn new(start: f64, end: f64) -> Result<Self> {
        let s = Self { start, end };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.start.is_finite() && self.end.is_finite() && self.start < self.end {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "time span [{}, {}] must be finite with start < end",
                self.start, self.end
            )))
        }
    }

    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn contains(&self, t: f64) -> bool {
        t >= self.start - TIME_EPS && t <= self.end + TIME_EPS
    }
}

/// A time-ordered sequence of at least two samples of one vehicle in one lane.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    vehicle_id: String,
    lane_id: String,
    samples: Vec<VehicleSample>,
}

impl Trajectory {
    pub fn new(
        vehicle_id: impl Into<String>,
        lane_id: impl Into<String>,
        samples: Vec<VehicleSample>,
    ) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::DegenerateTrajectory(format!(
                "need at least 2 samples, got {}",
                samples.len()
            )));
        }
        for s in &samples {
            s.check()?;
        }
        if let Some(w) = samples.windows(2).find(|w| w[1].t <= w[0].t) {
            return Err(Error::InvalidInput(format!(
                "time must be strictly increasing ({} then {})",
                w[0].t, w[1].t
            )));
        }
        Ok(Self {
            vehicle_id: vehicle_id.into(),
            lane_id: lane_id.into(),
            samples,
        })
    }

    pub fn vehicle_id(&self) -> &str {
        &self.vehicle_id
    }

    pub fn lane_id(&self) -> &str {
        &self.lane_id
    }

    pub fn samples(&self) -> &[VehicleSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    /// Always false; kept for the `len`/`is_empty` pairing.
    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn start_time(&self) -> f64 {
        self.samples[0].t
    }

    pub fn end_time(&self) -> f64 {
        self.samples[self.samples.len() - 1].t
    }

    pub fn duration(&self) -> f64 {
        self.end_time() - self.start_time()
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        self.samples.iter().map(|s| s.t)
    }

    pub fn lateral(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.y).collect()
    }

    /// True when `t` lies inside the sampled span (with [`TIME_EPS`] slack).
    pub fn covers(&self, t: f64) -> bool {
        t >= self.start_time() - TIME_EPS && t <= self.end_time() + TIME_EPS
    }

    /// Linearly interpolated sample at time `t`. Never extrapolates.
    pub fn sample_at(&self, t: f64) -> Result<VehicleSample> {
        if !self.covers(t) {
            return Err(Error::OutOfRange {
                t,
                start: self.start_time(),
                end: self.end_time(),
            });
        }
        let s = &self.samples;
        // first index with s[i].t >= t
        let i = s.partition_point(|p| p.t < t);
        if i < s.len() && (s[i].t - t).abs() <= TIME_EPS {
            return Ok(VehicleSample { t, ..s[i] });
        }
        if i > 0 && (t - s[i - 1].t).abs() <= TIME_EPS {
            return Ok(VehicleSample { t, ..s[i - 1] });
        }
        if i == 0 || i == s.len() {
            // Only reachable inside the eps band, handled above.
            let p = if i == 0 { s[0] } else { s[s.len() - 1] };
            return Ok(VehicleSample { t, ..p });
        }
        let (a, b) = (s[i - 1], s[i]);
        let w = (t - a.t) / (b.t - a.t);
        let lerp = |p: f64, q: f64| p + (q - p) * w;
        Ok(VehicleSample {
            t,
            x: lerp(a.x, b.x),
            y: lerp(a.y, b.y),
            v: lerp(a.v, b.v),
        })
    }

    /// Samples restricted to `[start, end]` without interpolation.
    pub fn clip(&self, start: f64, end: f64) -> Result<Trajectory> {
        let samples: Vec<_> = self
            .samples
            .iter()
            .copied()
            .filter(|s| s.t >= start - TIME_EPS && s.t <= end + TIME_EPS)
            .collect();
        Trajectory::new(self.vehicle_id.clone(), self.lane_id.clone(), samples)
    }

    /// Same samples shifted in time by `dt`.
    pub fn shifted(&self, dt: f64) -> Result<Trajectory> {
        let samples = self
            .samples
            .iter()
            .map(|s| VehicleSample { t: s.t + dt, ..*s })
            .collect();
        Trajectory::new(self.vehicle_id.clone(), self.lane_id.clone(), samples)
    }
}

/// Resamples `tr` onto `grid` by linear interpolation of `x`, `y` and `v`.
///
/// The grid must be strictly increasing and lie within the trajectory's time
/// span; grid points that coincide with a sample time return that sample
/// unchanged, so resampling onto a trajectory's own time stamps is exact.
///
/// A grid of fewer than two points cannot form a trajectory; use
/// [`resample_samples`] for single-point lookups.
pub fn resample(tr: &Trajectory, grid: &[f64]) -> Result<Trajectory> {
    let samples = resample_samples(tr, grid)?;
    Trajectory::new(tr.vehicle_id.clone(), tr.lane_id.clone(), samples)
}

/// Interpolated samples at each grid time.
pub fn resample_samples(tr: &Trajectory, grid: &[f64]) -> Result<Vec<VehicleSample>> {
    if tr.samples.len() < 2 {
        return Err(Error::DegenerateTrajectory(
            "need at least 2 samples to interpolate".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(
            "resample grid must be strictly increasing".into(),
        ));
    }
    grid.iter().map(|&t| tr.sample_at(t)).collect()
}

/// `n` evenly spaced times covering `[start, end]` inclusive.
pub fn uniform_grid(start: f64, end: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (end - start) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { end } else { start + step * i as f64 })
                .collect()
        }
    }
}

/// Times `start, start + step, ...` not exceeding `end` (within [`TIME_EPS`]).
pub fn stepped_grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    let n = ((end - start) / step + TIME_EPS).floor() as usize;
    (0..=n).map(|i| start + step * i as f64).collect()
}
