//! Intelligent Driver Model speed control.
//!
//! Only the time headway is personalized; the remaining parameters default to
//! the literature values used for highway following.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Hard braking limit applied to the controller output, m/s².
pub const DEFAULT_MAX_BRAKE: f64 = 4.0;

pub fn kmh_to_mps(kmh: f64) -> f64 {
    kmh / 3.6
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdmParams {
    /// Desired velocity, m/s.
    pub v0: f64,
    /// Time headway, s.
    pub time_headway: f64,
    /// Maximum acceleration, m/s².
    pub a: f64,
    /// Desired (comfortable) deceleration, m/s².
    pub b: f64,
    /// Acceleration exponent.
    pub delta: f64,
    /// Jam distance, m.
    pub s0: f64,
    /// Speed-dependent jam distance, m.
    pub s1: f64,
}

impl IdmParams {
    /// Highway defaults (v0 = 120 km/h, a = 0.73, b = 1.67, delta = 4, s0 = 2, s1 = 0)
    /// with the given personalized time headway.
    pub fn highway(time_headway: f64) -> Self {
        Self {
            v0: kmh_to_mps(120.0),
            time_headway,
            a: 0.73,
            b: 1.67,
            delta: 4.0,
            s0: 2.0,
            s1: 0.0,
        }
    }

    pub fn with_headway(self, time_headway: f64) -> Self {
        Self {
            time_headway,
            ..self
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = self.v0 > 0.0
            && self.time_headway >= 0.0
            && self.a > 0.0
            && self.b > 0.0
            && self.delta > 0.0
            && self.s0 >= 0.0
            && self.s1 >= 0.0
            && [self.v0, self.time_headway, self.a, self.b, self.delta, self.s0, self.s1]
                .iter()
                .all(|v| v.is_finite());
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!("invalid IDM parameters {self:?}")))
        }
    }

    /// Gap at which a follower at constant speed `v` behind a leader at the
    /// same speed has zero acceleration. Infinite when `v >= v0`.
    pub fn equilibrium_gap(&self, v: f64) -> f64 {
        let free = 1.0 - (v / self.v0).powf(self.delta);
        if free <= 0.0 {
            return f64::INFINITY;
        }
        desired_gap(
            self,
            &FollowState {
                v,
                gap: 1.0,
                dv: 0.0,
            },
        ) / free.sqrt()
    }
}

/// One fitted time headway at a stage speed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeadwayEntry {
    pub speed_mps: f64,
    pub headway_s: f64,
}

/// Personalized time headway as a function of the leader's speed.
///
/// Piecewise-linear between fitted stage speeds, constant beyond the ends.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct HeadwayTable(Vec<HeadwayEntry>);

impl HeadwayTable {
    /// Builds a table sorted by speed. Requires at least one entry, positive
    /// headways and distinct finite speeds.
    pub fn new(entries: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut v: Vec<HeadwayEntry> = entries
            .into_iter()
            .map(|(speed_mps, headway_s)| HeadwayEntry {
                speed_mps,
                headway_s,
            })
            .collect();
        v.sort_by(|a, b| a.speed_mps.total_cmp(&b.speed_mps));
        let table = Self(v);
        table.validate()?;
        Ok(table)
    }

    pub fn constant(headway_s: f64) -> Result<Self> {
        Self::new([(0.0, headway_s)])
    }

    pub fn validate(&self) -> Result<()> {
        if self.0.is_empty() {
            return Err(Error::InvalidInput("headway table is empty".into()));
        }
        for e in &self.0 {
            if !(e.speed_mps.is_finite() && e.speed_mps >= 0.0) {
                return Err(Error::InvalidInput(format!("invalid stage speed {}", e.speed_mps)));
            }
            if !(e.headway_s.is_finite() && e.headway_s > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "time headway must be positive, got {}",
                    e.headway_s
                )));
            }
        }
        if self.0.windows(2).any(|w| w[1].speed_mps <= w[0].speed_mps) {
            return Err(Error::InvalidInput(
                "headway table speeds must be distinct and sorted".into(),
            ));
        }
        Ok(())
    }

    pub fn entries(&self) -> &[HeadwayEntry] {
        &self.0
    }

    pub fn headway_for_speed(&self, speed: f64) -> f64 {
        let e = &self.0;
        let first = e[0];
        let last = e[e.len() - 1];
        if speed <= first.speed_mps {
            return first.headway_s;
        }
        if speed >= last.speed_mps {
            return last.headway_s;
        }
        let i = e.partition_point(|p| p.speed_mps <= speed);
        let (lo, hi) = (e[i - 1], e[i]);
        let w = (speed - lo.speed_mps) / (hi.speed_mps - lo.speed_mps);
        lo.headway_s + (hi.headway_s - lo.headway_s) * w
    }
}

/// Inputs of the car-following law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FollowState {
    /// Ego speed, m/s.
    pub v: f64,
    /// Gap to the leader, m.
    pub gap: f64,
    /// Closing speed `v_ego - v_lead`, m/s.
    pub dv: f64,
}

/// Desired dynamic gap `s*(v, dv)`. Not floored; may drop below `s0` when the
/// gap is opening quickly.
pub fn desired_gap(p: &IdmParams, st: &FollowState) -> f64 {
    p.s0 + p.s1 * (st.v / p.v0).sqrt()
        + p.time_headway * st.v
        + st.v * st.dv / (2.0 * (p.a * p.b).sqrt())
}

pub fn free_flow_acceleration(p: &IdmParams, v: f64) -> f64 {
    p.a * (1.0 - (v / p.v0).powf(p.delta))
}

/// Unclamped IDM acceleration; a negative desired gap is floored at zero
/// before squaring.
pub fn idm_acceleration_raw(p: &IdmParams, st: &FollowState) -> Result<f64> {
    if st.gap.is_nan() || st.gap <= 0.0 {
        return Err(Error::GapViolation { gap: st.gap });
    }
    let s_star = desired_gap(p, st).max(0.0);
    let interaction = (s_star / st.gap).powi(2);
    Ok(free_flow_acceleration(p, st.v) - p.a * interaction)
}

/// IDM acceleration clamped to `[-DEFAULT_MAX_BRAKE, a]`.
pub fn idm_acceleration(p: &IdmParams, st: &FollowState) -> Result<f64> {
    idm_acceleration_limited(p, st, DEFAULT_MAX_BRAKE)
}

pub fn idm_acceleration_limited(p: &IdmParams, st: &FollowState, max_brake: f64) -> Result<f64> {
    Ok(idm_acceleration_raw(p, st)?.clamp(-max_brake, p.a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn st(v: f64, gap: f64, dv: f64) -> FollowState {
        FollowState { v, gap, dv }
    }

    #[test]
    fn desired_gap_values() {
        assert_eq!(desired_gap(&IdmParams::highway(2.0), &st(0.0, 1.0, 0.0)), 2.0);
        assert!((desired_gap(&IdmParams::highway(1.5), &st(25.0, 1.0, 0.0)) - 39.5).abs() < 1e-12);
        // 39.5 + 25*2 / (2 sqrt(0.73*1.67)) = 39.5 + 22.6423...
        let g = desired_gap(&IdmParams::highway(1.5), &st(25.0, 1.0, 2.0));
        assert!((g - 62.14).abs() < 5e-3, "{g}");
    }

    #[test]
    fn acceleration_values() {
        let p = IdmParams::highway(1.5);
        // 0.73 * (1 - 0.75^4 - 0.79^2)
        let acc = idm_acceleration(&p, &st(25.0, 50.0, 0.0)).unwrap();
        assert!((acc - 0.73 * (1.0 - 0.316_406_25 - 0.6241)).abs() < 1e-9);
        assert!((acc - 0.0434).abs() < 1e-4);

        let acc = idm_acceleration(&p, &st(0.0, 1e6, 0.0)).unwrap();
        assert!((acc - 0.73).abs() < 1e-9);

        let acc = idm_acceleration(&p, &st(p.v0, 1e9, 0.0)).unwrap();
        assert!(acc <= 0.0 && acc > -1e-9);
    }

    #[test]
    fn free_flow_values() {
        let p = IdmParams::highway(1.5);
        assert!(free_flow_acceleration(&p, p.v0).abs() < 1e-12);
        assert_eq!(free_flow_acceleration(&p, 0.0), 0.73);
        assert!((free_flow_acceleration(&p, 25.0) - 0.499).abs() < 1e-3);
    }

    #[test]
    fn gap_violation() {
        let p = IdmParams::highway(1.5);
        assert!(matches!(
            idm_acceleration(&p, &st(10.0, 0.0, 0.0)),
            Err(Error::GapViolation { .. })
        ));
        assert!(idm_acceleration(&p, &st(10.0, -1.0, 0.0)).is_err());
    }

    #[test]
    fn negative_desired_gap_is_floored() {
        let p = IdmParams::highway(0.5);
        // Rapidly opening gap drives s* negative; only the free term remains.
        let s = st(20.0, 30.0, -15.0);
        assert!(desired_gap(&p, &s) < 0.0);
        assert_eq!(idm_acceleration_raw(&p, &s).unwrap(), free_flow_acceleration(&p, 20.0));
    }

    #[test]
    fn output_clamped() {
        let p = IdmParams::highway(1.5);
        let acc = idm_acceleration(&p, &st(30.0, 1.0, 5.0)).unwrap();
        assert_eq!(acc, -DEFAULT_MAX_BRAKE);
    }

    #[test]
    fn equilibrium_gap_matches_zero_acceleration() {
        let p = IdmParams::highway(2.0);
        let s_eq = p.equilibrium_gap(25.0);
        assert!((s_eq - 62.89).abs() < 0.01, "{s_eq}");
        let acc = idm_acceleration_raw(&p, &st(25.0, s_eq, 0.0)).unwrap();
        assert!(acc.abs() < 1e-12);
        assert!(p.equilibrium_gap(p.v0).is_infinite());
    }

    #[test]
    fn headway_interpolation() {
        let speeds = [90.0, 100.0, 110.0, 120.0].map(kmh_to_mps);
        let table = HeadwayTable::new(speeds.into_iter().zip([2.23, 2.80, 3.50, 3.46])).unwrap();
        assert_eq!(table.headway_for_speed(speeds[1]), 2.80);
        let mid = table.headway_for_speed((speeds[0] + speeds[1]) / 2.0);
        assert!((mid - 2.515).abs() < 1e-12);
        assert_eq!(table.headway_for_speed(10.0), 2.23);
        assert_eq!(table.headway_for_speed(50.0), 3.46);
        assert!(HeadwayTable::new([]).is_err());
        assert!(HeadwayTable::new([(25.0, 0.0)]).is_err());
        assert!(HeadwayTable::new([(25.0, 1.0), (25.0, 2.0)]).is_err());
    }

    proptest! {
        #[test]
        fn monotone_in_gap_and_closing_speed(v in 0.0f64..40.0, gap in 1.0f64..300.0,
                dv in -10.0f64..10.0, dv_step in 0.0f64..5.0, s_step in 0.0f64..50.0) {
            let p = IdmParams::highway(1.5);
            let base = idm_acceleration(&p, &st(v, gap, dv)).unwrap();
            prop_assert!(idm_acceleration(&p, &st(v, gap + s_step, dv)).unwrap() >= base - 1e-12);
            prop_assert!(idm_acceleration(&p, &st(v, gap, dv + dv_step)).unwrap() <= base + 1e-12);
        }

        // Speed monotonicity needs s* non-decreasing in v, i.e. T + dv / (2 sqrt(ab)) >= 0.
        #[test]
        fn monotone_in_speed(v in 0.0f64..40.0, gap in 1.0f64..300.0,
                dv in -3.0f64..10.0, v_step in 0.0f64..5.0) {
            let p = IdmParams::highway(1.5);
            let base = idm_acceleration(&p, &st(v, gap, dv)).unwrap();
            prop_assert!(idm_acceleration(&p, &st(v + v_step, gap, dv)).unwrap() <= base + 1e-12);
        }
    }
}
