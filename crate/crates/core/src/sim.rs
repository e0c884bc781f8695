//! Fixed-step closed-loop simulation of the following-driving experiment.
//!
//! A scripted leader drives through speed stages and performs lateral
//! maneuvers; the ego vehicle is driven by IDM speed control and the delayed
//! lateral keeper. Integration is semi-implicit Euler at `ts` (50 Hz default).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::idm::{self, FollowState, HeadwayTable, IdmParams};
use crate::lane::LaneGeometry;
use crate::lateral::{self, LateralParams, LateralState};
use crate::trajectory::{TimeSpan, Trajectory, VehicleSample};

/// Seconds of case window before a maneuver starts.
pub const CASE_LEAD_IN: f64 = 1.0;
/// Seconds of case window after a maneuver ends.
pub const CASE_LEAD_OUT: f64 = 3.0;

pub const EGO_ID: &str = "ego";
pub const LEAD_ID: &str = "lead";
pub const LANE_ID: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stage {
    /// Leader speed, m/s.
    pub lead_speed: f64,
    /// Stage length, s.
    pub duration: f64,
}

/// One scripted lateral maneuver of the leader, repeated in every stage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LateralOffset {
    /// Peak displacement, m.
    pub magnitude: f64,
    /// +1 (left) or -1 (right).
    pub direction: i8,
    /// Maneuver start, seconds after the stage start.
    pub start_time: f64,
    pub ramp_duration: f64,
    pub hold_duration: f64,
}

impl LateralOffset {
    pub fn duration(&self) -> f64 {
        2.0 * self.ramp_duration + self.hold_duration
    }

    pub fn end_time(&self) -> f64 {
        self.start_time + self.duration()
    }

    fn signed(&self) -> f64 {
        self.magnitude * f64::from(self.direction)
    }
}

/// Raised-cosine ramp out, hold, raised-cosine ramp back; zero outside.
/// `t_local` is measured from the maneuver start.
pub fn lead_lateral_profile(offset: &LateralOffset, t_local: f64) -> f64 {
    let r = offset.ramp_duration;
    let h = offset.hold_duration;
    let peak = offset.signed();
    if t_local <= 0.0 || t_local >= 2.0 * r + h {
        0.0
    } else if t_local < r {
        peak * 0.5 * (1.0 - (std::f64::consts::PI * t_local / r).cos())
    } else if t_local <= r + h {
        peak
    } else {
        let u = t_local - r - h;
        peak * 0.5 * (1.0 + (std::f64::consts::PI * u / r).cos())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub stages: Vec<Stage>,
    pub offsets: Vec<LateralOffset>,
    #[serde(default)]
    pub lane: LaneGeometry,
    /// Initial center-to-center gap, m. Defaults to the equilibrium gap.
    #[serde(default)]
    pub initial_gap: Option<f64>,
    /// Defaults to the first stage's leader speed.
    #[serde(default)]
    pub ego_initial_speed: Option<f64>,
    #[serde(default = "default_true")]
    pub lead_swap_at_stage_boundary: bool,
}

fn default_true() -> bool {
    true
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        self.lane.validate()?;
        if self.stages.is_empty() {
            return Err(Error::InvalidInput("scenario has no stages".into()));
        }
        for (i, s) in self.stages.iter().enumerate() {
            if !(s.lead_speed.is_finite() && s.lead_speed > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "stage {i}: leader speed must be positive"
                )));
            }
            if !(s.duration.is_finite() && s.duration > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "stage {i}: duration must be positive"
                )));
            }
        }
        let half_room = (self.lane.lane_width - self.lane.ego_width) / 2.0;
        let min_stage = self
            .stages
            .iter()
            .map(|s| s.duration)
            .fold(f64::INFINITY, f64::min);
        for (j, o) in self.offsets.iter().enumerate() {
            let finite = [o.magnitude, o.start_time, o.ramp_duration, o.hold_duration]
                .iter()
                .all(|v| v.is_finite());
            if !finite
                || o.magnitude < 0.0
                || o.start_time < 0.0
                || o.ramp_duration <= 0.0
                || o.hold_duration < 0.0
            {
                return Err(Error::InvalidInput(format!("offset {j}: invalid timing or magnitude")));
            }
            if o.direction != 1 && o.direction != -1 {
                return Err(Error::InvalidInput(format!(
                    "offset {j}: direction must be +1 or -1"
                )));
            }
            if o.magnitude > half_room + 1e-12 {
                return Err(Error::InvalidInput(format!(
                    "offset {j}: {} m would put the leader outside its lane",
                    o.magnitude
                )));
            }
            if o.end_time() > min_stage {
                return Err(Error::InvalidInput(format!(
                    "offset {j}: maneuver ends after the shortest stage"
                )));
            }
        }
        for (j, w) in self.offsets.windows(2).enumerate() {
            if w[1].start_time - CASE_LEAD_IN < w[0].end_time() + CASE_LEAD_OUT {
                return Err(Error::InvalidInput(format!(
                    "offsets {j} and {}: case windows overlap or are out of order",
                    j + 1
                )));
            }
        }
        if let Some(g) = self.initial_gap {
            if !(g.is_finite() && g > 0.0) {
                return Err(Error::InvalidInput("initial gap must be positive".into()));
            }
        }
        if let Some(v) = self.ego_initial_speed {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidInput(
                    "initial ego speed must be non-negative".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn total_duration(&self) -> f64 {
        self.stages.iter().map(|s| s.duration).sum()
    }

    /// Start time of every stage.
    pub fn stage_starts(&self) -> Vec<f64> {
        self.stages
            .iter()
            .scan(0.0, |acc, s| {
                let start = *acc;
                *acc += s.duration;
                Some(start)
            })
            .collect()
    }

    fn stage_index(&self, starts: &[f64], t: f64) -> usize {
        starts.partition_point(|&s| s <= t).saturating_sub(1)
    }

    /// Leader lateral position at absolute time `t`.
    pub fn lead_lateral(&self, t: f64) -> f64 {
        self.lead_lateral_with(&self.stage_starts(), t)
    }

    fn lead_lateral_with(&self, starts: &[f64], t: f64) -> f64 {
        let i = self.stage_index(starts, t);
        let local = t - starts[i];
        self.offsets
            .iter()
            .map(|o| lead_lateral_profile(o, local - o.start_time))
            .sum()
    }

    /// One window per scripted maneuver per stage.
    pub fn case_windows(&self) -> Vec<CaseWindow> {
        let mut out = Vec::new();
        for (i, (stage, start)) in self.stages.iter().zip(self.stage_starts()).enumerate() {
            let stage_end = start + stage.duration;
            for o in &self.offsets {
                out.push(CaseWindow {
                    start: (start + o.start_time - CASE_LEAD_IN).max(start),
                    end: (start + o.end_time() + CASE_LEAD_OUT).min(stage_end),
                    stage_index: i,
                    stage_speed: stage.lead_speed,
                    stage_start: start,
                    stage_end,
                    offset_magnitude: o.magnitude,
                    offset_direction: o.direction,
                });
            }
        }
        out
    }
}

/// The four-stage highway experiment: leaders at 90/100/110/120 km/h, each
/// stage carrying offsets of 0.3, 0.4, 0.5 and 0.6 m in alternating
/// directions. Maneuvers ramp for 2 s, hold for 5 s and are 11 s apart; the
/// first starts 60 s into the stage so speeds settle after the leader swap.
pub fn default_scenario() -> ScenarioSpec {
    let speeds = [25.0, 27.78, 30.56, 33.33];
    let magnitudes = [0.3, 0.4, 0.5, 0.6];
    ScenarioSpec {
        stages: speeds
            .iter()
            .map(|&lead_speed| Stage {
                lead_speed,
                duration: 200.0,
            })
            .collect(),
        offsets: magnitudes
            .iter()
            .enumerate()
            .map(|(j, &magnitude)| LateralOffset {
                magnitude,
                direction: if j % 2 == 0 { 1 } else { -1 },
                start_time: 120.0 + 20.0 * j as f64,
                ramp_duration: 2.0,
                hold_duration: 5.0,
            })
            .collect(),
        lane: LaneGeometry::default(),
        initial_gap: None,
        ego_initial_speed: None,
        lead_swap_at_stage_boundary: true,
    }
}

/// Time span of one scripted maneuver, used for case-level analysis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseWindow {
    pub start: f64,
    pub end: f64,
    pub stage_index: usize,
    /// Leader speed of the stage, m/s.
    pub stage_speed: f64,
    pub stage_start: f64,
    pub stage_end: f64,
    pub offset_magnitude: f64,
    pub offset_direction: i8,
}

impl CaseWindow {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    pub fn span(&self) -> TimeSpan {
        TimeSpan {
            start: self.start,
            end: self.end,
        }
    }

    pub fn stage_span(&self) -> TimeSpan {
        TimeSpan {
            start: self.stage_start,
            end: self.stage_end,
        }
    }
}

/// Controller personalization: per-speed time headway plus lateral response.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerConfig {
    pub headways: HeadwayTable,
    pub lateral: LateralParams,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Step, s.
    pub ts: f64,
    /// Ego lateral tracking lag time constant, s; 0 tracks ideally.
    pub kappa: f64,
    /// IDM parameters apart from the time headway.
    pub idm: IdmParams,
    pub max_brake: f64,
    /// Centerline return time constant with no leader, s.
    pub return_time_constant: f64,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            ts: lateral::DEFAULT_TS,
            kappa: 0.0,
            idm: IdmParams::highway(1.5),
            max_brake: idm::DEFAULT_MAX_BRAKE,
            return_time_constant: lateral::DEFAULT_RETURN_TIME_CONSTANT,
        }
    }
}

impl SimConfig {
    pub fn with_kappa(kappa: f64) -> Self {
        Self {
            kappa,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    pub ego: Trajectory,
    pub lead: Trajectory,
    pub case_windows: Vec<CaseWindow>,
    pub ts: f64,
    pub scenario: ScenarioSpec,
}

impl SimLog {
    /// Center-to-center gap at every logged step.
    pub fn gaps(&self) -> Vec<f64> {
        self.lead
            .samples()
            .iter()
            .zip(self.ego.samples())
            .map(|(l, e)| l.x - e.x)
            .collect()
    }
}

fn equilibrium_gap(idm: &IdmParams, headways: &HeadwayTable, speed: f64) -> Result<f64> {
    let p = idm.with_headway(headways.headway_for_speed(speed));
    let g = p.equilibrium_gap(speed);
    if !g.is_finite() {
        return Err(Error::InvalidInput(format!(
            "leader speed {speed} m/s is not below the desired velocity {} m/s",
            p.v0
        )));
    }
    Ok(g)
}

pub fn run_scenario(
    spec: &ScenarioSpec,
    controller: &ControllerConfig,
    config: &SimConfig,
) -> Result<SimLog> {
    spec.validate()?;
    controller.headways.validate()?;
    controller.lateral.validate()?;
    config.idm.validate()?;
    if !(config.ts > 0.0 && config.kappa >= 0.0 && config.max_brake > 0.0) {
        return Err(Error::Configuration(format!("invalid simulation config {config:?}")));
    }
    let lateral = LateralParams {
        ts: config.ts,
        ..controller.lateral
    };

    let ts = config.ts;
    let starts = spec.stage_starts();
    let n_steps = (spec.total_duration() / ts).round() as usize;
    let stage_at = |k: usize| spec.stage_index(&starts, k as f64 * ts);
    let track_gain = 1.0 - (-ts / config.kappa).exp();

    let first_speed = spec.stages[0].lead_speed;
    let mut stage = 0;
    let mut v_lead = first_speed;
    let mut v_ego = spec.ego_initial_speed.unwrap_or(first_speed);
    let mut x_ego = 0.0;
    let mut x_lead = match spec.initial_gap {
        Some(g) => g,
        None => equilibrium_gap(&config.idm, &controller.headways, first_speed)?,
    };
    let mut y_lead = spec.lead_lateral_with(&starts, 0.0);
    let mut y_ego = 0.0;
    let mut keeper = LateralState::new(0.0, &lateral);

    let mut ego = Vec::with_capacity(n_steps + 1);
    let mut lead = Vec::with_capacity(n_steps + 1);
    ego.push(VehicleSample::new(0.0, x_ego, y_ego, v_ego));
    lead.push(VehicleSample::new(0.0, x_lead, y_lead, v_lead));

    for k in 0..n_steps {
        let t_next = (k + 1) as f64 * ts;
        let gap = x_lead - x_ego;
        if gap <= 0.0 {
            return Err(Error::Crash {
                t: k as f64 * ts,
                gap,
            });
        }
        let speed_now = spec.stages[stage].lead_speed;
        let idm = config
            .idm
            .with_headway(controller.headways.headway_for_speed(speed_now));
        let acc = idm::idm_acceleration_limited(
            &idm,
            &FollowState {
                v: v_ego,
                gap,
                dv: v_ego - v_lead,
            },
            config.max_brake,
        )?;
        v_ego = (v_ego + acc * ts).max(0.0);
        x_ego += v_ego * ts;

        let next_stage = stage_at(k + 1);
        v_lead = spec.stages[next_stage].lead_speed;
        if next_stage != stage && spec.lead_swap_at_stage_boundary {
            x_lead = x_ego + equilibrium_gap(&config.idm, &controller.headways, v_lead)?;
        } else {
            x_lead += v_lead * ts;
        }
        stage = next_stage;

        let y_lead_next = spec.lead_lateral_with(&starts, t_next);
        let dy = lateral::lead_displacement(y_lead_next, y_lead);
        y_lead = y_lead_next;
        let y_desired = keeper.step(
            &lateral,
            &spec.lane,
            dy,
            true,
            config.return_time_constant,
        )?;
        y_ego = if config.kappa > 0.0 {
            y_ego + (y_desired - y_ego) * track_gain
        } else {
            y_desired
        };

        ego.push(VehicleSample::new(t_next, x_ego, y_ego, v_ego));
        lead.push(VehicleSample::new(t_next, x_lead, y_lead, v_lead));
    }

    let final_gap = x_lead - x_ego;
    if final_gap <= 0.0 {
        return Err(Error::Crash {
            t: n_steps as f64 * ts,
            gap: final_gap,
        });
    }

    Ok(SimLog {
        ego: Trajectory::new(EGO_ID, LANE_ID, ego)?,
        lead: Trajectory::new(LEAD_ID, LANE_ID, lead)?,
        case_windows: spec.case_windows(),
        ts,
        scenario: spec.clone(),
    })
}
