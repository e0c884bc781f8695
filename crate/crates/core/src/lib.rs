//! Personalized highway-pilot assist models and the offline pipeline that
//! calibrates them from trajectory and gaze data.
//!
//! * [`idm`]: longitudinal speed control with a personalized time headway.
//! * [`lateral`]: delayed stimulus-response lane keeping with a safety clamp.
//! * [`sim`]: fixed-step closed-loop simulation of the following experiment.
//! * [`analysis`]: trajectory similarity, affected cases, gaze, headway, ANOVA.
//! * [`persona`]: style clustering, parameter fitting and driver profiles.
//! * [`io`]: CSV/JSON formats, highD-style ingestion, episode segmentation.

pub mod analysis;
pub mod error;
pub mod idm;
pub mod io;
pub mod lane;
pub mod lateral;
pub mod persona;
pub mod sim;
pub mod trajectory;

pub use error::{Error, Result};
pub use idm::{FollowState, HeadwayTable, IdmParams};
pub use lane::LaneGeometry;
pub use lateral::{LateralParams, LateralState};
pub use persona::{DriverProfile, Style};
pub use sim::{default_scenario, run_scenario, CaseWindow, ControllerConfig, ScenarioSpec, SimConfig, SimLog};
pub use trajectory::{resample, TimeSpan, Trajectory, VehicleSample};
