//! Fixtures shared by the pipeline benchmarks.

use lanepilot::sim::{default_scenario, run_scenario, ControllerConfig, SimConfig, SimLog};
use lanepilot::{HeadwayTable, LateralParams};

/// Default scenario driven by a mimicking controller.
pub fn reference_log(alpha: f64, tau: f64) -> SimLog {
    let controller = ControllerConfig {
        headways: HeadwayTable::constant(1.5).expect("valid headway"),
        lateral: LateralParams::new(alpha, tau).expect("valid lateral params"),
    };
    run_scenario(&default_scenario(), &controller, &SimConfig::default()).expect("simulation")
}
