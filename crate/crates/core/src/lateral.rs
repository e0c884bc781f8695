//! Delayed stimulus-response lane keeping.
//!
//! The desired lateral position integrates the leader's lateral displacement
//! observed `d` steps earlier, scaled by the driver's sensitivity:
//!
//! ```text
//! y_e(k) = clamp(y_e(k-1) + alpha * dy_lead(k - d)),   d = round(tau / ts)
//! ```
//!
//! Displacements are per-step differences of the leader's lateral position in
//! the shared lane frame. Before `d` observations exist the delayed value is 0.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lane::LaneGeometry;

/// Sampling time of the controller, s (50 Hz).
pub const DEFAULT_TS: f64 = 0.02;

/// Time constant of the return to the centerline when no leader is present, s.
pub const DEFAULT_RETURN_TIME_CONSTANT: f64 = 2.0;

pub const MAX_TAU: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LateralParams {
    /// Sensitivity to the leader's lateral motion; negative mirrors it.
    pub alpha: f64,
    /// Reaction delay, s.
    pub tau: f64,
    /// Sampling time, s.
    pub ts: f64,
}

impl LateralParams {
    pub fn new(alpha: f64, tau: f64) -> Result<Self> {
        Self::with_ts(alpha, tau, DEFAULT_TS)
    }

    pub fn with_ts(alpha: f64, tau: f64, ts: f64) -> Result<Self> {
        let p = Self { alpha, tau, ts };
        p.validate()?;
        Ok(p)
    }

    /// Unaffected driver: ignores the leader entirely.
    pub fn centerline() -> Self {
        Self {
            alpha: 0.0,
            tau: 0.0,
            ts: DEFAULT_TS,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha.abs() <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "alpha must lie in [-1, 1], got {}",
                self.alpha
            )));
        }
        if !(self.tau.is_finite() && (0.0..=MAX_TAU).contains(&self.tau)) {
            return Err(Error::InvalidInput(format!(
                "tau must lie in [0, {MAX_TAU}], got {}",
                self.tau
            )));
        }
        if !(self.ts.is_finite() && self.ts > 0.0) {
            return Err(Error::InvalidInput(format!(
                "sampling time must be positive, got {}",
                self.ts
            )));
        }
        Ok(())
    }

    /// Delay in steps, `round(tau / ts)` with ties to even.
    pub fn delay_steps(&self) -> usize {
        delay_steps(self.tau, self.ts)
    }
}

/// `round(tau / ts)`, ties to even. The quotient is first snapped to 1e-9 so
/// that representation noise (e.g. 0.05 / 0.02) does not decide a tie.
pub fn delay_steps(tau: f64, ts: f64) -> usize {
    let q = tau / ts;
    let snapped = (q * 1e9).round() / 1e9;
    snapped.round_ties_even().max(0.0) as usize
}

/// Per-step lateral displacement of the leader.
pub fn lead_displacement(y_lead_now: f64, y_lead_prev: f64) -> f64 {
    y_lead_now - y_lead_prev
}

#[derive(Debug, Clone, PartialEq)]
pub struct LateralState {
    y_e: f64,
    /// The last `max(d, 1)` observed displacements, oldest first.
    buffer: VecDeque<f64>,
}

impl LateralState {
    /// State at episode start; the displacement history is all zeros.
    pub fn new(y_e0: f64, params: &LateralParams) -> Self {
        Self::with_capacity(y_e0, params.delay_steps().max(1))
    }

    pub fn with_capacity(y_e0: f64, len: usize) -> Self {
        Self {
            y_e: y_e0,
            buffer: std::iter::repeat_n(0.0, len).collect(),
        }
    }

    pub fn desired_lateral(&self) -> f64 {
        self.y_e
    }

    pub fn buffer_len(&self) -> usize {
        self.buffer.len()
    }

    /// Advances one step and returns the new desired lateral position.
    ///
    /// Without a leader the state relaxes exponentially toward the centerline
    /// with time constant `return_tau` and a zero displacement is recorded.
    pub fn step(
        &mut self,
        params: &LateralParams,
        lane: &LaneGeometry,
        new_lead_displacement: f64,
        lead_present: bool,
        return_tau: f64,
    ) -> Result<f64> {
        let d = params.delay_steps();
        if self.buffer.len() < d.max(1) {
            return Err(Error::Configuration(format!(
                "displacement buffer holds {} entries but delay needs {}",
                self.buffer.len(),
                d
            )));
        }
        if !new_lead_displacement.is_finite() {
            return Err(Error::InvalidInput(
                "lead displacement must be finite".into(),
            ));
        }
        let observed = if lead_present {
            new_lead_displacement
        } else {
            0.0
        };
        // The entry read is exactly d steps older than `observed`.
        let delayed = if d == 0 {
            observed
        } else {
            self.buffer[self.buffer.len() - d]
        };
        self.buffer.pop_front();
        self.buffer.push_back(observed);

        let candidate = if lead_present {
            self.y_e + params.alpha * delayed
        } else if return_tau > 0.0 {
            self.y_e * (-params.ts / return_tau).exp()
        } else {
            0.0
        };
        self.y_e = lane.clamp_lateral(candidate);
        Ok(self.y_e)
    }
}

/// Replays the model open-loop over a leader lateral trace sampled every `ts`.
///
/// The first output is `y_e0`; sample `k` consumes the displacement between
/// lead samples `k-1` and `k`.
pub fn replay(
    params: &LateralParams,
    lane: &LaneGeometry,
    y_e0: f64,
    lead_lateral: &[f64],
) -> Result<Vec<f64>> {
    let mut state = LateralState::new(lane.clamp_lateral(y_e0), params);
    let mut out = Vec::with_capacity(lead_lateral.len());
    out.push(state.desired_lateral());
    for w in lead_lateral.windows(2) {
        let dy = lead_displacement(w[1], w[0]);
        out.push(state.step(params, lane, dy, true, DEFAULT_RETURN_TIME_CONSTANT)?);
    }
    out.truncate(lead_lateral.len());
    Ok(out)
}
