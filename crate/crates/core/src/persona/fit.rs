//! Grid-search extraction of the lateral sensitivity and reaction delay.
//!
//! Each case is replayed open-loop through the lateral keeper, starting from
//! the recorded ego position and driven by the recorded leader trace. The
//! (alpha, tau) pair with the smallest squared error against the recorded ego
//! trace wins; per-case winners are then averaged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lane::LaneGeometry;
use crate::lateral::{self, LateralParams, LateralState};
use crate::trajectory::{resample_samples, stepped_grid, TimeSpan, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    /// Replay step, s.
    pub ts: f64,
    /// Grid resolution for both parameters.
    pub step: f64,
    pub lane: LaneGeometry,
}

impl Default for FitOptions {
    fn default() -> Self {
        Self {
            ts: lateral::DEFAULT_TS,
            step: 0.05,
            lane: LaneGeometry::default(),
        }
    }
}

impl FitOptions {
    /// alpha in {0, step, ..., 1}.
    pub fn alpha_grid(&self) -> Vec<f64> {
        let n = (1.0 / self.step).round() as usize;
        (0..=n).map(|k| k as f64 / n as f64).collect()
    }

    /// tau in {step, 2 step, ..., 2}.
    pub fn tau_grid(&self) -> Vec<f64> {
        let per_unit = (1.0 / self.step).round() as usize;
        let n = (lateral::MAX_TAU / self.step).round() as usize;
        (1..=n).map(|k| k as f64 / per_unit as f64).collect()
    }
}

/// One recorded case: ego and leader traces and the span to fit over.
#[derive(Debug, Clone, Copy)]
pub struct FitCase<'a> {
    pub ego: &'a Trajectory,
    pub lead: &'a Trajectory,
    pub window: TimeSpan,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CaseFit {
    pub alpha: f64,
    pub tau: f64,
    pub sse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LateralFit {
    pub alpha: f64,
    pub tau: f64,
    pub per_case: Vec<CaseFit>,
}

fn replay_sse(
    params: &LateralParams,
    lane: &LaneGeometry,
    lead: &[f64],
    ego: &[f64],
) -> Result<f64> {
    let mut state = LateralState::new(ego[0], params);
    let mut sse = 0.0;
    for (k, w) in lead.windows(2).enumerate() {
        let dy = lateral::lead_displacement(w[1], w[0]);
        let y = state.step(params, lane, dy, true, lateral::DEFAULT_RETURN_TIME_CONSTANT)?;
        let e = y - ego[k + 1];
        sse += e * e;
    }
    Ok(sse)
}

/// Best grid point for a single case. Ties go to the smaller tau, then the
/// smaller alpha.
pub fn fit_case(case: &FitCase<'_>, opts: &FitOptions) -> Result<CaseFit> {
    case.window.validate()?;
    let grid = stepped_grid(case.window.start, case.window.end, opts.ts);
    if grid.len() < 2 {
        return Err(Error::InsufficientData(
            "case window shorter than one replay step".into(),
        ));
    }
    let lead: Vec<f64> = resample_samples(case.lead, &grid)?
        .into_iter()
        .map(|s| s.y)
        .collect();
    let ego: Vec<f64> = resample_samples(case.ego, &grid)?
        .into_iter()
        .map(|s| s.y)
        .collect();

    let alphas = opts.alpha_grid();
    let candidates: Vec<(f64, f64)> = opts
        .tau_grid()
        .into_iter()
        .flat_map(|tau| alphas.iter().map(move |&alpha| (alpha, tau)))
        .collect();
    let scores = candidates
        .par_iter()
        .map(|&(alpha, tau)| {
            let p = LateralParams::with_ts(alpha, tau, opts.ts)?;
            replay_sse(&p, &opts.lane, &lead, &ego)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut best = CaseFit {
        alpha: f64::NAN,
        tau: f64::NAN,
        sse: f64::INFINITY,
    };
    for (&(alpha, tau), &sse) in candidates.iter().zip(&scores) {
        if sse < best.sse {
            best = CaseFit { alpha, tau, sse };
        }
    }
    Ok(best)
}

/// Arithmetic mean of per-case optima.
pub fn average_optima(fits: &[CaseFit]) -> Result<(f64, f64)> {
    if fits.is_empty() {
        return Err(Error::InsufficientData("no case optima to average".into()));
    }
    let n = fits.len() as f64;
    Ok((
        fits.iter().map(|f| f.alpha).sum::<f64>() / n,
        fits.iter().map(|f| f.tau).sum::<f64>() / n,
    ))
}

pub fn fit_lateral_params(cases: &[FitCase<'_>], opts: &FitOptions) -> Result<LateralFit> {
    if cases.is_empty() {
        return Err(Error::InsufficientData("no cases to fit".into()));
    }
    let per_case = cases
        .iter()
        .map(|c| fit_case(c, opts))
        .collect::<Result<Vec<_>>>()?;
    let (alpha, tau) = average_optima(&per_case)?;
    Ok(LateralFit {
        alpha,
        tau,
        per_case,
    })
}
