//! Car-following episode extraction.
//!
//! A follower and its direct leader form an episode while both are in the same
//! lane, the leader is ahead, and no other vehicle in that lane sits between
//! them. Adjacency is evaluated at the follower's sample times.

use std::collections::BTreeMap;

use crate::trajectory::{Trajectory, TIME_EPS};

/// Minimum continuous following time, s.
pub const MIN_EPISODE_DURATION: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FollowingEpisode {
    pub lead: Trajectory,
    pub follower: Trajectory,
    pub lane_id: String,
    /// s.
    pub duration: f64,
}

fn position_at(tr: &Trajectory, t: f64) -> Option<f64> {
    tr.sample_at(t).ok().map(|s| s.x)
}

/// All episodes of at least `min_duration` seconds, ordered by lane, then
/// leader index, follower index and start time.
pub fn segment_following_episodes(trajs: &[Trajectory], min_duration: f64) -> Vec<FollowingEpisode> {
    let mut lanes: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, tr) in trajs.iter().enumerate() {
        lanes.entry(tr.lane_id()).or_default().push(i);
    }

    let mut out = Vec::new();
    for (lane, members) in &lanes {
        for &li in members {
            for &fi in members {
                let (lead, follower) = (&trajs[li], &trajs[fi]);
                if li == fi || lead.vehicle_id() == follower.vehicle_id() {
                    continue;
                }
                let start = lead.start_time().max(follower.start_time());
                let end = lead.end_time().min(follower.end_time());
                if end - start < min_duration - TIME_EPS {
                    continue;
                }
                let directly_follows = |t: f64| -> bool {
                    let (Some(xl), Some(xf)) = (position_at(lead, t), position_at(follower, t)) else {
                        return false;
                    };
                    if xl <= xf {
                        return false;
                    }
                    !members.iter().any(|&oi| {
                        oi != li
                            && oi != fi
                            && position_at(&trajs[oi], t).is_some_and(|xo| xo > xf && xo < xl)
                    })
                };

                let times: Vec<f64> = follower
                    .times()
                    .filter(|&t| t >= start - TIME_EPS && t <= end + TIME_EPS)
                    .collect();
                let mut run_start: Option<f64> = None;
                let mut run_end = 0.0;
                let flush = |from: Option<f64>, to: f64, out: &mut Vec<FollowingEpisode>| {
                    let Some(from) = from else { return };
                    if to - from < min_duration - TIME_EPS {
                        return;
                    }
                    if let (Ok(l), Ok(f)) = (lead.clip(from, to), follower.clip(from, to)) {
                        out.push(FollowingEpisode {
                            lead: l,
                            follower: f,
                            lane_id: lane.to_string(),
                            duration: to - from,
                        });
                    }
                };
                for &t in &times {
                    if directly_follows(t) {
                        run_start.get_or_insert(t);
                        run_end = t;
                    } else {
                        flush(run_start.take(), run_end, &mut out);
                    }
                }
                flush(run_start, run_end, &mut out);
            }
        }
    }
    out
}
