//! Synthetic data and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lanepilot::analysis::DriverFeatures;
use lanepilot::sim::{LateralOffset, Stage};
use lanepilot::{HeadwayTable, LaneGeometry, ScenarioSpec, Trajectory, VehicleSample};

pub const TS: f64 = 0.02;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Textbook max-min, no shortcuts.
pub fn brute_hausdorff(a: &[[f64; 2]], b: &[[f64; 2]]) -> f64 {
    let directed = |p: &[[f64; 2]], q: &[[f64; 2]]| {
        p.iter()
            .map(|x| {
                q.iter()
                    .map(|y| ((x[0] - y[0]) * (x[0] - y[0]) + (x[1] - y[1]) * (x[1] - y[1])).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    directed(a, b).max(directed(b, a))
}

pub fn random_points(rng: &mut ChaCha8Rng, max_len: usize) -> Vec<[f64; 2]> {
    let n = rng.random_range(1..=max_len);
    (0..n)
        .map(|_| [rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0)])
        .collect()
}

/// Headway row at 90/100/110/120 km/h.
pub fn stage_headways(t_p: [f64; 4]) -> HeadwayTable {
    HeadwayTable::new([90.0, 100.0, 110.0, 120.0].iter().zip(t_p).map(|(kph, t)| (kph / 3.6, t))).unwrap()
}

/// One stage at `speed` with a single maneuver starting 10 s in.
pub fn single_maneuver_scenario(speed: f64, magnitude: f64, direction: i8) -> ScenarioSpec {
    ScenarioSpec {
        stages: vec![Stage {
            lead_speed: speed,
            duration: 40.0,
        }],
        offsets: vec![LateralOffset {
            magnitude,
            direction,
            start_time: 10.0,
            ramp_duration: 2.0,
            hold_duration: 5.0,
        }],
        lane: LaneGeometry::default(),
        initial_gap: None,
        ego_initial_speed: None,
        lead_swap_at_stage_boundary: true,
    }
}

/// Leader lateral trace on a `TS` grid: flat, a raised-cosine excursion to
/// `peak` and back, flat again.
pub fn maneuver_trace(n: usize, onset: usize, ramp: usize, hold: usize, peak: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            if k < onset {
                return 0.0;
            }
            let u = k - onset;
            let half = |s: f64| 0.5 * (1.0 - (std::f64::consts::PI * s).cos());
            if u < ramp {
                peak * half(u as f64 / ramp as f64)
            } else if u < ramp + hold {
                peak
            } else if u < 2 * ramp + hold {
                peak * (1.0 - half((u - ramp - hold) as f64 / ramp as f64))
            } else {
                0.0
            }
        })
        .collect()
}

/// The delayed stimulus-response recurrence written out directly:
/// `y[k] = clamp(y[k-1] + alpha * (lead[k-d] - lead[k-d-1]))`, with no
/// displacement before the first sample.
pub fn generate_ego(lead: &[f64], alpha: f64, d: usize, y0: f64, bound: f64) -> Vec<f64> {
    let mut y = vec![y0; lead.len()];
    for k in 1..lead.len() {
        let dy = if k > d { lead[k - d] - lead[k - d - 1] } else { 0.0 };
        y[k] = (y[k - 1] + alpha * dy).clamp(-bound, bound);
    }
    y
}

pub fn trajectory_from_lateral(id: &str, ys: &[f64], speed: f64) -> Trajectory {
    let samples = ys
        .iter()
        .enumerate()
        .map(|(k, &y)| {
            let t = k as f64 * TS;
            VehicleSample::new(t, speed * t, y, speed)
        })
        .collect();
    Trajectory::new(id, "1", samples).unwrap()
}

/// Two tight blobs of drivers in (pc_a, pc_g); returns features and the ids
/// built into the high-pc_a blob.
pub fn two_blobs(rng: &mut ChaCha8Rng, per_blob: usize, radius: f64) -> (Vec<DriverFeatures>, BTreeSet<String>) {
    let centers = [(75.0, 60.0), (15.0, 35.0)];
    let mut out = Vec::new();
    let mut high = BTreeSet::new();
    for (b, &(ca, cg)) in centers.iter().enumerate() {
        for i in 0..per_blob {
            let r = radius * rng.random_range(0.0f64..1.0).sqrt();
            let th = rng.random_range(0.0..std::f64::consts::TAU);
            let id = format!("b{b}d{i:02}");
            if b == 0 {
                high.insert(id.clone());
            }
            out.push(DriverFeatures::new(id, ca + r * th.cos(), cg + r * th.sin()).unwrap());
        }
    }
    (out, high)
}

/// Exhaustive best 2-partition under the k-means objective on z-scored
/// features. Returns the member set containing the first driver by id.
pub fn brute_force_partition(features: &[DriverFeatures]) -> BTreeSet<String> {
    let mut f: Vec<&DriverFeatures> = features.iter().collect();
    f.sort_by(|a, b| a.driver_id.cmp(&b.driver_id));
    let z = |vals: Vec<f64>| -> Vec<f64> {
        let n = vals.len() as f64;
        let m = vals.iter().sum::<f64>() / n;
        let sd = (vals.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n).sqrt();
        vals.iter().map(|v| if sd > 0.0 { (v - m) / sd } else { 0.0 }).collect()
    };
    let za = z(f.iter().map(|d| d.pc_a).collect());
    let zg = z(f.iter().map(|d| d.pc_g).collect());
    let n = f.len();
    assert!(n <= 20, "brute force over 2^(n-1) partitions");
    let sse = |members: &[usize]| -> f64 {
        if members.is_empty() {
            return 0.0;
        }
        let k = members.len() as f64;
        let ma = members.iter().map(|&i| za[i]).sum::<f64>() / k;
        let mg = members.iter().map(|&i| zg[i]).sum::<f64>() / k;
        members.iter().map(|&i| (za[i] - ma).powi(2) + (zg[i] - mg).powi(2)).sum()
    };
    let mut best = (f64::INFINITY, 0u32);
    // member 0 always sits in the first part
    for mask in 0u32..(1 << (n - 1)) {
        let (mut a, mut b) = (vec![0], Vec::new());
        for i in 1..n {
            if mask >> (i - 1) & 1 == 1 {
                b.push(i);
            } else {
                a.push(i);
            }
        }
        if b.is_empty() {
            continue;
        }
        let cost = sse(&a) + sse(&b);
        if cost < best.0 {
            best = (cost, mask);
        }
    }
    (0..n)
        .filter(|&i| i == 0 || best.1 >> (i - 1) & 1 == 0)
        .map(|i| f[i].driver_id.clone())
        .collect()
}

/// A vehicle that exists on frames `[first, last]` of a shared 25 Hz clock.
#[derive(Debug, Clone)]
pub struct FleetVehicle {
    pub id: String,
    pub lane: String,
    pub first: usize,
    pub last: usize,
    pub x0: f64,
    pub v: f64,
}

pub const FRAME: f64 = 0.04;

impl FleetVehicle {
    pub fn x(&self, frame: usize) -> f64 {
        self.x0 + self.v * frame as f64 * FRAME
    }

    pub fn trajectory(&self) -> Trajectory {
        let samples = (self.first..=self.last)
            .map(|k| VehicleSample::new(k as f64 * FRAME, self.x(k), 0.0, self.v))
            .collect();
        Trajectory::new(self.id.clone(), self.lane.clone(), samples).unwrap()
    }
}

pub fn random_fleet(rng: &mut ChaCha8Rng, lanes: usize, per_lane: usize) -> Vec<FleetVehicle> {
    let mut out = Vec::new();
    for l in 0..lanes {
        for i in 0..per_lane {
            let first = rng.random_range(0..500);
            let len = rng.random_range(125..1000);
            out.push(FleetVehicle {
                id: format!("v{l}{i}"),
                lane: format!("{}", l + 1),
                first,
                last: first + len,
                x0: rng.random_range(0.0..300.0),
                v: rng.random_range(20.0..35.0),
            });
        }
    }
    out
}

/// `(lane, lead, follower, first frame, last frame)` of every run of frames in
/// which `lead` is the vehicle directly ahead of `follower`, found by sorting
/// each lane's vehicles by position frame by frame.
pub fn brute_force_episodes(fleet: &[FleetVehicle], min_duration: f64) -> BTreeSet<(String, String, String, usize, usize)> {
    let horizon = fleet.iter().map(|v| v.last).max().unwrap_or(0);
    let lanes: BTreeSet<&str> = fleet.iter().map(|v| v.lane.as_str()).collect();
    let mut open: std::collections::BTreeMap<(String, String, String), (usize, usize)> = Default::default();
    let mut out = BTreeSet::new();
    let close = |key: (String, String, String), run: (usize, usize), out: &mut BTreeSet<_>| {
        if (run.1 - run.0) as f64 * FRAME >= min_duration - 1e-9 {
            out.insert((key.0, key.1, key.2, run.0, run.1));
        }
    };
    for k in 0..=horizon {
        let mut adjacent = BTreeSet::new();
        for lane in &lanes {
            let mut present: Vec<&FleetVehicle> = fleet
                .iter()
                .filter(|v| v.lane == *lane && v.first <= k && k <= v.last)
                .collect();
            present.sort_by(|a, b| b.x(k).total_cmp(&a.x(k)));
            for w in present.windows(2) {
                adjacent.insert((lane.to_string(), w[0].id.clone(), w[1].id.clone()));
            }
        }
        let keys: Vec<_> = open.keys().cloned().collect();
        for key in keys {
            if !adjacent.contains(&key) {
                let run = open.remove(&key).unwrap();
                close(key, run, &mut out);
            }
        }
        for key in adjacent {
            open.entry(key).and_modify(|r| r.1 = k).or_insert((k, k));
        }
    }
    for (key, run) in open {
        close(key, run, &mut out);
    }
    out
}
