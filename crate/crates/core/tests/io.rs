mod common;

use std::collections::BTreeSet;
use std::fmt::Write as _;

use proptest::prelude::*;

use common::*;
use lanepilot::io::{
    read_highd, read_lane_centers, read_native, segment_following_episodes, write_native, write_native_to,
    HighdOptions, LaneCenters, Precision,
};
use lanepilot::{Error, Trajectory, VehicleSample};

fn arb_trajectory() -> impl Strategy<Value = Trajectory> {
    (
        // fields are trimmed on read, so ids carry no edge whitespace
        "[a-z]([a-z0-9_ ,]{0,5}[a-z0-9])?",
        "[1-4]",
        0.0..1e4f64,
        prop::collection::vec((1e-3..2.0f64, -1e4..1e4f64, -2.0..2.0f64, 0.0..60.0f64), 2..40),
    )
        .prop_map(|(id, lane, t0, steps)| {
            let mut t = t0;
            let samples = steps
                .into_iter()
                .map(|(dt, x, y, v)| {
                    t += dt;
                    VehicleSample::new(t, x, y, v)
                })
                .collect();
            Trajectory::new(id, lane, samples).unwrap()
        })
}

proptest! {
    #[test]
    fn native_round_trip_is_lossless(tr in arb_trajectory()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_native(&path, &[&tr], Precision::full()).unwrap();
        let back = read_native(&path).unwrap();
        prop_assert_eq!(back.len(), 1);
        prop_assert_eq!(&back[0], &tr);
    }

    #[test]
    fn fixed_precision_stays_within_half_an_ulp_of_the_decimal(tr in arb_trajectory()) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        write_native(&path, &[&tr], Precision(Some(9))).unwrap();
        if let Ok(back) = read_native(&path) {
            for (a, b) in tr.samples().iter().zip(back[0].samples()) {
                prop_assert!((a.y - b.y).abs() <= 5e-10 + 1e-12);
                prop_assert!((a.x - b.x).abs() <= 5e-10 + 1e-9);
            }
        }
    }
}

#[test]
fn writer_is_deterministic() {
    let tr = trajectory_from_lateral("ego", &[0.0, 0.1, 1e-17, -0.3], 25.0);
    let mut a = Vec::new();
    let mut b = Vec::new();
    write_native_to(&mut a, &[&tr], Precision::full()).unwrap();
    write_native_to(&mut b, &[&tr], Precision::full()).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("t,vehicle_id,lane_id,x,y,v\n"));
    assert!(text.contains("1e-17"));
}

fn highd_file(frames: usize, vx: f64) -> String {
    let mut s = String::from("frame,id,x,y,width,height,xVelocity,laneId\n");
    for f in 1..=frames {
        let x = 100.0 + vx * (f - 1) as f64 / 25.0;
        writeln!(s, "{f},7,{x},10.5,4.5,1.9,{vx},3").unwrap();
    }
    s
}

#[test]
fn highd_ten_seconds_at_25_hz() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("tracks.csv");
    std::fs::write(&rec, highd_file(250, 30.0)).unwrap();
    let lanes = LaneCenters([("3".to_string(), 11.0)].into_iter().collect());
    let trajs = read_highd(&rec, &lanes, &HighdOptions::default()).unwrap();
    assert_eq!(trajs.len(), 1);
    let t = &trajs[0];
    assert_eq!(t.len(), 250);
    let times: Vec<f64> = t.times().collect();
    assert!(times.windows(2).all(|w| ((w[1] - w[0]) - 0.04).abs() < 1e-12));
    // box center 10.5 + 0.95 sits 0.45 m right of the 11.0 m lane center
    // in image coordinates; travelling in +x puts that on the left.
    assert!((t.samples()[0].y - (-(11.45 - 11.0))).abs() < 1e-12);
    assert!(t.samples().iter().all(|s| s.v == 30.0));
}

#[test]
fn highd_missing_lane_names_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let rec = dir.path().join("tracks.csv");
    std::fs::write(&rec, highd_file(5, 30.0)).unwrap();
    let lanes = LaneCenters(Default::default());
    match read_highd(&rec, &lanes, &HighdOptions::default()) {
        Err(Error::Parse { row, msg, .. }) => {
            assert_eq!(row, 2);
            assert!(msg.contains("lane"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn lane_center_table_parses() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("lanes.csv");
    std::fs::write(&p, "lane_id,center_y\n2,7.25\n3,11.0\n").unwrap();
    let lanes = read_lane_centers(&p).unwrap();
    assert_eq!(lanes.get("3"), Some(11.0));
    assert_eq!(lanes.get("9"), None);
}

#[test]
fn native_rejects_duplicate_time_with_row_number() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    std::fs::write(&p, "t,vehicle_id,lane_id,x,y,v\n0,a,1,0,0,20\n0.5,a,1,10,0,20\n0.5,a,1,20,0,20\n").unwrap();
    match read_native(&p) {
        Err(Error::Parse { row, .. }) => assert_eq!(row, 4),
        other => panic!("{other:?}"),
    }
}

fn fleet_vehicle(id: &str, lane: &str, first: usize, last: usize, x0: f64, v: f64) -> FleetVehicle {
    FleetVehicle {
        id: id.into(),
        lane: lane.into(),
        first,
        last,
        x0,
        v,
    }
}

fn episodes(fleet: &[FleetVehicle]) -> BTreeSet<(String, String, usize, usize)> {
    let trajs: Vec<_> = fleet.iter().map(|v| v.trajectory()).collect();
    segment_following_episodes(&trajs, 10.0)
        .iter()
        .map(|e| {
            (
                e.lead.vehicle_id().to_string(),
                e.follower.vehicle_id().to_string(),
                (e.follower.start_time() / FRAME).round() as usize,
                (e.follower.end_time() / FRAME).round() as usize,
            )
        })
        .collect()
}

#[test]
fn threshold_is_inclusive_at_ten_seconds() {
    let at = [fleet_vehicle("a", "1", 0, 250, 50.0, 25.0), fleet_vehicle("b", "1", 0, 250, 0.0, 25.0)];
    assert_eq!(episodes(&at).len(), 1);
    let short = [fleet_vehicle("a", "1", 0, 249, 50.0, 25.0), fleet_vehicle("b", "1", 0, 249, 0.0, 25.0)];
    assert!(episodes(&short).is_empty());
}

#[test]
fn overtaking_swaps_roles() {
    // b starts behind a and is faster; they swap at 20.1 s, between frames
    let fleet = [fleet_vehicle("a", "1", 0, 1000, 100.5, 25.0), fleet_vehicle("b", "1", 0, 1000, 0.0, 30.0)];
    let got = episodes(&fleet);
    let oracle: BTreeSet<_> = brute_force_episodes(&fleet, 10.0)
        .into_iter()
        .map(|(_, l, f, a, b)| (l, f, a, b))
        .collect();
    assert_eq!(got, oracle);
    let expected: BTreeSet<_> = [("a".into(), "b".into(), 0, 502), ("b".into(), "a".into(), 503, 1000)].into();
    assert_eq!(got, expected);
}

#[test]
fn middle_vehicle_leaving_joins_outer_pair() {
    let fleet = [
        fleet_vehicle("a", "1", 0, 1000, 200.0, 25.0),
        fleet_vehicle("b", "1", 0, 400, 100.0, 25.0),
        fleet_vehicle("c", "1", 0, 1000, 0.0, 25.0),
    ];
    let got = episodes(&fleet);
    assert!(got.contains(&("a".into(), "b".into(), 0, 400)));
    assert!(got.contains(&("b".into(), "c".into(), 0, 400)));
    assert!(got.contains(&("a".into(), "c".into(), 401, 1000)));
    assert_eq!(got.len(), 3);
}

#[test]
fn random_fleets_match_oracle_with_five_vehicles() {
    let mut rng = rng(31);
    for _ in 0..60 {
        let fleet = random_fleet(&mut rng, 1, 5);
        let got = episodes(&fleet);
        let oracle: BTreeSet<_> = brute_force_episodes(&fleet, 10.0)
            .into_iter()
            .map(|(_, l, f, a, b)| (l, f, a, b))
            .collect();
        assert_eq!(got, oracle);
    }
}
