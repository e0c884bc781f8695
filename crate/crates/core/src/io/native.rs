//! Native trajectory CSV: `t,vehicle_id,lane_id,x,y,v`, SI units, one row per
//! sample. Rows of different vehicles may interleave.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use serde::Deserialize;

use super::{create, parse_err, read_rows, Precision};
use crate::error::Result;
use crate::trajectory::{Trajectory, VehicleSample};

pub const NATIVE_HEADER: [&str; 6] = ["t", "vehicle_id", "lane_id", "x", "y", "v"];

#[derive(Debug, Deserialize)]
struct Row {
    t: f64,
    vehicle_id: String,
    lane_id: String,
    x: f64,
    y: f64,
    v: f64,
}

pub fn write_native_to<W: Write>(out: W, trajs: &[&Trajectory], precision: Precision) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(NATIVE_HEADER)?;
    for tr in trajs {
        for s in tr.samples() {
            w.write_record([
                precision.fmt(s.t),
                tr.vehicle_id().to_string(),
                tr.lane_id().to_string(),
                precision.fmt(s.x),
                precision.fmt(s.y),
                precision.fmt(s.v),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_native(path: &Path, trajs: &[&Trajectory], precision: Precision) -> Result<()> {
    write_native_to(create(path)?, trajs, precision)
}

/// Lane id and the (line, sample) rows of one contiguous lane run.
type LaneRun = (String, Vec<(usize, VehicleSample)>);

/// Reads a native file into one trajectory per vehicle, in order of first
/// appearance. A vehicle that changes lane yields one trajectory per
/// contiguous lane run.
pub fn read_native(path: &Path) -> Result<Vec<Trajectory>> {
    let rows: Vec<(usize, Row)> = read_rows(path, &NATIVE_HEADER)?;
    let mut order: Vec<String> = Vec::new();
    let mut by_vehicle: HashMap<String, Vec<LaneRun>> = HashMap::new();
    for (line, r) in rows {
        let sample = VehicleSample::new(r.t, r.x, r.y, r.v);
        if !(r.t.is_finite() && r.t >= 0.0) {
            return Err(parse_err(path, line, format!("invalid time {}", r.t)));
        }
        if !(r.x.is_finite() && r.y.is_finite() && r.v.is_finite() && r.v >= 0.0) {
            return Err(parse_err(path, line, "non-finite position or negative speed"));
        }
        let segs = by_vehicle.entry(r.vehicle_id.clone()).or_insert_with(|| {
            order.push(r.vehicle_id.clone());
            Vec::new()
        });
        if let Some(&(prev_line, prev)) = segs.last().and_then(|(_, s)| s.last()) {
            if r.t <= prev.t {
                return Err(parse_err(
                    path,
                    line,
                    format!(
                        "time {} for vehicle {} does not increase (previous {} on row {prev_line})",
                        r.t, r.vehicle_id, prev.t
                    ),
                ));
            }
        }
        match segs.last_mut() {
            Some((lane, samples)) if *lane == r.lane_id => samples.push((line, sample)),
            _ => segs.push((r.lane_id, vec![(line, sample)])),
        }
    }
    let mut out = Vec::new();
    for id in order {
        for (lane, samples) in by_vehicle.remove(&id).unwrap_or_default() {
            let first_line = samples[0].0;
            let samples: Vec<_> = samples.into_iter().map(|(_, s)| s).collect();
            let tr = Trajectory::new(id.clone(), lane, samples)
                .map_err(|e| parse_err(path, first_line, e.to_string()))?;
            out.push(tr);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn two_rows() {
        let f = write("t,vehicle_id,lane_id,x,y,v\n0,a,1,0,0.1,25\n0.02,a,1,0.5,0.1,25\n");
        let trs = read_native(f.path()).unwrap();
        assert_eq!(trs.len(), 1);
        assert_eq!(trs[0].len(), 2);
        assert_eq!(trs[0].samples()[1].x, 0.5);
    }

    #[test]
    fn duplicate_time_names_row() {
        let f = write("t,vehicle_id,lane_id,x,y,v\n0,a,1,0,0,25\n0,a,1,1,0,25\n");
        match read_native(f.path()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn bad_header() {
        let f = write("time,vehicle,lane,x,y,v\n0,a,1,0,0,25\n");
        assert!(matches!(read_native(f.path()), Err(Error::Parse { row: 1, .. })));
    }

    #[test]
    fn malformed_value_names_row() {
        let f = write("t,vehicle_id,lane_id,x,y,v\n0,a,1,0,0,25\n1,a,1,zz,0,25\n");
        match read_native(f.path()) {
            Err(Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interleaved_vehicles_and_lane_change() {
        let f = write(
            "t,vehicle_id,lane_id,x,y,v\n0,a,1,0,0,1\n0,b,2,5,0,1\n1,a,1,1,0,1\n1,b,2,6,0,1\n2,a,2,2,0,1\n3,a,2,3,0,1\n",
        );
        let trs = read_native(f.path()).unwrap();
        let ids: Vec<(&str, &str, usize)> = trs
            .iter()
            .map(|t| (t.vehicle_id(), t.lane_id(), t.len()))
            .collect();
        assert_eq!(ids, vec![("a", "1", 2), ("a", "2", 2), ("b", "2", 2)]);
    }
}
