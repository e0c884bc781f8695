//! Small CSV tables exchanged between pipeline steps.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{create, parse_err, read_rows, Precision};
use crate::analysis::{AffectedCase, Aoi, CaseResult, DriverFeatures, GazeSample, StageHeadway};
use crate::error::Result;
use crate::persona::{ClusterResult, Style};
use crate::sim::CaseWindow;

const CASE_COLUMNS: [&str; 9] = [
    "case_index",
    "stage_index",
    "stage_speed_mps",
    "stage_start",
    "stage_end",
    "start",
    "end",
    "offset_magnitude",
    "offset_direction",
];

fn window_fields(i: usize, w: &CaseWindow, p: Precision) -> Vec<String> {
    vec![
        i.to_string(),
        w.stage_index.to_string(),
        p.fmt(w.stage_speed),
        p.fmt(w.stage_start),
        p.fmt(w.stage_end),
        p.fmt(w.start),
        p.fmt(w.end),
        p.fmt(w.offset_magnitude),
        w.offset_direction.to_string(),
    ]
}

fn finish<W: std::io::Write>(mut w: csv::Writer<W>) -> Result<()> {
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_cases(path: &Path, windows: &[CaseWindow], p: Precision) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(CASE_COLUMNS)?;
    for (i, win) in windows.iter().enumerate() {
        w.write_record(window_fields(i, win, p))?;
    }
    finish(w)
}

/// Case windows plus the affected-case judgment of each.
pub fn write_case_results(path: &Path, cases: &[CaseResult], p: Precision) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    let mut header: Vec<&str> = CASE_COLUMNS.to_vec();
    header.extend(["affected", "ego_distance", "reference_distance"]);
    w.write_record(&header)?;
    for c in cases {
        let mut rec = window_fields(c.index, &c.window, p);
        rec.push(c.judgment.affected.to_string());
        rec.push(p.fmt(c.judgment.ego_distance));
        rec.push(p.fmt(c.judgment.reference_distance));
        w.write_record(rec)?;
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct CaseRow {
    stage_index: usize,
    stage_speed_mps: f64,
    stage_start: f64,
    stage_end: f64,
    start: f64,
    end: f64,
    offset_magnitude: f64,
    offset_direction: i8,
    #[serde(default)]
    affected: Option<bool>,
    #[serde(default)]
    ego_distance: Option<f64>,
    #[serde(default)]
    reference_distance: Option<f64>,
}

/// A case window and, when present in the file, its judgment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CaseRecord {
    pub window: CaseWindow,
    pub judgment: Option<AffectedCase>,
}

pub fn read_cases(path: &Path) -> Result<Vec<CaseRecord>> {
    let required = &CASE_COLUMNS[1..];
    read_rows::<CaseRow>(path, required)?
        .into_iter()
        .map(|(line, r)| {
            if !(r.start < r.end && r.stage_start <= r.start && r.end <= r.stage_end) {
                return Err(parse_err(path, line, "case window must satisfy stage_start <= start < end <= stage_end"));
            }
            let judgment = match (r.affected, r.ego_distance, r.reference_distance) {
                (Some(affected), Some(ego_distance), Some(reference_distance)) => Some(AffectedCase {
                    affected,
                    ego_distance,
                    reference_distance,
                }),
                (None, None, None) => None,
                _ => return Err(parse_err(path, line, "partial affected-case columns")),
            };
            Ok(CaseRecord {
                window: CaseWindow {
                    start: r.start,
                    end: r.end,
                    stage_index: r.stage_index,
                    stage_speed: r.stage_speed_mps,
                    stage_start: r.stage_start,
                    stage_end: r.stage_end,
                    offset_magnitude: r.offset_magnitude,
                    offset_direction: r.offset_direction,
                },
                judgment,
            })
        })
        .collect()
}

#[derive(Debug, Deserialize)]
struct GazeRow {
    t_start: f64,
    t_end: f64,
    aoi: String,
}

pub fn read_gaze(path: &Path) -> Result<Vec<GazeSample>> {
    read_rows::<GazeRow>(path, &["t_start", "t_end", "aoi"])?
        .into_iter()
        .map(|(line, r)| {
            let aoi: Aoi = r.aoi.parse().map_err(|e: crate::Error| parse_err(path, line, e.to_string()))?;
            if r.t_start.partial_cmp(&r.t_end) != Some(std::cmp::Ordering::Less) {
                return Err(parse_err(path, line, "gaze interval needs t_start < t_end"));
            }
            Ok(GazeSample {
                t_start: r.t_start,
                t_end: r.t_end,
                aoi,
            })
        })
        .collect()
}

pub fn write_gaze_proportions(path: &Path, props: &BTreeMap<Aoi, f64>, p: Precision) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["aoi", "percent"])?;
    for (aoi, v) in props {
        w.write_record([aoi.as_str().to_string(), p.fmt(*v)])?;
    }
    finish(w)
}

/// `driver_id,pc_a,pc_g`; a missing value is written as an empty field.
pub fn write_features(
    path: &Path,
    rows: &[(String, Option<f64>, Option<f64>)],
    p: Precision,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["driver_id", "pc_a", "pc_g"])?;
    let opt = |v: &Option<f64>| v.map(|v| p.fmt(v)).unwrap_or_default();
    for (id, a, g) in rows {
        w.write_record([id.clone(), opt(a), opt(g)])?;
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct FeatureRow {
    driver_id: String,
    pc_a: Option<f64>,
    pc_g: Option<f64>,
}

pub fn read_features(path: &Path) -> Result<Vec<DriverFeatures>> {
    read_rows::<FeatureRow>(path, &["driver_id", "pc_a", "pc_g"])?
        .into_iter()
        .map(|(line, r)| {
            let (Some(pc_a), Some(pc_g)) = (r.pc_a, r.pc_g) else {
                return Err(parse_err(path, line, format!("driver {}: missing feature value", r.driver_id)));
            };
            DriverFeatures::new(r.driver_id, pc_a, pc_g).map_err(|e| parse_err(path, line, e.to_string()))
        })
        .collect()
}

pub fn write_clusters(path: &Path, features: &[DriverFeatures], result: &ClusterResult, p: Precision) -> Result<()> {
    let mut sorted: Vec<&DriverFeatures> = features.iter().collect();
    sorted.sort_by(|a, b| a.driver_id.cmp(&b.driver_id));
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["driver_id", "pc_a", "pc_g", "style"])?;
    for f in sorted {
        let style = result
            .style_of(&f.driver_id)
            .map(|s| s.as_str())
            .unwrap_or_default();
        w.write_record([f.driver_id.clone(), p.fmt(f.pc_a), p.fmt(f.pc_g), style.to_string()])?;
    }
    finish(w)
}

#[derive(Debug, Deserialize)]
struct ClusterRow {
    driver_id: String,
    style: String,
}

/// `driver_id -> style` from a clusters table.
pub fn read_clusters(path: &Path) -> Result<BTreeMap<String, Style>> {
    read_rows::<ClusterRow>(path, &["driver_id", "style"])?
        .into_iter()
        .map(|(line, r)| {
            let style = r.style.parse().map_err(|e: crate::Error| parse_err(path, line, e.to_string()))?;
            Ok((r.driver_id, style))
        })
        .collect()
}

pub fn write_headways(path: &Path, rows: &[StageHeadway], p: Precision) -> Result<()> {
    let mut w = csv::Writer::from_writer(create(path)?);
    w.write_record(["stage_index", "speed_mps", "headway_s"])?;
    for r in rows {
        w.write_record([r.stage_index.to_string(), p.fmt(r.speed_mps), p.fmt(r.headway_s)])?;
    }
    finish(w)
}

pub fn read_headways(path: &Path) -> Result<Vec<StageHeadway>> {
    #[derive(Deserialize)]
    struct Row {
        stage_index: usize,
        speed_mps: f64,
        headway_s: f64,
    }
    Ok(read_rows::<Row>(path, &["stage_index", "speed_mps", "headway_s"])?
        .into_iter()
        .map(|(_, r)| StageHeadway {
            stage_index: r.stage_index,
            speed_mps: r.speed_mps,
            headway_s: r.headway_s,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::default_scenario;

    #[test]
    fn cases_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cases.csv");
        let windows = default_scenario().case_windows();
        write_cases(&path, &windows, Precision::full()).unwrap();
        let back: Vec<CaseWindow> = read_cases(&path).unwrap().into_iter().map(|c| c.window).collect();
        assert_eq!(back, windows);
    }

    #[test]
    fn gaze_rejects_unknown_label() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("gaze.csv");
        std::fs::write(&path, "t_start,t_end,aoi\n0,1,panel\n1,2,mirror\n").unwrap();
        match read_gaze(&path) {
            Err(crate::Error::Parse { row, .. }) => assert_eq!(row, 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn features_missing_value() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.csv");
        write_features(&path, &[("d1".into(), Some(20.0), None)], Precision::full()).unwrap();
        assert!(read_features(&path).is_err());
        write_features(&path, &[("d1".into(), Some(20.0), Some(41.5))], Precision::full()).unwrap();
        assert_eq!(read_features(&path).unwrap()[0].pc_g, 41.5);
    }
}
