//! Plot-ready aggregation of pipeline outputs.

use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{bail, Result};
use serde::Serialize;

use lanepilot::io;
use lanepilot::{Style, Trajectory};

use crate::commands::{CASES_FILE, EGO_FILE, FEATURES_FILE, LEAD_FILE};

#[derive(Debug, Serialize)]
struct CasePanel {
    case_index: usize,
    /// Panel row: the speed stage.
    row: usize,
    /// Panel column: maneuver order within the stage.
    column: usize,
    stage_speed_mps: f64,
    offset_m: f64,
    affected: bool,
    ego_distance: f64,
    reference_distance: f64,
    /// Seconds from the window start.
    t: Vec<f64>,
    ego_y: Vec<f64>,
    lead_y: Vec<f64>,
    reference_y: f64,
}

#[derive(Debug, Serialize)]
struct ScatterPoint {
    driver_id: String,
    pc_a: f64,
    pc_g: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    style: Option<Style>,
}

#[derive(Debug, Serialize)]
struct ComparisonTraces {
    t: Vec<f64>,
    lead: Vec<f64>,
    p: Vec<f64>,
    c1: Vec<f64>,
    c2: Vec<f64>,
}

#[derive(Debug, Default, Serialize)]
struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pc_a: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    cases: Vec<CasePanel>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    features: Vec<ScatterPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    comparison: Option<ComparisonTraces>,
}

fn one(path: &Path) -> Result<Trajectory> {
    let mut v = io::read_native(path)?;
    if v.len() != 1 {
        bail!(lanepilot::Error::InconsistentInputs(format!(
            "{}: expected a single trajectory",
            path.display()
        )));
    }
    Ok(v.remove(0))
}

fn case_panels(dir: &Path) -> Result<Vec<CasePanel>> {
    let (cases, ego, lead) = (dir.join(CASES_FILE), dir.join(EGO_FILE), dir.join(LEAD_FILE));
    if !(cases.exists() && ego.exists() && lead.exists()) {
        return Ok(Vec::new());
    }
    let records = io::read_cases(&cases)?;
    if records.iter().any(|r| r.judgment.is_none()) {
        return Ok(Vec::new());
    }
    let (ego, lead) = (one(&ego)?, one(&lead)?);
    let mut columns: BTreeMap<usize, usize> = BTreeMap::new();
    let mut panels = Vec::with_capacity(records.len());
    for (i, r) in records.iter().enumerate() {
        let w = r.window;
        let j = r.judgment.expect("checked above");
        let column = columns.entry(w.stage_index).or_insert(0);
        let e = ego.clip(w.start, w.end)?;
        let l = lead.clip(w.start, w.end)?;
        let lead_y = l.lateral();
        panels.push(CasePanel {
            case_index: i,
            row: w.stage_index,
            column: *column,
            stage_speed_mps: w.stage_speed,
            offset_m: w.offset_magnitude * f64::from(w.offset_direction),
            affected: j.affected,
            ego_distance: j.ego_distance,
            reference_distance: j.reference_distance,
            t: e.times().map(|t| t - w.start).collect(),
            ego_y: e.lateral(),
            reference_y: lead_y.iter().sum::<f64>() / lead_y.len() as f64,
            lead_y,
        });
        *column += 1;
    }
    Ok(panels)
}

fn scatter(dir: &Path) -> Result<Vec<ScatterPoint>> {
    let clusters = dir.join("clusters.csv");
    let features = dir.join(FEATURES_FILE);
    let (path, styles) = if clusters.exists() {
        (clusters.clone(), Some(io::read_clusters(&clusters)?))
    } else if features.exists() {
        (features, None)
    } else {
        return Ok(Vec::new());
    };
    let rows = match io::read_features(&path) {
        Ok(rows) => rows,
        // a single-driver table without gaze data has nothing to scatter
        Err(lanepilot::Error::Parse { .. }) if styles.is_none() => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    Ok(rows
        .into_iter()
        .map(|f| ScatterPoint {
            style: styles.as_ref().and_then(|s| s.get(&f.driver_id).copied()),
            driver_id: f.driver_id,
            pc_a: f.pc_a,
            pc_g: f.pc_g,
        })
        .collect())
}

fn comparison(dir: &Path) -> Result<Option<ComparisonTraces>> {
    let names = ["p.csv", "c1.csv", "c2.csv", LEAD_FILE];
    if !names.iter().all(|n| dir.join(n).exists()) {
        return Ok(None);
    }
    let [p, c1, c2, lead] = names.map(|n| one(&dir.join(n)));
    let (p, c1, c2, lead) = (p?, c1?, c2?, lead?);
    if [p.len(), c1.len(), c2.len()].iter().any(|&n| n != lead.len()) {
        bail!(lanepilot::Error::InconsistentInputs(
            "comparison traces have different lengths".into()
        ));
    }
    Ok(Some(ComparisonTraces {
        t: lead.times().collect(),
        lead: lead.lateral(),
        p: p.lateral(),
        c1: c1.lateral(),
        c2: c2.lateral(),
    }))
}

pub fn report(dir: &Path, out: &Path) -> Result<()> {
    let cases = case_panels(dir)?;
    let pc_a = (!cases.is_empty())
        .then(|| 100.0 * cases.iter().filter(|c| c.affected).count() as f64 / cases.len() as f64);
    let r = Report {
        pc_a,
        cases,
        features: scatter(dir)?,
        comparison: comparison(dir)?,
    };
    if r.cases.is_empty() && r.features.is_empty() && r.comparison.is_none() {
        bail!(lanepilot::Error::InsufficientData(format!(
            "{}: no analysis, feature or comparison outputs found",
            dir.display()
        )));
    }
    io::write_json(out, &r)?;
    Ok(())
}
