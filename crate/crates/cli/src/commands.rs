use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;

use lanepilot::analysis::{analyze_driver, AnalysisOptions};
use lanepilot::io::{self, Precision};
use lanepilot::persona::{build_profile, cluster_styles, comparison_configs, fit_lateral_params, FitCase, FitOptions};
use lanepilot::sim::{default_scenario, run_scenario, CaseWindow, SimConfig, SimLog};
use lanepilot::{ScenarioSpec, Style, Trajectory};

pub const EGO_FILE: &str = "ego.csv";
pub const LEAD_FILE: &str = "lead.csv";
pub const CASES_FILE: &str = "cases.csv";
pub const FEATURES_FILE: &str = "features.csv";
pub const HEADWAYS_FILE: &str = "headways.csv";
pub const GAZE_FILE: &str = "gaze_proportions.csv";
pub const ANALYSIS_FILE: &str = "analysis.json";
pub const SCENARIO_FILE: &str = "scenario.json";
pub const LATERAL_FILE: &str = "lateral.csv";
pub const SUMMARY_FILE: &str = "summary.json";

fn load_scenario(path: Option<&Path>) -> Result<ScenarioSpec> {
    match path {
        Some(p) => io::read_scenario(p).with_context(|| format!("loading scenario {}", p.display())),
        None => Ok(default_scenario()),
    }
}

fn single_trajectory(path: &Path) -> Result<Trajectory> {
    let mut trajs = io::read_native(path)?;
    if trajs.len() != 1 {
        return Err(lanepilot::Error::InconsistentInputs(format!(
            "{}: expected one vehicle in one lane, found {} trajectories",
            path.display(),
            trajs.len()
        ))
        .into());
    }
    Ok(trajs.remove(0))
}

fn write_log(log: &SimLog, ego_file: &str, out: &Path, p: Precision) -> Result<()> {
    io::write_native(&out.join(ego_file), &[&log.ego], p)?;
    io::write_native(&out.join(LEAD_FILE), &[&log.lead], p)?;
    io::write_cases(&out.join(CASES_FILE), &log.case_windows, p)?;
    io::write_json(&out.join(SCENARIO_FILE), &log.scenario)?;
    Ok(())
}

pub fn simulate(scenario: Option<&Path>, profile: &Path, out: &Path, kappa: f64, p: Precision) -> Result<()> {
    let spec = load_scenario(scenario)?;
    let profile = io::read_profile(profile).with_context(|| format!("loading profile {}", profile.display()))?;
    let log = run_scenario(&spec, &profile.controller(), &SimConfig::with_kappa(kappa)).context("simulation")?;
    write_log(&log, EGO_FILE, out, p)
}

pub struct AnalyzeInputs<'a> {
    pub ego: &'a Path,
    pub lead: &'a Path,
    pub cases: Option<&'a Path>,
    pub gaze: Option<&'a Path>,
    pub driver_id: &'a str,
    pub options: AnalysisOptions,
}

/// Without a cases table the whole common span is one case in stage 0.
fn whole_span_case(ego: &Trajectory, lead: &Trajectory) -> Result<CaseWindow> {
    let start = ego.start_time().max(lead.start_time());
    let end = ego.end_time().min(lead.end_time());
    if start.partial_cmp(&end) != Some(std::cmp::Ordering::Less) {
        bail!(lanepilot::Error::InconsistentInputs("ego and lead recordings do not overlap in time".into()));
    }
    let speeds: Vec<f64> = lead
        .samples()
        .iter()
        .filter(|s| s.t >= start && s.t <= end)
        .map(|s| s.v)
        .collect();
    let stage_speed = speeds.iter().sum::<f64>() / speeds.len().max(1) as f64;
    Ok(CaseWindow {
        start,
        end,
        stage_index: 0,
        stage_speed,
        stage_start: start,
        stage_end: end,
        offset_magnitude: 0.0,
        offset_direction: 0,
    })
}

pub fn analyze(inputs: &AnalyzeInputs<'_>, out: &Path, p: Precision) -> Result<()> {
    let ego = single_trajectory(inputs.ego)?;
    let lead = single_trajectory(inputs.lead)?;
    let windows: Vec<CaseWindow> = match inputs.cases {
        Some(path) => io::read_cases(path)?.into_iter().map(|c| c.window).collect(),
        None => vec![whole_span_case(&ego, &lead)?],
    };
    let gaze = inputs.gaze.map(io::read_gaze).transpose()?;
    let analysis = analyze_driver(
        inputs.driver_id,
        &ego,
        &lead,
        &windows,
        gaze.as_deref(),
        &inputs.options,
    )
    .context("analysis")?;

    io::write_case_results(&out.join(CASES_FILE), &analysis.cases, p)?;
    io::write_headways(&out.join(HEADWAYS_FILE), &analysis.headways, p)?;
    io::write_features(
        &out.join(FEATURES_FILE),
        &[(analysis.driver_id.clone(), analysis.pc_a, analysis.pc_g())],
        p,
    )?;
    if let Some(g) = &analysis.gaze {
        io::write_gaze_proportions(&out.join(GAZE_FILE), g, p)?;
    }
    io::write_native(&out.join(EGO_FILE), &[&ego], Precision::full())?;
    io::write_native(&out.join(LEAD_FILE), &[&lead], Precision::full())?;
    io::write_json(
        &out.join(ANALYSIS_FILE),
        &serde_json::json!({ "options": inputs.options, "analysis": analysis }),
    )?;
    Ok(())
}

/// Style precedence: explicit flag, then clusters table, then "affected iff
/// any case was judged affected".
pub fn fit(dir: &Path, out: &Path, clusters: Option<&Path>, style: Option<Style>) -> Result<()> {
    let features = read_feature_row(&dir.join(FEATURES_FILE))?;
    let driver_id = features.0;
    let cases = io::read_cases(&dir.join(CASES_FILE))?;
    let mut judged = Vec::with_capacity(cases.len());
    for c in &cases {
        let Some(j) = c.judgment else {
            bail!(lanepilot::Error::InconsistentInputs(format!(
                "{}: cases carry no affected-case judgment; run analyze first",
                dir.join(CASES_FILE).display()
            )));
        };
        judged.push((c.window, j.affected));
    }
    let style = match (style, clusters) {
        (Some(s), _) => s,
        (None, Some(path)) => io::read_clusters(path)?.get(&driver_id).copied().ok_or_else(|| {
            lanepilot::Error::InconsistentInputs(format!("driver {driver_id:?} missing from {}", path.display()))
        })?,
        (None, None) => {
            if judged.iter().any(|(_, a)| *a) {
                Style::Affected
            } else {
                Style::Unaffected
            }
        }
    };

    let headways: Vec<(f64, f64)> = io::read_headways(&dir.join(HEADWAYS_FILE))?
        .iter()
        .map(|h| (h.speed_mps, h.headway_s))
        .collect();

    let lateral = if style == Style::Affected {
        let ego = single_trajectory(&dir.join(EGO_FILE))?;
        let lead = single_trajectory(&dir.join(LEAD_FILE))?;
        let mut windows: Vec<&CaseWindow> = judged.iter().filter(|(_, a)| *a).map(|(w, _)| w).collect();
        if windows.is_empty() {
            windows = judged.iter().map(|(w, _)| w).collect();
        }
        let fit_cases: Vec<FitCase<'_>> = windows
            .iter()
            .map(|w| FitCase {
                ego: &ego,
                lead: &lead,
                window: w.span(),
            })
            .collect();
        Some(fit_lateral_params(&fit_cases, &FitOptions::default()).context("lateral fit")?)
    } else {
        None
    };
    let profile = build_profile(&driver_id, None, style, &headways, lateral.as_ref())?;
    io::write_json(out, &profile)?;
    Ok(())
}

fn read_feature_row(path: &Path) -> Result<(String, Option<f64>)> {
    #[derive(serde::Deserialize)]
    struct Row {
        driver_id: String,
        pc_a: Option<f64>,
    }
    let mut rdr = csv::Reader::from_path(path).with_context(|| format!("reading {}", path.display()))?;
    let rows = rdr.deserialize::<Row>().collect::<Result<Vec<_>, _>>()?;
    match rows.as_slice() {
        [r] => Ok((r.driver_id.clone(), r.pc_a)),
        _ => bail!(lanepilot::Error::InconsistentInputs(format!(
            "{}: expected exactly one driver, found {}",
            path.display(),
            rows.len()
        ))),
    }
}

pub fn cluster(features: &Path, out: &Path, p: Precision) -> Result<()> {
    let rows = io::read_features(features)?;
    let result = cluster_styles(&rows).context("clustering")?;
    io::write_clusters(out, &rows, &result, p)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct ConfigSummary {
    name: &'static str,
    alpha: f64,
    tau_s: f64,
    max_abs_lateral_m: f64,
    rms_lateral_m: f64,
    min_gap_m: f64,
}

#[derive(Debug, Serialize)]
struct CompareSummary {
    driver_id: String,
    style: Style,
    kappa_s: f64,
    configs: Vec<ConfigSummary>,
    /// Largest |y_P + y_C2| over samples where neither trace touches the clamp.
    mirror_max_deviation_m: f64,
    clamp_free_samples: usize,
}

pub fn compare(profile: &Path, scenario: Option<&Path>, out: &Path, kappa: f64, p: Precision) -> Result<()> {
    let spec = load_scenario(scenario)?;
    let profile = io::read_profile(profile).with_context(|| format!("loading profile {}", profile.display()))?;
    let configs = comparison_configs(&profile);
    let sim = SimConfig::with_kappa(kappa);

    let mut logs = Vec::new();
    let mut summaries = Vec::new();
    for (name, controller) in configs.named() {
        let log = run_scenario(&spec, controller, &sim).with_context(|| format!("simulating {name}"))?;
        let ys = log.ego.lateral();
        let n = ys.len() as f64;
        summaries.push(ConfigSummary {
            name,
            alpha: controller.lateral.alpha,
            tau_s: controller.lateral.tau,
            max_abs_lateral_m: ys.iter().fold(0.0, |m, y| m.max(y.abs())),
            rms_lateral_m: (ys.iter().map(|y| y * y).sum::<f64>() / n).sqrt(),
            min_gap_m: log.gaps().into_iter().fold(f64::INFINITY, f64::min),
        });
        io::write_native(&out.join(format!("{name}.csv")), &[&log.ego], p)?;
        logs.push(log);
    }
    let lead = &logs[0].lead;
    io::write_native(&out.join(LEAD_FILE), &[lead], p)?;
    io::write_cases(&out.join(CASES_FILE), &logs[0].case_windows, p)?;
    io::write_json(&out.join(SCENARIO_FILE), &spec)?;

    let mut w = csv::Writer::from_path(out.join(LATERAL_FILE))?;
    w.write_record(["t", "lead", "p", "c1", "c2"])?;
    for (i, l) in lead.samples().iter().enumerate() {
        let mut rec = vec![p.fmt(l.t), p.fmt(l.y)];
        rec.extend(logs.iter().map(|log| p.fmt(log.ego.samples()[i].y)));
        w.write_record(rec)?;
    }
    w.flush()?;

    let bound = spec.lane.max_lateral_freedom() - 1e-12;
    let (yp, yc2) = (logs[0].ego.lateral(), logs[2].ego.lateral());
    let free: Vec<(f64, f64)> = yp
        .iter()
        .zip(&yc2)
        .filter(|(a, b)| a.abs() < bound && b.abs() < bound)
        .map(|(a, b)| (*a, *b))
        .collect();
    let summary = CompareSummary {
        driver_id: profile.driver_id.clone(),
        style: profile.style,
        kappa_s: kappa,
        configs: summaries,
        mirror_max_deviation_m: free.iter().fold(0.0, |m, (a, b)| m.max((a + b).abs())),
        clamp_free_samples: free.len(),
    };
    io::write_json(&out.join(SUMMARY_FILE), &summary)?;
    Ok(())
}

pub fn episodes(trajs: &[Trajectory], min_duration: f64, out: &Path, p: Precision) -> Result<()> {
    let found = io::segment_following_episodes(trajs, min_duration);
    let mut w = csv::Writer::from_path(out.join("episodes.csv"))?;
    w.write_record(["episode", "lane_id", "lead_id", "follower_id", "start", "end", "duration"])?;
    for (i, ep) in found.iter().enumerate() {
        let name = format!("episode_{i:04}");
        w.write_record([
            name.clone(),
            ep.lane_id.clone(),
            ep.lead.vehicle_id().to_string(),
            ep.follower.vehicle_id().to_string(),
            p.fmt(ep.follower.start_time()),
            p.fmt(ep.follower.end_time()),
            p.fmt(ep.duration),
        ])?;
        let dir = out.join(&name);
        std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        io::write_native(&dir.join(EGO_FILE), &[&ep.follower], p)?;
        io::write_native(&dir.join(LEAD_FILE), &[&ep.lead], p)?;
    }
    w.flush()?;
    Ok(())
}
