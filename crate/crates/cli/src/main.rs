use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use lanepilot::io::Precision;

mod commands;
mod report;

/// Environment variable holding a fixed number of decimals for numeric output.
pub const PRECISION_ENV: &str = "LANEPILOT_PRECISION";

#[derive(Debug, Parser)]
#[command(name = "lanepilot", version, about = "Personalized car-following and lane-keeping toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum InputFormat {
    Native,
    Highd,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StyleArg {
    Affected,
    Unaffected,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simulate a driver profile on a scenario.
    Simulate {
        /// Scenario JSON; the built-in four-stage scenario when omitted.
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Lateral tracking lag time constant, s.
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
    },
    /// Judge affected cases and compute driver features and stage headways.
    Analyze {
        #[arg(long)]
        ego: PathBuf,
        #[arg(long)]
        lead: PathBuf,
        #[arg(long)]
        cases: Option<PathBuf>,
        #[arg(long)]
        gaze: Option<PathBuf>,
        #[arg(long, default_value = "driver")]
        driver_id: String,
        /// Meters per second of time in the Hausdorff embedding.
        #[arg(long, default_value_t = 1.0)]
        time_weight: f64,
        /// Resampled points per case window.
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Fit the lateral parameters and assemble a driver profile.
    Fit {
        /// Output directory of `analyze`.
        #[arg(long)]
        analysis: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Clusters table to take the driver's style from.
        #[arg(long, conflicts_with = "style")]
        clusters: Option<PathBuf>,
        #[arg(long, value_enum)]
        style: Option<StyleArg>,
    },
    /// Split drivers into affected and unaffected styles.
    Cluster {
        #[arg(long)]
        features: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Simulate the personalized controller next to its two comparison configs.
    Compare {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        kappa: f64,
    },
    /// Collect pipeline outputs into plot-ready series.
    Report {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract car-following episodes from a recording.
    Episodes {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InputFormat::Native)]
        format: InputFormat,
        /// Lane-center table (`lane_id,center_y`), required for highd input.
        #[arg(long)]
        lanes: Option<PathBuf>,
        #[arg(long, default_value_t = 25.0)]
        frame_rate: f64,
        #[arg(long, default_value_t = lanepilot::io::MIN_EPISODE_DURATION)]
        min_duration: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write the built-in scenario as JSON.
    Scenario {
        #[arg(long)]
        out: PathBuf,
    },
}

fn precision_from_env() -> Result<Precision> {
    match std::env::var(PRECISION_ENV) {
        Ok(v) => {
            let p: usize = v
                .trim()
                .parse()
                .with_context(|| format!("{PRECISION_ENV} must be a non-negative integer, got {v:?}"))?;
            Ok(Precision(Some(p)))
        }
        Err(std::env::VarError::NotPresent) => Ok(Precision::full()),
        Err(e) => bail!("{PRECISION_ENV}: {e}"),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

fn run(cli: Cli) -> Result<()> {
    let precision = precision_from_env()?;
    match cli.command {
        Command::Simulate {
            scenario,
            profile,
            out,
            kappa,
        } => {
            ensure_dir(&out)?;
            commands::simulate(scenario.as_deref(), &profile, &out, kappa, precision)
        }
        Command::Analyze {
            ego,
            lead,
            cases,
            gaze,
            driver_id,
            time_weight,
            samples,
            out,
        } => {
            ensure_dir(&out)?;
            let mut options = lanepilot::analysis::AnalysisOptions::default();
            options.affected.time_weight = time_weight;
            options.affected.n_samples = samples;
            commands::analyze(
                &commands::AnalyzeInputs {
                    ego: &ego,
                    lead: &lead,
                    cases: cases.as_deref(),
                    gaze: gaze.as_deref(),
                    driver_id: &driver_id,
                    options,
                },
                &out,
                precision,
            )
        }
        Command::Fit {
            analysis,
            out,
            clusters,
            style,
        } => {
            let style = style.map(|s| match s {
                StyleArg::Affected => lanepilot::Style::Affected,
                StyleArg::Unaffected => lanepilot::Style::Unaffected,
            });
            commands::fit(&analysis, &out, clusters.as_deref(), style)
        }
        Command::Cluster { features, out } => commands::cluster(&features, &out, precision),
        Command::Compare {
            profile,
            scenario,
            out,
            kappa,
        } => {
            ensure_dir(&out)?;
            commands::compare(&profile, scenario.as_deref(), &out, kappa, precision)
        }
        Command::Report { input, out } => report::report(&input, &out),
        Command::Episodes {
            input,
            format,
            lanes,
            frame_rate,
            min_duration,
            out,
        } => {
            let trajs = match format {
                InputFormat::Native => lanepilot::io::read_native(&input)?,
                InputFormat::Highd => {
                    let Some(lanes) = lanes else {
                        bail!("--lanes is required for highd input");
                    };
                    let centers = lanepilot::io::read_lane_centers(&lanes)?;
                    lanepilot::io::read_highd(&input, &centers, &lanepilot::io::HighdOptions { frame_rate })?
                }
            };
            ensure_dir(&out)?;
            commands::episodes(&trajs, min_duration, &out, precision)
        }
        Command::Scenario { out } => {
            lanepilot::io::write_json(&out, &lanepilot::default_scenario())?;
            Ok(())
        }
    }
}

/// One JSON line on stderr: `{"error":{"kind":..,"message":..}}`.
fn report_error(kind: &str, message: &str) {
    let line = serde_json::json!({ "error": { "kind": kind, "message": message } });
    eprintln!("{line}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            report_error("usage", e.to_string().lines().next().unwrap_or("usage error"));
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let kind = e
                .chain()
                .find_map(|c| c.downcast_ref::<lanepilot::Error>())
                .map(|le| le.kind())
                .unwrap_or("error");
            report_error(kind, &format!("{e:#}"));
            ExitCode::FAILURE
        }
    }
}
