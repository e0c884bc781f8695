//! File formats and ingestion.
//!
//! Every writer emits full-precision decimals by default (shortest string that
//! parses back to the same `f64`), so files round-trip losslessly. A fixed
//! number of decimals can be requested with [`Precision`].

mod episodes;
mod highd;
mod native;
mod tables;

use std::fs::File;
use std::io::{BufReader, BufWriter};
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

pub use episodes::{segment_following_episodes, FollowingEpisode, MIN_EPISODE_DURATION};
pub use highd::{read_highd, read_lane_centers, HighdOptions, LaneCenters};
pub use native::{read_native, write_native, write_native_to, NATIVE_HEADER};
pub use tables::{
    read_cases, read_clusters, read_features, read_gaze, read_headways, write_case_results,
    write_cases, write_clusters, write_features, write_gaze_proportions, write_headways,
    CaseRecord,
};

use crate::error::{Error, Result};

/// Decimal places for floating-point output; `None` keeps full precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Precision(pub Option<usize>);

impl Precision {
    pub fn full() -> Self {
        Self(None)
    }

    pub fn fmt(&self, v: f64) -> String {
        match self.0 {
            Some(p) => format!("{v:.p$}"),
            None => format!("{v:?}"),
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |cause| Error::Io {
        path: path.to_path_buf(),
        cause,
    }
}

pub(crate) fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

pub(crate) fn parse_err(path: &Path, row: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        row,
        msg: msg.into(),
    }
}

/// Reads every data row of a headed CSV file, paired with its 1-based line
/// number (the header is line 1).
pub(crate) fn read_rows<T: DeserializeOwned>(path: &Path, required: &[&str]) -> Result<Vec<(usize, T)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open(path)?);
    let headers = rdr
        .headers()
        .map_err(|e| parse_err(path, 1, e.to_string()))?
        .clone();
    for col in required {
        if !headers.iter().any(|h| h == *col) {
            return Err(parse_err(
                path,
                1,
                format!("missing column {col:?} in header {:?}", headers.iter().collect::<Vec<_>>()),
            ));
        }
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.deserialize::<T>().enumerate() {
        let fallback = i + 2;
        match rec {
            Ok(v) => out.push((fallback, v)),
            Err(e) => {
                let row = e
                    .position()
                    .map(|p| p.line() as usize)
                    .unwrap_or(fallback);
                return Err(parse_err(path, row, e.to_string()));
            }
        }
    }
    Ok(out)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(io_err(path))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(open(path)?)?)
}

pub fn read_scenario(path: &Path) -> Result<crate::sim::ScenarioSpec> {
    let spec: crate::sim::ScenarioSpec = read_json(path)?;
    spec.validate()?;
    Ok(spec)
}

pub fn read_profile(path: &Path) -> Result<crate::persona::DriverProfile> {
    let p: crate::persona::DriverProfile = read_json(path)?;
    p.validate()?;
    Ok(p)
}
