use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate trajectory: {0}")]
    DegenerateTrajectory(String),

    #[error("time {t} outside trajectory span [{start}, {end}]")]
    OutOfRange { t: f64, start: f64, end: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("gap violation: gap {gap} m must be positive")]
    GapViolation { gap: f64 },

    #[error("configuration error: {0}")]
    Configuration(String),

    #[error("collision at t = {t:.3} s (gap {gap:.3} m)")]
    Crash { t: f64, gap: f64 },

    #[error("time headway undefined: no sample above {floor} m/s")]
    UndefinedHeadway { floor: f64 },

    #[error("statistic undefined: {0}")]
    UndefinedStatistic(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("degenerate clustering: all feature points coincide")]
    DegenerateClustering,

    #[error("inconsistent inputs: {0}")]
    InconsistentInputs(String),

    #[error("{path}: row {row}: {msg}")]
    Parse {
        path: PathBuf,
        row: usize,
        msg: String,
    },

    #[error("{path}: {cause}")]
    Io { path: PathBuf, cause: std::io::Error },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable snake_case name of the variant, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegenerateTrajectory(_) => "degenerate_trajectory",
            Error::OutOfRange { .. } => "out_of_range",
            Error::InvalidInput(_) => "invalid_input",
            Error::EmptyInput(_) => "empty_input",
            Error::GapViolation { .. } => "gap_violation",
            Error::Configuration(_) => "configuration",
            Error::Crash { .. } => "crash",
            Error::UndefinedHeadway { .. } => "undefined_headway",
            Error::UndefinedStatistic(_) => "undefined_statistic",
            Error::InsufficientData(_) => "insufficient_data",
            Error::DegenerateClustering => "degenerate_clustering",
            Error::InconsistentInputs(_) => "inconsistent_inputs",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
            Error::Csv(_) => "csv",
            Error::Json(_) => "json",
        }
    }
}
