//! Reproducible runs of the hole-count pipeline: every command returns a
//! serializable report whose exit code says whether the asserted
//! identities held.

pub mod commands;
pub mod config;
pub mod report;

use holecount::construction::ConstructionError;
use holecount::geometry::GeometryError;
use holecount::oracle::OracleError;
use holecount::topology::TopologyError;
use serde::Serialize;

pub use commands::{
    cmd_export, cmd_holes, cmd_oracle, cmd_random_bound, cmd_warmup, write_outputs, ExportReport,
    HolesReport, OracleRunReport, RandomBoundReport, WarmupReport,
};
pub use config::{load_config_file, parse_config_text, RunConfig};
pub use report::{Envelope, Provenance, Report, Tagged, SCHEMA};

/// Exit code for a run whose identities all hold.
pub const EXIT_OK: i32 = 0;
/// Exit code for a construction, validation or input failure.
pub const EXIT_FAILURE: i32 = 2;
/// Exit code for a computed count that contradicts its closed form.
pub const EXIT_MISMATCH: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Construction(ConstructionError::Geometry(e))
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    schema: u32,
    error: ErrorDetail<'a>,
}

#[derive(Serialize)]
struct ErrorDetail<'a> {
    kind: &'a str,
    message: String,
}

impl CliError {
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input(_) => "input",
            CliError::Construction(_) => "construction",
            CliError::Topology(_) => "topology",
            CliError::Oracle(_) => "oracle",
            CliError::Io(_) => "io",
        }
    }

    pub fn exit_code(&self) -> i32 {
        EXIT_FAILURE
    }

    /// Machine-readable error document.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&ErrorBody {
            schema: SCHEMA,
            error: ErrorDetail {
                kind: self.kind(),
                message: self.to_string(),
            },
        })
        .expect("errors serialize")
    }
}
