use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;

/// Where a reported number comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    /// Derived by exact computation on the constructed objects.
    Computed,
    /// A closed-form count the computation is compared against.
    FormulaExpected,
    /// Produced by the voxel oracle.
    Oracle,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tagged<T> {
    pub value: T,
    pub provenance: Provenance,
}

pub fn computed<T>(value: T) -> Tagged<T> {
    Tagged {
        value,
        provenance: Provenance::Computed,
    }
}

pub fn expected<T>(value: T) -> Tagged<T> {
    Tagged {
        value,
        provenance: Provenance::FormulaExpected,
    }
}

pub fn oracle<T>(value: T) -> Tagged<T> {
    Tagged {
        value,
        provenance: Provenance::Oracle,
    }
}

/// The only part of a report that varies between identical runs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Header {
    pub schema: u32,
    pub command: String,
    pub generated_at_unix: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub header: Header,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(command: &str, report: T) -> Self {
        let now = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            header: Header {
                schema: SCHEMA,
                command: command.to_string(),
                generated_at_unix: now,
            },
            report,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// Reports know which exit code they imply and may offer a CSV view.
pub trait Report: Serialize {
    /// 0 when every asserted identity holds, 3 otherwise.
    fn exit_code(&self) -> i32;

    fn csv(&self) -> Option<String> {
        None
    }
}
