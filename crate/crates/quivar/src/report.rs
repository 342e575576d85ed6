//! Machine-readable audit reports: per-claim results plus summary
//! counts, with a normalized view for byte-level determinism checks.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Discrepancy,
}

impl std::fmt::Display for Status {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Discrepancy => "discrepancy",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub runtime_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub discrepancy: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub timestamp: String,
    pub tool_version: String,
    pub results: Vec<ClaimResult>,
    pub summary: Summary,
}

pub const SCHEMA_VERSION: u32 = 1;

/// Current time as an ISO-8601 UTC string.
pub fn utc_timestamp() -> String {
    chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string()
}

impl Report {
    /// Assemble a report: results are sorted by claim id and counted.
    pub fn new(mut results: Vec<ClaimResult>, timestamp: String) -> Report {
        results.sort_by(|a, b| a.id.cmp(&b.id));
        let summary = Summary {
            pass: results.iter().filter(|r| r.status == Status::Pass).count(),
            fail: results.iter().filter(|r| r.status == Status::Fail).count(),
            discrepancy: results
                .iter()
                .filter(|r| r.status == Status::Discrepancy)
                .count(),
        };
        Report {
            schema_version: SCHEMA_VERSION,
            timestamp,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            results,
            summary,
        }
    }

    /// Copy with timing fields normalized, for comparing runs
    /// byte-for-byte.
    pub fn deterministic_view(&self) -> Report {
        let mut out = self.clone();
        out.timestamp = String::new();
        for r in out.results.iter_mut() {
            r.runtime_ms = 0;
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    pub fn has_fail(&self) -> bool {
        self.summary.fail > 0
    }

    pub fn has_discrepancy(&self) -> bool {
        self.summary.discrepancy > 0
    }
}
