//! Machine-readable run reports.

use regtourn::checks::CheckReport;
use regtourn::scalar::{Mode, Scalar};
use regtourn::suites::SuiteOutcome;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub command: Vec<String>,
    pub mode: Mode,
    pub inputs: Vec<InputDigest>,
    pub results: Vec<ResultEntry>,
    pub holds: bool,
    pub elapsed_seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ResultEntry {
    Check(CheckEntry),
    Density(DensityEntry),
    Classification(ClassificationEntry),
    Search(SearchEntry),
    Suite(SuiteEntry),
    Generated(GeneratedEntry),
    Enumeration(EnumerationEntry),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub claim: String,
    pub instance: String,
    pub lhs: String,
    pub rhs: String,
    pub slack: String,
    pub slack_decimal: f64,
    pub equality: bool,
    pub holds: bool,
    pub deviation: String,
    pub detail: String,
    /// The tournamenton (`STW1`) of a violated instance.
    pub witness: Option<String>,
}

impl CheckEntry {
    pub fn from_report<S: Scalar>(instance: String, r: &CheckReport<S>, witness: Option<String>) -> Self {
        CheckEntry {
            claim: r.claim.to_string(),
            instance,
            lhs: r.lhs.to_string(),
            rhs: r.rhs.to_string(),
            slack: r.slack.to_string(),
            slack_decimal: r.slack.to_f64(),
            equality: r.equality,
            holds: r.passes(),
            deviation: r.deviation.to_string(),
            detail: r.detail.clone(),
            witness,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEntry {
    pub value: String,
    pub decimal: f64,
    pub assignments: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationEntry {
    pub vertices: usize,
    pub verdict: String,
    pub sizes: Option<[usize; 3]>,
    pub parts: Option<Vec<Vec<usize>>>,
    pub forbidden: Option<String>,
    pub embedding: Option<Vec<usize>>,
    pub witness: Option<String>,
    pub forcing: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub sense: String,
    pub parts: usize,
    pub restarts: usize,
    pub objective: f64,
    pub gradient_norm: f64,
    pub deviation: f64,
    pub best_restart: usize,
    /// Final objective of every restart, by index.
    pub restart_objectives: Vec<f64>,
    pub best: String,
    pub landscape: Option<LandscapeEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LandscapeEntry {
    pub bound: f64,
    pub samples: usize,
    pub min_slack: f64,
    pub max_slack: f64,
    pub endpoint_slack: f64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub checked: usize,
    pub passed: bool,
    pub failures: Vec<String>,
}

impl From<&SuiteOutcome> for SuiteEntry {
    fn from(s: &SuiteOutcome) -> Self {
        SuiteEntry { name: s.name.clone(), checked: s.checked, passed: s.passed(), failures: s.failures.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedEntry {
    pub family: String,
    pub format: String,
    pub path: Option<String>,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationEntry {
    pub order: usize,
    pub classes: usize,
    pub canonical: Vec<String>,
}
