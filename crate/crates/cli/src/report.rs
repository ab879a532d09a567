use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Artifact {
    pub name: &'static str,
    pub version: &'static str,
}

impl Artifact {
    pub fn current() -> Self {
        Artifact { name: "altkit", version: env!("CARGO_PKG_VERSION") }
    }
}

/// A failing case: both sides in canonical text, or the error it raised.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub case: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rhs: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Failure {
    pub fn mismatch(case: u64, lhs: String, rhs: String) -> Self {
        Failure { case, lhs: Some(lhs), rhs: Some(rhs), error: None }
    }

    pub fn error(case: u64, message: String) -> Self {
        Failure { case, lhs: None, rhs: None, error: Some(message) }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub ring: String,
    pub n: usize,
    pub cases_run: u64,
    pub failures: Vec<Failure>,
}

/// Wall-clock times, only present when asked for since they break
/// byte-for-byte reproducibility.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Timing {
    pub total_ms: f64,
    pub checks_ms: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub artifact: Artifact,
    pub command: String,
    pub config: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<serde_json::Value>,
    pub results: Vec<CheckResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
    pub total_failures: u64,
    pub passed: bool,
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value, results: Vec<CheckResult>) -> Self {
        let total_failures = results.iter().map(|r| r.failures.len() as u64).sum();
        Report {
            schema_version: SCHEMA_VERSION,
            artifact: Artifact::current(),
            command: command.to_string(),
            config,
            instance: None,
            probe: None,
            results,
            timing: None,
            total_failures,
            passed: total_failures == 0,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    /// 0 iff no failures.
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}
