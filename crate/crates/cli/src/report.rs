//! JSON report types. Every document carries `schema_version` and
//! `tool_version`; the `timing` object is the only non-deterministic field.

use colmez_core::Convention;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

pub fn tool_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Exact,
    Numeric,
}

/// One verification check. Exact checks carry a rational residual (as a
/// string); numeric checks carry a double residual and a tolerance.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub kind: CheckKind,
    /// What identity this check exercises, in plain words.
    pub anchor: String,
    pub residual: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub pass: bool,
    /// True for mandatory discrepancy reports whose content is informative
    /// rather than a pass/fail gate.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub informational: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckRecord {
    pub fn exact(id: String, anchor: &str, residual: String, pass: bool) -> Self {
        CheckRecord {
            id,
            kind: CheckKind::Exact,
            anchor: anchor.to_string(),
            residual: serde_json::Value::String(residual),
            tolerance: None,
            pass,
            informational: false,
            detail: None,
        }
    }

    pub fn numeric(id: String, anchor: &str, residual: f64, tolerance: f64) -> Self {
        CheckRecord {
            id,
            kind: CheckKind::Numeric,
            anchor: anchor.to_string(),
            residual: serde_json::json!(residual),
            tolerance: Some(tolerance),
            pass: residual.abs() < tolerance,
            informational: false,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: String) -> Self {
        self.detail = Some(detail);
        self
    }

    pub fn informational(mut self) -> Self {
        self.informational = true;
        self.pass = true;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub total: usize,
    pub passed: usize,
    pub exact_failures: usize,
    pub numeric_failures: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub unix_ms: u128,
    pub wall_ms: u128,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationRun {
    pub schema_version: u32,
    pub tool_version: String,
    pub suite: String,
    pub convention: Convention,
    pub tolerance: f64,
    pub fields: Vec<String>,
    pub checks: Vec<CheckRecord>,
    pub summary: RunSummary,
    pub timing: Timing,
}

impl VerificationRun {
    pub fn assemble(
        suite: String,
        convention: Convention,
        tolerance: f64,
        fields: Vec<String>,
        mut checks: Vec<CheckRecord>,
        started_unix_ms: u128,
        wall_ms: u128,
    ) -> Self {
        checks.sort_by(|a, b| a.id.cmp(&b.id));
        let passed = checks.iter().filter(|c| c.pass).count();
        let exact_failures = checks
            .iter()
            .filter(|c| !c.pass && c.kind == CheckKind::Exact)
            .count();
        let numeric_failures = checks
            .iter()
            .filter(|c| !c.pass && c.kind == CheckKind::Numeric)
            .count();
        let summary = RunSummary {
            total: checks.len(),
            passed,
            exact_failures,
            numeric_failures,
        };
        VerificationRun {
            schema_version: SCHEMA_VERSION,
            tool_version: tool_version().to_string(),
            suite,
            convention,
            tolerance,
            fields,
            checks,
            summary,
            timing: Timing {
                unix_ms: started_unix_ms,
                wall_ms,
            },
        }
    }

    /// 0 all pass, 1 any exact failure, 2 numeric failures only.
    pub fn exit_code(&self) -> i32 {
        if self.summary.exact_failures > 0 {
            1
        } else if self.summary.numeric_failures > 0 {
            2
        } else {
            0
        }
    }
}
