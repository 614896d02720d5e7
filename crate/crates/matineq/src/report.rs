//! JSON run reports and persisted counterexample records.
//! The schema is documented in `docs/report.schema.json`.

use serde::{Deserialize, Serialize};

use crate::checks::{CheckResult, Verdict};
use crate::error::Result;
use crate::generators::InstanceSpec;
use crate::linalg::MatrixJson;
use crate::orders::Tolerances;
use crate::quadrature::QuadratureRule;

/// Verdict counts; always a partition of the result list.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub violated: usize,
    pub hypothesis_unmet: usize,
    pub error: usize,
}

impl Summary {
    pub fn tally(results: &[CheckResult]) -> Self {
        let mut s = Self::default();
        for r in results {
            match r.verdict {
                Verdict::Pass => s.pass += 1,
                Verdict::Violated => s.violated += 1,
                Verdict::HypothesisUnmet => s.hypothesis_unmet += 1,
                Verdict::Error => s.error += 1,
            }
        }
        s
    }
}

/// Top-level report emitted by every subcommand that evaluates checks.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub tool_version: String,
    /// ISO-8601; omitted under `--no-timestamp` so reports are byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
    pub rule: QuadratureRule,
    pub tolerances: Tolerances,
    pub results: Vec<CheckResult>,
    pub summary: Summary,
}

impl RunReport {
    pub fn new(
        results: Vec<CheckResult>,
        rule: QuadratureRule,
        tolerances: Tolerances,
        with_timestamp: bool,
    ) -> Self {
        let summary = Summary::tally(&results);
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: with_timestamp.then(|| chrono::Utc::now().to_rfc3339()),
            rule,
            tolerances,
            results,
            summary,
        }
    }

    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One persisted hunt finding: everything needed to replay the check,
/// including the concrete matrices for external scrutiny.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub spec: InstanceSpec,
    /// Whether hypothesis gating was bypassed when the finding was made;
    /// replay applies the same setting.
    #[serde(default)]
    pub forced: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_a: Option<MatrixJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix_b: Option<MatrixJson>,
    pub result: CheckResult,
}
