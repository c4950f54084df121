//! Report types and the JSON forms of points and rationals.

use serde::Serialize;
use serde_json::{json, Value};
use splitcantor::model::{Point, PointId, Space};
use splitcantor::rational::{to_text, Rational};

use crate::config::ExperimentConfig;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn from_ok(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    pub name: String,
    pub status: Status,
    pub summary: Value,
    /// At most [`WITNESS_LIMIT`] entries; the summary holds the full count.
    pub witnesses: Vec<Value>,
    pub duration_ms: Option<u64>,
}

pub const WITNESS_LIMIT: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainSummary {
    pub status: Status,
    pub steps: usize,
    pub complete: bool,
    pub certificates: usize,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub config: ExperimentConfig,
    pub chain: ChainSummary,
    pub suites: Vec<SuiteResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.chain.status == Status::Pass && self.suites.iter().all(|s| s.status == Status::Pass)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serializes");
        text.push('\n');
        text
    }
}

/// Ground points as their code, split points as `[ξ, i]`.
pub fn point(space: &Space, id: PointId) -> Value {
    match space.point(id) {
        Point::Ground(code) => json!(code.to_string()),
        Point::Split { index, branch } => json!([index, branch]),
    }
}

pub fn rational(r: &Rational) -> Value {
    json!(to_text(r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use splitcantor::model::SpaceConfig;
    use splitcantor::rational::rat;

    #[test]
    fn point_forms() {
        let sp = Space::new(SpaceConfig::new(2, 2, vec!["01".parse().unwrap()])).unwrap();
        assert_eq!(point(&sp, PointId(0)), json!("00"));
        assert_eq!(point(&sp, PointId(2)), json!([0, 2]));
        assert_eq!(rational(&rat(-3, 6)), json!("-1/2"));
    }
}
