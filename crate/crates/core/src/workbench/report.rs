//! Check reports and their text and JSON renderings.

use serde::Serialize;

use crate::budget::Budget;
use crate::verdict::Verdict;

pub const REPORT_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub status: Status,
    pub witness: Option<String>,
    pub checked: usize,
    pub excluded_by_fuel: usize,
    pub ms: u64,
}

impl CheckReport {
    pub fn new(
        name: String,
        verdict: Verdict,
        note: Option<String>,
        checked: usize,
        excluded_by_fuel: usize,
        ms: u64,
    ) -> CheckReport {
        let (status, witness) = match verdict {
            Verdict::Holds => (Status::Pass, note),
            Verdict::Fails(w) => (Status::Fail, Some(w)),
            Verdict::Undecided(w) => (Status::Undecided, Some(w)),
        };
        CheckReport {
            name,
            status,
            witness,
            checked,
            excluded_by_fuel,
            ms,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BudgetStamp {
    pub universe: String,
    pub fuel: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub version: u32,
    pub budget: BudgetStamp,
    pub checks: Vec<CheckReport>,
}

impl Default for Report {
    fn default() -> Self {
        Report {
            version: REPORT_VERSION,
            budget: BudgetStamp::default(),
            checks: Vec::new(),
        }
    }
}

impl Report {
    pub fn set_budget(&mut self, b: &Budget) {
        self.budget = BudgetStamp {
            universe: b.spec().to_string(),
            fuel: b.fuel().max_steps(),
        };
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    /// 0 only when every check passed.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().all(|c| c.status == Status::Pass) {
            0
        } else {
            1
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report).expect("report serializes");
            out.push(b'\n');
            out
        }
        Format::Text => {
            let mut out = format!(
                "budget: {} fuel {}\n",
                report.budget.universe, report.budget.fuel
            );
            for c in &report.checks {
                let tag = match c.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                    Status::Undecided => "UNDECIDED",
                };
                out.push_str(&format!("{tag:<9} {}  ({} checked", c.name, c.checked));
                if c.excluded_by_fuel > 0 {
                    out.push_str(&format!(", {} excluded by fuel", c.excluded_by_fuel));
                }
                if c.ms > 0 {
                    out.push_str(&format!(", {} ms", c.ms));
                }
                out.push_str(")\n");
                if let Some(w) = &c.witness {
                    out.push_str(&format!("          {w}\n"));
                }
            }
            out.push_str(&format!(
                "{} passed, {} failed, {} undecided\n",
                report.count(Status::Pass),
                report.count(Status::Fail),
                report.count(Status::Undecided)
            ));
            out.into_bytes()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_json() {
        let json = String::from_utf8(emit_report(&Report::default(), Format::Json)).unwrap();
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["version"], 1);
        assert_eq!(v["checks"].as_array().unwrap().len(), 0);
        assert_eq!(Report::default().exit_code(), 0);
    }

    #[test]
    fn failures_carry_witnesses() {
        let c = CheckReport::new("x".into(), Verdict::Fails("w".into()), None, 1, 0, 0);
        assert_eq!(c.status, Status::Fail);
        assert_eq!(c.witness.as_deref(), Some("w"));
        let r = Report {
            checks: vec![c],
            ..Report::default()
        };
        assert_eq!(r.exit_code(), 1);
        let json = String::from_utf8(emit_report(&r, Format::Json)).unwrap();
        assert!(json.contains("\"status\": \"fail\""));
    }

    #[test]
    fn undecided_taints_the_exit_code() {
        let c = CheckReport::new("x".into(), Verdict::Undecided("fuel".into()), None, 1, 0, 0);
        let r = Report {
            checks: vec![c],
            ..Report::default()
        };
        assert_eq!(r.exit_code(), 1);
    }
}
