use std::fmt::Write;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{plan, run as run_check, Check, Ctx};
use crate::config::{Suite, SuiteConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: Suite,
    pub statement: String,
    pub params: Value,
    pub status: Status,
    /// Cases examined; absent on failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(skip)]
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Totals {
    pub checks: usize,
    pub passed: usize,
    pub failed: usize,
}

/// Everything here is a function of the configuration, so the serialized
/// report is reproducible byte for byte. Timing is reported separately.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub checks: Vec<CheckRecord>,
    pub totals: Totals,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.totals.failed == 0
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.checks {
            match (&r.status, r.cases, &r.witness) {
                (Status::Pass, cases, _) => {
                    let _ = writeln!(
                        out,
                        "PASS  {} ({} cases, {:.1}s)",
                        r.id,
                        cases.unwrap_or(0),
                        r.seconds
                    );
                }
                (Status::Fail, _, w) => {
                    let w = w.as_ref().map(Value::to_string).unwrap_or_default();
                    let _ = writeln!(out, "FAIL  {}: {w}", r.id);
                }
            }
        }
        let t = &self.totals;
        let _ = writeln!(
            out,
            "{} checks, {} passed, {} failed",
            t.checks, t.passed, t.failed
        );
        out
    }
}

fn execute(check: &Check, ctx: &Ctx) -> CheckRecord {
    let start = Instant::now();
    let outcome =
        panic::catch_unwind(AssertUnwindSafe(|| run_check(check, ctx))).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(json!({ "panic": msg }))
        });
    let (status, cases, witness) = match outcome {
        Ok(k) => (Status::Pass, Some(k), None),
        Err(w) => (Status::Fail, None, Some(w)),
    };
    CheckRecord {
        id: check.id(),
        suite: check.suite(),
        statement: check.statement(),
        params: check.params(),
        status,
        cases,
        witness,
        seconds: start.elapsed().as_secs_f64(),
    }
}

/// Runs the planned checks on the current rayon pool; records come back in id order.
pub fn run(config: &SuiteConfig) -> SuiteReport {
    let ctx = Ctx {
        l_max: config.l_max,
        seed: config.seed,
    };
    let checks = plan(config);
    let mut records: Vec<CheckRecord> = checks.par_iter().map(|c| execute(c, &ctx)).collect();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let failed = records.iter().filter(|r| r.status == Status::Fail).count();
    SuiteReport {
        config: config.clone(),
        totals: Totals {
            checks: records.len(),
            passed: records.len() - failed,
            failed,
        },
        checks: records,
    }
}

pub fn explain(id: &str) -> Result<String, String> {
    let check = Check::parse(id).ok_or_else(|| format!("unknown check id {id:?}"))?;
    let mut out = String::new();
    let _ = writeln!(out, "{}  [suite: {}]", check.id(), check.suite());
    let _ = writeln!(out, "{}", check.statement());
    let params = check.params();
    let fixed: Vec<String> = params
        .as_object()
        .into_iter()
        .flatten()
        .map(|(k, v)| {
            format!(
                "{k} = {}",
                v.as_str()
                    .map(str::to_string)
                    .unwrap_or_else(|| v.to_string())
            )
        })
        .collect();
    if !fixed.is_empty() {
        let _ = writeln!(out, "parameters: {}", fixed.join(", "));
    }
    Ok(out)
}
