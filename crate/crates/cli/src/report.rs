//! `report.json` and `report.md`. Both are pure functions of the check
//! reports, so identical scenarios give byte-identical files.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use fclab_core::theorems::CheckReport;
use fclab_core::verdict::Verdict;

use crate::scenario::Scenario;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryLine {
    pub id: String,
    pub verdict: Verdict,
    pub rows: usize,
    pub failing_rows: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub tool: String,
    pub version: String,
    pub scenario: Scenario,
    pub verdict: Verdict,
    pub exit_code: i32,
    pub summary: Vec<SummaryLine>,
    pub checks: Vec<CheckReport>,
}

impl RunReport {
    pub fn new(scenario: &Scenario, checks: Vec<CheckReport>) -> Self {
        let verdict = Verdict::all(checks.iter().map(|c| c.verdict));
        let summary = checks
            .iter()
            .map(|c| SummaryLine {
                id: c.id.clone(),
                verdict: c.verdict,
                rows: c.rows.len(),
                failing_rows: c.rows.iter().filter(|r| !r.verdict.is_ok()).count(),
            })
            .collect();
        Self {
            tool: "fclab".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            scenario: scenario.resolved(),
            verdict,
            exit_code: verdict.exit_code(),
            summary,
            checks,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_markdown(&self) -> String {
        let mut md = String::new();
        let sc = &self.scenario;
        let first = self.checks.first().map(|c| &c.instance);
        let _ = writeln!(md, "# fclab report\n");
        let _ = writeln!(md, "Overall verdict: **{}** (exit code {})\n", self.verdict.label(), self.exit_code);
        let _ = writeln!(md, "## Instance\n");
        let _ = writeln!(md, "- ring: GF({})[{}]", sc.p, sc.vars.join(", "));
        if let Some(inst) = first {
            let _ = writeln!(md, "- I1 = {}", inst.i1);
            let _ = writeln!(md, "- I2 = {}", inst.i2);
            let _ = writeln!(md, "- sequence: {}", inst.sequence.join(", "));
        }
        let _ = writeln!(
            md,
            "- shape (k1, k2) = ({}, {}), seed {}",
            sc.k1.unwrap_or(0),
            sc.k2.unwrap_or(0),
            sc.seed
        );
        if let (Some([a, b]), Some(nf)) = (sc.window, sc.fiber_nmax) {
            let _ = writeln!(md, "- window n1 <= {a}, n2 <= {b}; fiber window n <= {nf}");
        }
        let _ = writeln!(md, "\n## Summary\n");
        let _ = writeln!(md, "| check | verdict | rows | failing rows |");
        let _ = writeln!(md, "|---|---|---|---|");
        for s in &self.summary {
            let _ = writeln!(md, "| {} | {} | {} | {} |", s.id, s.verdict.label(), s.rows, s.failing_rows);
        }
        for c in &self.checks {
            let _ = writeln!(md, "\n## {}\n", c.id);
            let _ = writeln!(md, "Verdict: **{}**\n", c.verdict.label());
            for n in &c.notes {
                let _ = writeln!(md, "- {}", escape(n));
            }
            if !c.notes.is_empty() {
                md.push('\n');
            }
            if c.rows.is_empty() {
                continue;
            }
            let _ = writeln!(md, "| label | at | LHS | | RHS | verdict | note |");
            let _ = writeln!(md, "|---|---|---|---|---|---|---|");
            for r in &c.rows {
                let at: Vec<String> = r.at.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(
                    md,
                    "| {} | ({}) | {} | {} | {} | {} | {} |",
                    escape(&r.label),
                    at.join(", "),
                    r.lhs,
                    r.relation.symbol(),
                    r.rhs,
                    r.verdict.label(),
                    escape(r.note.as_deref().unwrap_or(""))
                );
            }
        }
        md
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        fs::create_dir_all(dir)?;
        fs::write(dir.join("report.json"), self.to_json())?;
        fs::write(dir.join("report.md"), self.to_markdown())?;
        Ok(())
    }
}

fn escape(s: &str) -> String {
    s.replace('|', "\\|")
}

/// True when `v` contains no floating-point numbers anywhere.
pub fn float_free(v: &serde_json::Value) -> bool {
    match v {
        serde_json::Value::Number(n) => n.is_i64() || n.is_u64(),
        serde_json::Value::Array(a) => a.iter().all(float_free),
        serde_json::Value::Object(o) => o.values().all(float_free),
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn float_detection() {
        assert!(float_free(&json!({"a": [1, -2, "1/3"]})));
        assert!(!float_free(&json!({"a": [1.5]})));
    }

    #[test]
    fn pipes_are_escaped() {
        assert_eq!(escape("a|b"), "a\\|b");
    }
}
