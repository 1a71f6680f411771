//! Per-command records and their text and JSON renderings.

use std::fmt::Write as _;

use serde::Serialize;

use super::ast::CheckKind;

pub const SCHEMA: &str = "nagata-report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    Indeterminate,
    Error,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Indeterminate => "indeterminate",
            Verdict::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommandRecord {
    pub line: usize,
    pub command: String,
    pub kind: CheckKind,
    pub target: String,
    pub verdict: Verdict,
    pub summary: String,
    pub evidence: serde_json::Value,
    /// Omitted when timing is switched off.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Totals {
    pub pass: usize,
    pub fail: usize,
    pub indeterminate: usize,
    pub error: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub seed: u64,
    pub precision: usize,
    pub commands: Vec<CommandRecord>,
    pub totals: Totals,
}

impl Report {
    pub fn new(seed: u64, precision: usize, commands: Vec<CommandRecord>) -> Self {
        let mut totals = Totals::default();
        for c in &commands {
            match c.verdict {
                Verdict::Pass => totals.pass += 1,
                Verdict::Fail => totals.fail += 1,
                Verdict::Indeterminate => totals.indeterminate += 1,
                Verdict::Error => totals.error += 1,
            }
        }
        Report {
            schema: SCHEMA,
            seed,
            precision,
            commands,
            totals,
        }
    }

    /// 0 when nothing failed, 1 on a fail or error verdict, 2 on an
    /// indeterminate verdict under `strict`.
    pub fn exit_code(&self, strict: bool) -> i32 {
        if self.totals.fail + self.totals.error > 0 {
            1
        } else if strict && self.totals.indeterminate > 0 {
            2
        } else {
            0
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let width = self.commands.iter().map(|c| c.command.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for c in &self.commands {
            let pad = width - c.command.chars().count();
            let _ = write!(
                out,
                "{:>4}  {}{}  {:<13}  {}",
                c.line,
                c.command,
                " ".repeat(pad),
                c.verdict.name(),
                c.summary
            );
            if let Some(ms) = c.elapsed_ms {
                let _ = write!(out, "  ({ms:.1} ms)");
            }
            out.push('\n');
        }
        let t = &self.totals;
        let _ = writeln!(
            out,
            "{} pass, {} fail, {} indeterminate, {} error",
            t.pass, t.fail, t.indeterminate, t.error
        );
        out
    }
}
