//! Run reports: inputs, fields, tables and certificates of one command,
//! rendered as key/value text or JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certificate::Certificate;
use crate::error::Error;
use crate::field::FieldDescriptor;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    /// A claim failed on input that met its hypotheses.
    ClaimFailed,
    HypothesisNotMet,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::ClaimFailed => 1,
            Status::HypothesisNotMet | Status::Error => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::ClaimFailed => "claim_failed",
            Status::HypothesisNotMet => "hypothesis_not_met",
            Status::Error => "error",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<I, T>(&mut self, cells: I)
    where
        I: IntoIterator<Item = T>,
        T: ToString,
    {
        self.rows.push(cells.into_iter().map(|c| c.to_string()).collect());
    }

    /// Cell `column` of every row.
    pub fn column(&self, column: &str) -> Option<Vec<&str>> {
        let i = self.columns.iter().position(|c| c == column)?;
        Some(self.rows.iter().map(|r| r[i].as_str()).collect())
    }
}

/// One polynomial a report was computed from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    /// `fermat(3,4)`, `one_node(3,4,7,dense)` or `file(<path>)`.
    pub source: String,
    pub n: usize,
    pub d: u32,
    /// Canonical text of `f` over the rationals; replaying it reproduces the run.
    pub polynomial: String,
    pub sha256: String,
    pub points: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub attempts: Option<usize>,
    /// Verdict of the nodal certification, when run.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub hypothesis: Option<String>,
}

pub fn sha256_hex(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ErrorRecord {
    pub kind: String,
    pub message: String,
}

impl From<&Error> for ErrorRecord {
    fn from(e: &Error) -> Self {
        ErrorRecord {
            kind: e.kind().to_string(),
            message: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub command: String,
    pub fields: Vec<FieldDescriptor>,
    pub options: BTreeMap<String, String>,
    pub inputs: Vec<InputRecord>,
    pub tables: Vec<Table>,
    pub certificates: Vec<Certificate>,
    pub notes: Vec<String>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<ErrorRecord>,
    /// Wall-clock milliseconds per phase; excluded from comparisons.
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub timings_ms: BTreeMap<String, u64>,
}

impl RunReport {
    pub fn new(command: &str, fields: Vec<FieldDescriptor>) -> Self {
        RunReport {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            fields,
            options: BTreeMap::new(),
            inputs: Vec::new(),
            tables: Vec::new(),
            certificates: Vec::new(),
            notes: Vec::new(),
            status: Status::Pass,
            error: None,
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn failed(command: &str, fields: Vec<FieldDescriptor>, error: &Error) -> Self {
        let mut r = RunReport::new(command, fields);
        r.status = Status::Error;
        r.error = Some(error.into());
        r
    }

    pub fn option(&mut self, key: &str, value: impl ToString) {
        self.options.insert(key.to_string(), value.to_string());
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn certificate(&self, claim: &str) -> Option<&Certificate> {
        self.certificates.iter().find(|c| c.claim == claim)
    }

    /// Pass unless a certificate failed; keeps an earlier non-pass status.
    pub fn settle(&mut self) {
        if self.status == Status::Pass && self.certificates.iter().any(|c| !c.passed) {
            self.status = Status::ClaimFailed;
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn without_timings(&self) -> RunReport {
        RunReport {
            timings_ms: BTreeMap::new(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn from_json(text: &str) -> Result<RunReport, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let fields: Vec<String> = self.fields.iter().map(|f| f.to_string()).collect();
        let _ = writeln!(out, "schema: {}", self.schema_version);
        let _ = writeln!(out, "tool: nodal {}", self.tool_version);
        let _ = writeln!(out, "command: {}", self.command);
        let _ = writeln!(out, "fields: {}", fields.join(","));
        for (k, v) in &self.options {
            let _ = writeln!(out, "option.{k}: {v}");
        }
        for (i, input) in self.inputs.iter().enumerate() {
            let _ = writeln!(out, "input[{i}].source: {}", input.source);
            let _ = writeln!(out, "input[{i}].n: {}", input.n);
            let _ = writeln!(out, "input[{i}].d: {}", input.d);
            let _ = writeln!(out, "input[{i}].polynomial: {}", input.polynomial);
            let _ = writeln!(out, "input[{i}].sha256: {}", input.sha256);
            if !input.points.is_empty() {
                let _ = writeln!(out, "input[{i}].points: {}", input.points.join(" "));
            }
            if let Some(seed) = input.seed {
                let _ = writeln!(out, "input[{i}].seed: {seed}");
            }
            if let Some(a) = input.attempts {
                let _ = writeln!(out, "input[{i}].attempts: {a}");
            }
            if let Some(h) = &input.hypothesis {
                let _ = writeln!(out, "input[{i}].hypothesis: {h}");
            }
        }
        for t in &self.tables {
            out.push('\n');
            render_table(&mut out, t);
        }
        if !self.certificates.is_empty() {
            out.push_str("\ncertificates:\n");
            for c in &self.certificates {
                let _ = writeln!(out, "  {c}");
            }
        }
        for note in &self.notes {
            let _ = writeln!(out, "note: {note}");
        }
        for (phase, ms) in &self.timings_ms {
            let _ = writeln!(out, "time.{phase}: {ms} ms");
        }
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error.kind: {}", e.kind);
            let _ = writeln!(out, "error.message: {}", e.message);
        }
        let _ = writeln!(out, "status: {}", self.status.as_str());
        out
    }
}

fn render_table(out: &mut String, t: &Table) {
    let mut widths: Vec<usize> = t.columns.iter().map(String::len).collect();
    for row in &t.rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: &[String]| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
        padded.join("  ").trim_end().to_string()
    };
    let _ = writeln!(out, "table {}:", t.name);
    let _ = writeln!(out, "  {}", line(&t.columns));
    for row in &t.rows {
        let _ = writeln!(out, "  {}", line(row));
    }
}
