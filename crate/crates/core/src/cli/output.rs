//! The report envelope and its text, JSON and CSV renderings.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;
use serde_json::Value as Json;

use crate::config::Config;
use crate::report::{Counterexample, Status, VerificationReport};

pub const SCHEMA: &str = "arithdyn.report/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ReportStatus {
    Pass,
    Fail,
    Info,
}

impl From<Status> for ReportStatus {
    fn from(s: Status) -> Self {
        match s {
            Status::Pass => ReportStatus::Pass,
            Status::Fail => ReportStatus::Fail,
        }
    }
}

impl ReportStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            ReportStatus::Fail => 1,
            _ => 0,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: Config,
}

/// Rows for the text and CSV renderings. Not part of the JSON report.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table {
            headers: headers.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// A two-column key/value table.
    pub fn pairs<K: ToString, V: ToString>(items: impl IntoIterator<Item = (K, V)>) -> Self {
        let mut t = Table::new(&["key", "value"]);
        for (k, v) in items {
            t.push(vec![k.to_string(), v.to_string()]);
        }
        t
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub parameters: BTreeMap<String, Json>,
    pub status: ReportStatus,
    pub results: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Counterexample>,
    pub conclusions: Vec<String>,
    pub provenance: Provenance,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
    #[serde(skip)]
    pub table: Table,
}

impl Report {
    pub fn new(command: &str, status: ReportStatus, results: Json, table: Table) -> Self {
        Report {
            schema: SCHEMA,
            command: command.to_string(),
            parameters: BTreeMap::new(),
            status,
            results,
            counterexample: None,
            conclusions: Vec::new(),
            provenance: Provenance {
                tool: env!("CARGO_PKG_NAME"),
                version: env!("CARGO_PKG_VERSION"),
                config: Config::default(),
            },
            timestamp: None,
            table,
        }
    }

    /// Wraps a verification outcome; status, counterexample and conclusions
    /// are lifted to the envelope.
    pub fn from_verification(command: &str, v: &VerificationReport) -> Self {
        let mut table = Table::pairs([
            ("lemma", v.lemma_id.clone()),
            ("families_checked", v.families_checked.to_string()),
            ("depth", v.depth.to_string()),
        ]);
        if let Some(b) = &v.certified_bound {
            table.push(vec!["certified".into(), b.to_string()]);
        }
        let mut r = Report::new(
            command,
            v.status.into(),
            serde_json::to_value(v).expect("report serializes"),
            table,
        );
        r.counterexample = v.counterexample.clone();
        r.conclusions = v.conclusions.clone();
        r
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serializes"),
        );
        self
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, self)?;
                writeln!(out)
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.table.headers)?;
                for row in &self.table.rows {
                    w.write_record(row)?;
                }
                w.flush()
            }
            Format::Text => self.render_text(out),
        }
    }

    fn render_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let status = serde_json::to_value(self.status).expect("status serializes");
        writeln!(
            out,
            "{}: {}",
            self.command,
            status.as_str().unwrap_or_default()
        )?;
        let t = &self.table;
        let mut widths: Vec<usize> = t.headers.iter().map(|h| h.chars().count()).collect();
        for row in &t.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells
                .iter()
                .zip(&widths)
                .map(|(c, &w)| format!("{c:<w$}"))
                .collect();
            padded.join("  ").trim_end().to_string()
        };
        if !t.headers.is_empty() {
            writeln!(out, "{}", line(&t.headers))?;
            for row in &t.rows {
                writeln!(out, "{}", line(row))?;
            }
        }
        if let Some(c) = &self.counterexample {
            let fam = c
                .family
                .as_deref()
                .map(|f| format!("{f} "))
                .unwrap_or_default();
            writeln!(
                out,
                "counterexample: {fam}at {}: expected {}, got {}",
                c.position, c.expected, c.actual
            )?;
        }
        for c in &self.conclusions {
            writeln!(out, "{c}")?;
        }
        Ok(())
    }
}
