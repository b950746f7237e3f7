//! Reports: bidegree tables, text sections and pass/fail checks, emitted as
//! aligned plain text or as versioned JSON.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: &str = "v1";

/// Entries shown per cell in text output before eliding the rest.
const TEXT_CELL_LIMIT: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub title: String,
    pub tables: Vec<Table>,
    pub sections: Vec<Section>,
    pub checks: Vec<Check>,
}

/// Rows listed top to bottom; `degrees` labels the columns and is printed as
/// the last row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Table {
    pub title: String,
    pub degrees: Vec<u32>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Row {
    pub label: String,
    pub cells: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Section {
    pub title: String,
    pub lines: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub details: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    pub fn new(command: &str, title: impl Into<String>) -> Self {
        Report {
            version: SCHEMA_VERSION.into(),
            command: command.into(),
            title: title.into(),
            tables: Vec::new(),
            sections: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn section(&mut self, title: &str, lines: Vec<String>) {
        self.sections.push(Section { title: title.into(), lines });
    }

    pub fn check(&mut self, name: &str, passed: bool, details: Vec<String>) {
        self.checks.push(Check { name: name.into(), passed, details });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn emit(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(self).expect("report serializes");
                s.push('\n');
                s
            }
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(s).map_err(|e| CliError::Report(e.to_string()))?;
        if r.version != SCHEMA_VERSION {
            return Err(CliError::Report(format!("unsupported schema version `{}`", r.version)));
        }
        Ok(r)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.title);
        for t in &self.tables {
            out.push('\n');
            out.push_str(&t.to_text());
        }
        for s in &self.sections {
            out.push_str(&format!("\n{}\n", s.title));
            if s.lines.is_empty() {
                out.push_str("  (none)\n");
            }
            for l in &s.lines {
                out.push_str(&format!("  {l}\n"));
            }
        }
        if !self.checks.is_empty() {
            out.push('\n');
        }
        for c in &self.checks {
            out.push_str(&format!("[{}] {}\n", if c.passed { "pass" } else { "FAIL" }, c.name));
            for d in &c.details {
                out.push_str(&format!("       {d}\n"));
            }
        }
        out
    }
}

fn cell_text(entries: &[String]) -> String {
    if entries.is_empty() {
        return "0".into();
    }
    if entries.len() > TEXT_CELL_LIMIT {
        let shown = entries[..TEXT_CELL_LIMIT - 1].join("; ");
        return format!("{shown}; +{} more", entries.len() - TEXT_CELL_LIMIT + 1);
    }
    entries.join("; ")
}

impl Table {
    pub fn to_text(&self) -> String {
        let grid: Vec<Vec<String>> =
            self.rows.iter().map(|r| r.cells.iter().map(|c| cell_text(c)).collect()).collect();
        let label_w = self.rows.iter().map(|r| r.label.chars().count()).max().unwrap_or(0);
        let widths: Vec<usize> = (0..self.degrees.len())
            .map(|j| {
                let deg = self.degrees[j].to_string().len();
                grid.iter().map(|row| row.get(j).map_or(1, |c| c.chars().count())).max().unwrap_or(1).max(deg)
            })
            .collect();
        let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
        let mut out = format!("{}\n", self.title);
        for (row, cells) in self.rows.iter().zip(&grid) {
            let body: Vec<String> = widths.iter().enumerate().map(|(j, w)| pad(cells.get(j).map_or("0", |s| s), *w)).collect();
            out.push_str(format!("{} | {}", pad(&row.label, label_w), body.join("  ")).trim_end());
            out.push('\n');
        }
        let rule: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
        out.push_str(&format!("{}-+-{}\n", "-".repeat(label_w), "-".repeat(rule)));
        let degs: Vec<String> = self.degrees.iter().zip(&widths).map(|(d, w)| pad(&d.to_string(), *w)).collect();
        out.push_str(format!("{} | {}", " ".repeat(label_w), degs.join("  ")).trim_end());
        out.push('\n');
        out
    }
}
