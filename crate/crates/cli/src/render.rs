use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Csv,
    Json,
}

/// A titled table of string cells.
#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(title: impl Into<String>, columns: Vec<String>) -> Self {
        Self { title: title.into(), columns, rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

pub fn yes_no(b: bool) -> String {
    if b { "Yes" } else { "No" }.to_string()
}

/// Renders tables one after another. JSON output is a single array.
pub fn render(tables: &[Table], format: Format) -> String {
    match format {
        Format::Md => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let _ = writeln!(out, "## {}\n", t.title);
                let _ = writeln!(out, "| {} |", t.columns.join(" | "));
                let _ = writeln!(out, "|{}", "---|".repeat(t.columns.len()));
                for r in &t.rows {
                    let _ = writeln!(out, "| {} |", r.join(" | "));
                }
            }
            out
        }
        Format::Csv => {
            let mut out = String::new();
            for (i, t) in tables.iter().enumerate() {
                if i > 0 {
                    out.push('\n');
                }
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&t.columns).expect("in-memory write");
                for r in &t.rows {
                    w.write_record(r).expect("in-memory write");
                }
                let bytes = w.into_inner().expect("in-memory flush");
                let _ = writeln!(out, "# {}", t.title);
                out.push_str(&String::from_utf8(bytes).expect("utf8 cells"));
            }
            out
        }
        Format::Json => {
            let mut s = serde_json::to_string_pretty(tables).expect("tables serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_commas() {
        let mut t = Table::new("x", vec!["a".into(), "b".into()]);
        t.push(vec!["(U,-)".into(), "0".into()]);
        assert_eq!(render(&[t], Format::Csv), "# x\na,b\n\"(U,-)\",0\n");
    }
}
