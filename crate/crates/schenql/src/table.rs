//! Query results and their two renderings: an aligned text table and JSON
//! lines.

use serde_json::{Map, Number};
use std::fmt;

/// One cell. The language only ever produces text, integers, and NULLs.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Value {
    Null,
    Int(i64),
    Text(String),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => Ok(()),
            Value::Int(n) => write!(f, "{n}"),
            Value::Text(s) => f.write_str(s),
        }
    }
}

impl Value {
    fn to_json(&self) -> serde_json::Value {
        match self {
            Value::Null => serde_json::Value::Null,
            Value::Int(n) => serde_json::Value::Number(Number::from(*n)),
            Value::Text(s) => serde_json::Value::String(s.clone()),
        }
    }
}

/// A fully materialized query result. `rows` always holds every row; any
/// truncation happens at render time, with `total_row_count` feeding the
/// footer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResultTable {
    pub column_names: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub total_row_count: usize,
}

impl ResultTable {
    pub fn new(column_names: Vec<String>, rows: Vec<Vec<Value>>) -> ResultTable {
        let total_row_count = rows.len();
        ResultTable { column_names, rows, total_row_count }
    }

    /// Rows sorted into a canonical order, for set-wise comparison of
    /// results that carry no ordering guarantee.
    pub fn canonical_rows(&self) -> Vec<Vec<Value>> {
        let mut rows = self.rows.clone();
        rows.sort();
        rows
    }
}

/// How results are printed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Table,
    JsonLines,
}

impl OutputFormat {
    pub fn parse(s: &str) -> Option<OutputFormat> {
        match s {
            "table" => Some(OutputFormat::Table),
            "json-lines" => Some(OutputFormat::JsonLines),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OutputFormat::Table => "table",
            OutputFormat::JsonLines => "json-lines",
        }
    }
}

/// Renders at most `limit` rows in the requested format. Table output gets
/// a truncation note when rows are dropped; JSON lines stay pure JSON.
pub fn render(t: &ResultTable, format: OutputFormat, limit: usize) -> String {
    match format {
        OutputFormat::Table => render_table(t, limit),
        OutputFormat::JsonLines => render_json_lines(t, limit),
    }
}

fn render_table(t: &ResultTable, limit: usize) -> String {
    let shown = t.rows.len().min(limit);
    let mut widths: Vec<usize> = t.column_names.iter().map(|c| c.chars().count()).collect();
    let cells: Vec<Vec<String>> = t.rows[..shown]
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect();
    for row in &cells {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.chars().count());
        }
    }

    let mut out = String::new();
    let line = |parts: &[String]| {
        let mut rendered = String::new();
        for (i, part) in parts.iter().enumerate() {
            if i > 0 {
                rendered.push_str(" | ");
            }
            rendered.push_str(part);
            let pad = widths[i].saturating_sub(part.chars().count());
            if i + 1 < parts.len() {
                rendered.push_str(&" ".repeat(pad));
            }
        }
        rendered
    };

    out.push_str(&line(&t.column_names.to_vec()));
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&rule.join("-+-"));
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row));
        out.push('\n');
    }
    if shown < t.rows.len() {
        out.push_str(&format!("(showing first {shown} of {} rows)\n", t.total_row_count));
    }
    out
}

fn render_json_lines(t: &ResultTable, limit: usize) -> String {
    let mut out = String::new();
    for row in t.rows.iter().take(limit) {
        let mut obj = Map::new();
        for (name, value) in t.column_names.iter().zip(row) {
            obj.insert(name.clone(), value.to_json());
        }
        out.push_str(&serde_json::Value::Object(obj).to_string());
        out.push('\n');
    }
    out
}
