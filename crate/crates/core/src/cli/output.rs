//! CSV and JSON writers. Floats in CSV carry 17 significant digits so a
//! round trip through text is exact.

use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use super::config::Task;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Column-named rows.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self { columns: columns.to_vec(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self, metadata: Option<&Value>) -> String {
        let mut s = String::new();
        if let Some(Value::Object(m)) = metadata {
            for (k, v) in m {
                let v = match v {
                    Value::String(t) => t.clone(),
                    other => other.to_string(),
                };
                let _ = writeln!(s, "# {k}={v}");
            }
        }
        s.push_str(&self.columns.join(","));
        s.push('\n');
        for row in &self.rows {
            for (i, c) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                match c {
                    Cell::Num(v) => {
                        let _ = write!(s, "{}", fmt_float(*v));
                    }
                    Cell::Int(v) => {
                        let _ = write!(s, "{v}");
                    }
                    Cell::Text(t) => s.push_str(t),
                }
            }
            s.push('\n');
        }
        s
    }

    /// Rows as an array of objects keyed by column.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let mut m = Map::new();
                    for (name, c) in self.columns.iter().zip(row) {
                        m.insert((*name).to_string(), cell_json(c));
                    }
                    Value::Object(m)
                })
                .collect(),
        )
    }
}

pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.16e}")
    }
}

fn cell_json(c: &Cell) -> Value {
    match c {
        Cell::Num(v) => num(*v),
        Cell::Int(v) => json!(v),
        Cell::Text(t) => json!(t),
    }
}

/// Finite floats as JSON numbers (shortest round-trip form), the rest as
/// strings since JSON has no NaN or infinity.
pub fn num(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(fmt_float(v))
    }
}

pub fn opt_num(v: Option<f64>) -> Value {
    v.map_or(Value::Null, num)
}

/// Run metadata. The timestamp is the only field that varies between
/// otherwise identical runs.
pub fn metadata(task: Task, threads: usize) -> Value {
    let created = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    json!({
        "generator": "qws",
        "version": env!("CARGO_PKG_VERSION"),
        "task": task.name(),
        "threads": threads,
        "created_unix": created,
    })
}

/// Pretty JSON with a trailing newline; `metadata` is attached under the
/// `metadata` key.
pub fn render_json(mut body: Value, metadata: Option<Value>) -> String {
    if let (Some(meta), Value::Object(m)) = (metadata, &mut body) {
        m.insert("metadata".into(), meta);
    }
    let mut s = serde_json::to_string_pretty(&body).expect("JSON values always serialize");
    s.push('\n');
    s
}
