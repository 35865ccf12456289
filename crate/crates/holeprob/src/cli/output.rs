//! CSV and JSON tables.

use serde_json::{Map, Number, Value};

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    U(u64),
    S(String),
    B(bool),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::F(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::U(v as u64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::U(v)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::B(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::S(v.to_string())
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::F)
    }
}

fn nonfinite(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

impl Cell {
    /// Reals with 17 significant digits.
    fn csv(&self) -> String {
        match self {
            Cell::F(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::F(v) => nonfinite(*v).to_string(),
            Cell::U(v) => v.to_string(),
            Cell::S(s) => s.clone(),
            Cell::B(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    /// Shortest representation that parses back to the same `f64`;
    /// non-finite values become strings.
    fn json(&self) -> Value {
        match self {
            Cell::F(v) => Number::from_f64(*v).map_or_else(|| Value::String(nonfinite(*v).into()), Value::Number),
            Cell::U(v) => Value::from(*v),
            Cell::S(s) => Value::String(s.clone()),
            Cell::B(b) => Value::Bool(*b),
            Cell::Empty => Value::Null,
        }
    }
}

/// A result table with an optional summary row sharing its columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub footer: Option<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
            footer: None,
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in self.rows.iter().chain(self.footer.as_ref()) {
            let line: Vec<String> = row.iter().map(Cell::csv).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }

    fn object(&self, row: &[Cell]) -> Value {
        let mut m = Map::new();
        for (c, v) in self.columns.iter().zip(row) {
            m.insert((*c).to_string(), v.json());
        }
        Value::Object(m)
    }

    /// `{"meta": ..., "rows": [...], "footer": {...}}`, pretty printed with
    /// a trailing newline.
    pub fn to_json(&self, meta: Value) -> String {
        let mut doc = Map::new();
        doc.insert("meta".into(), meta);
        doc.insert("rows".into(), Value::Array(self.rows.iter().map(|r| self.object(r)).collect()));
        if let Some(f) = &self.footer {
            doc.insert("footer".into(), self.object(f));
        }
        let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("JSON values always serialise");
        s.push('\n');
        s
    }
}
