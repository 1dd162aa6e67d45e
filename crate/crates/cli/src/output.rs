//! Tables and their CSV / JSON renderings.
//!
//! Every float is written with 17 significant digits (`{:.16e}`), which
//! round-trips any `f64` exactly.

use serde_json::{Map, Number, Value};

use crate::error::CliError;

pub fn fmt_num(x: f64) -> String {
    format!("{x:.16e}")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Cell::Num(x) if x.is_finite() => Value::Number(
                fmt_num(*x)
                    .parse::<Number>()
                    .expect("formatted float is valid JSON"),
            ),
            Cell::Num(_) => Value::Null,
            Cell::Int(n) => Value::Number((*n).into()),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

/// Ordered key/value pairs, used for config echoes and summaries.
pub type Record = Vec<(String, Cell)>;

pub fn record_to_json(rec: &Record) -> Value {
    Value::Object(rec.iter().map(|(k, v)| (k.clone(), v.to_json())).collect())
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn rows_to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, v)| (k.clone(), v.to_json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }
}

/// `{"config": ..., "rows": [...], <extra>...}`
pub fn json_document(config: &Record, table: &Table, extra: Vec<(&str, Value)>) -> String {
    let mut doc = Map::new();
    doc.insert("config".into(), record_to_json(config));
    doc.insert("rows".into(), table.rows_to_json());
    for (k, v) in extra {
        doc.insert(k.into(), v);
    }
    let mut s = serde_json::to_string_pretty(&Value::Object(doc)).expect("json serialization");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits_round_trip() {
        for &x in &[0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, std::f64::consts::PI] {
            let s = fmt_num(x);
            let mantissa = s.split('e').next().unwrap().trim_start_matches('-');
            assert_eq!(mantissa.chars().filter(char::is_ascii_digit).count(), 17);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn json_numbers_keep_their_digits() {
        let v = Cell::Num(0.1).to_json();
        assert_eq!(v.to_string(), "1.0000000000000001e-1");
        assert_eq!(Cell::Num(f64::NAN).to_json(), Value::Null);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new(["x", "region"]);
        t.push(vec![Cell::Num(1.5), "left".into()]);
        assert_eq!(t.to_csv().unwrap(), "x,region\n1.5000000000000000e0,left\n");
    }
}
