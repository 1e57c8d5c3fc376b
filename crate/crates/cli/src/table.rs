//! Column-ordered result tables written as CSV or JSON.

use std::io::Write;

use anyhow::{ensure, Result};
use serde::Serialize;
use serde_json::{Map, Number, Value};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_owned())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    /// 17 significant digits; non-finite numbers are left blank.
    fn to_csv_field(&self) -> String {
        match self {
            Cell::Num(v) if v.is_finite() => format!("{v:.16e}"),
            Cell::Num(_) | Cell::Empty => String::new(),
            Cell::Int(v) => v.to_string(),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn to_json(&self) -> Value {
        match self {
            Cell::Num(v) => Number::from_f64(*v).map_or(Value::Null, Value::Number),
            Cell::Int(v) => Value::from(*v),
            Cell::Bool(v) => Value::Bool(*v),
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Empty => Value::Null,
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        ensure!(
            row.len() == self.header.len(),
            "row has {} cells, header has {}",
            row.len(),
            self.header.len()
        );
        self.rows.push(row);
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_csv_field))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"config": …, "rows": [{column: value, …}, …]}`.
    pub fn write_json<W: Write, C: Serialize>(&self, config: &C, mut out: W) -> Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Value> = self.header.iter().cloned().zip(row.iter().map(Cell::to_json)).collect();
                Value::Object(obj)
            })
            .collect();
        let mut doc = Map::new();
        doc.insert("config".into(), serde_json::to_value(config)?);
        doc.insert("rows".into(), Value::Array(rows));
        serde_json::to_writer_pretty(&mut out, &Value::Object(doc))?;
        out.write_all(b"\n")?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = Table::new(["x", "y", "tag"]);
        t.push(vec![0.1.into(), Cell::Empty, "a".into()]).unwrap();
        t.push(vec![f64::NAN.into(), 3usize.into(), true.into()]).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "x,y,tag\n1.0000000000000001e-1,,a\n,3,true\n"
        );
        assert!(t.push(vec![Cell::Empty]).is_err());
    }

    #[test]
    fn json_layout() {
        let mut t = Table::new(["x"]);
        t.push(vec![f64::NAN.into()]).unwrap();
        t.push(vec![0.5.into()]).unwrap();
        let mut buf = Vec::new();
        t.write_json(&serde_json::json!({"k": 1}), &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["config"]["k"], 1);
        assert_eq!(v["rows"][0]["x"], Value::Null);
        assert_eq!(v["rows"][1]["x"], 0.5);
    }
}
