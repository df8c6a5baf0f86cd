use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Twelve significant digits, identical on every platform.
pub fn fmt_num(v: f64) -> String {
    format!("{v:.11e}")
}

fn csv_text(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write<W: Write>(&self, mut out: W, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => {
                writeln!(out, "{}", self.header.join(","))?;
                for row in &self.rows {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Num(v) => fmt_num(*v),
                            Cell::Text(s) => csv_text(s),
                        })
                        .collect();
                    writeln!(out, "{}", cells.join(","))?;
                }
            }
            Format::Json => {
                for row in &self.rows {
                    let mut obj = Map::new();
                    for (key, cell) in self.header.iter().zip(row) {
                        let v = match cell {
                            // Round through the CSV text so both formats carry the same digits.
                            Cell::Num(v) => fmt_num(*v)
                                .parse::<f64>()
                                .ok()
                                .and_then(serde_json::Number::from_f64)
                                .map_or(Value::Null, Value::Number),
                            Cell::Text(s) => Value::String(s.clone()),
                        };
                        obj.insert(key.to_string(), v);
                    }
                    writeln!(out, "{}", Value::Object(obj))?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Table {
        let mut t = Table::new(vec!["kappa", "trial", "c"]);
        t.push(vec![1.0.into(), "a,b".into(), (1.0 / 3.0).into()]);
        t.push(vec![2.0.into(), "plain".into(), f64::NAN.into()]);
        t
    }

    #[test]
    fn csv_rows() {
        let mut buf = Vec::new();
        sample().write(&mut buf, Format::Csv).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "kappa,trial,c\n1.00000000000e0,\"a,b\",3.33333333333e-1\n2.00000000000e0,plain,NaN\n"
        );
    }

    #[test]
    fn json_rows() {
        let mut buf = Vec::new();
        sample().write(&mut buf, Format::Json).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        let v: Value = serde_json::from_str(lines[0]).unwrap();
        assert_eq!(v["c"].as_f64().unwrap(), 0.333333333333);
        assert_eq!(v["trial"], "a,b");
        let v: Value = serde_json::from_str(lines[1]).unwrap();
        assert!(v["c"].is_null());
    }
}
