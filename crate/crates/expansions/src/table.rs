//! Row-oriented output as CSV, JSON or an SVG table.

use std::fmt::Write as _;

use serde_json::{Map, Value};

/// Decimal places used for every floating-point cell in CSV and SVG output.
pub const FLOAT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(String),
    Float(f64),
    Bool(bool),
}

impl Cell {
    fn plain(&self) -> String {
        match self {
            Cell::Text(s) | Cell::Int(s) => s.clone(),
            Cell::Float(v) if v.is_finite() => format!("{v:.FLOAT_DIGITS$}"),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            // Big integers stay exact as strings once they leave the i64 range.
            Cell::Int(s) => s.parse::<i64>().map(Value::from).unwrap_or_else(|_| Value::String(s.clone())),
            Cell::Float(v) => serde_json::Number::from_f64(*v).map(Value::Number).unwrap_or(Value::Null),
            Cell::Bool(b) => Value::Bool(*b),
        }
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

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

macro_rules! int_cell {
    ($($t:ty),*) => {$(
        impl From<$t> for Cell {
            fn from(v: $t) -> Self {
                Cell::Int(v.to_string())
            }
        }
    )*};
}
int_cell!(u16, u32, u64, usize, i32, i64, num_bigint::BigInt, num_bigint::BigUint);

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<I: IntoIterator<Item = S>, S: Into<String>>(headers: I) -> Self {
        Self { headers: headers.into_iter().map(Into::into).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.csv(),
            Format::Json => self.json(),
            Format::Svg => self.svg(),
        }
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        let line = |cells: Vec<String>| cells.into_iter().map(|c| csv_field(&c)).collect::<Vec<_>>().join(",");
        out.push_str(&line(self.headers.clone()));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r.iter().map(Cell::plain).collect()));
            out.push('\n');
        }
        out
    }

    pub fn json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                let m: Map<String, Value> = self.headers.iter().cloned().zip(r.iter().map(Cell::json)).collect();
                Value::Object(m)
            })
            .collect();
        let mut s = serde_json::to_string_pretty(&Value::Array(rows)).expect("serializable");
        s.push('\n');
        s
    }

    pub fn svg(&self) -> String {
        const CHAR_W: usize = 8;
        const ROW_H: usize = 20;
        let cells: Vec<Vec<String>> = std::iter::once(self.headers.clone())
            .chain(self.rows.iter().map(|r| r.iter().map(Cell::plain).collect()))
            .collect();
        let widths: Vec<usize> = (0..self.headers.len())
            .map(|j| cells.iter().map(|r| r[j].chars().count()).max().unwrap_or(0) * CHAR_W + 16)
            .collect();
        let total_w: usize = widths.iter().sum();
        let total_h = cells.len() * ROW_H + 8;
        let mut out = String::new();
        let _ = writeln!(
            out,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{total_w}" height="{total_h}" font-family="monospace" font-size="13">"#
        );
        for (i, row) in cells.iter().enumerate() {
            let y = (i + 1) * ROW_H;
            let mut x = 8;
            let weight = if i == 0 { r#" font-weight="bold""# } else { "" };
            for (j, c) in row.iter().enumerate() {
                let _ = writeln!(out, r#"  <text x="{x}" y="{y}"{weight}>{}</text>"#, xml_escape(c));
                x += widths[j];
            }
            if i == 0 {
                let _ =
                    writeln!(out, r#"  <line x1="0" y1="{}" x2="{total_w}" y2="{}" stroke="black"/>"#, y + 5, y + 5);
            }
        }
        out.push_str("</svg>\n");
        out
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_all_formats() {
        let mut t = Table::new(["m", "p", "ratio"]);
        t.push(vec![1u32.into(), 2u32.into(), 2.0f64.into()]);
        t.push(vec![2u32.into(), "a,b".into(), 0.5f64.into()]);
        assert_eq!(t.csv(), "m,p,ratio\n1,2,2.000000000000\n2,\"a,b\",0.500000000000\n");
        let v: Value = serde_json::from_str(&t.json()).unwrap();
        assert_eq!(v[0]["m"], 1);
        assert_eq!(v[1]["p"], "a,b");
        assert!(t.svg().starts_with("<svg"));
    }

    #[test]
    fn huge_integers_stay_exact() {
        let big: num_bigint::BigUint = num_bigint::BigUint::from(10u32).pow(30);
        assert_eq!(Cell::from(big).json(), Value::String(format!("1{}", "0".repeat(30))));
    }
}
