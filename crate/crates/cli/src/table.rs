//! Tabular output shared by every subcommand.
//!
//! Floats are written with 17 significant digits in exponent form so that a
//! dataset re-parses to the exact same `f64` and identical requests produce
//! byte-identical files.

use std::io::{self, Write};

use clap::ValueEnum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Bool(bool),
    Text(String),
    Missing,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_owned())
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(x: Option<T>) -> Self {
        x.map_or(Cell::Missing, Into::into)
    }
}

pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Missing => String::new(),
        }
    }

    fn json_value(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format_float(*x),
            Cell::Num(_) | Cell::Missing => "null".into(),
            Cell::Int(n) => n.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => serde_json::to_string(s).expect("strings always serialize"),
        }
    }
}

/// Column names plus rows of cells, in emission order.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Self {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write(&self, format: Format, out: impl Write) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Jsonl => self.write_jsonl(out),
        }
    }

    fn write_csv(&self, out: impl Write) -> io::Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::CRLF)
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv_field))?;
        }
        w.flush()
    }

    fn write_jsonl(&self, mut out: impl Write) -> io::Result<()> {
        for row in &self.rows {
            let fields: Vec<String> = self
                .columns
                .iter()
                .zip(row)
                .map(|(name, cell)| {
                    let key = serde_json::to_string(name).expect("strings always serialize");
                    format!("{key}:{}", cell.json_value())
                })
                .collect();
            writeln!(out, "{{{}}}", fields.join(","))?;
        }
        out.flush()
    }

    pub fn to_string(&self, format: Format) -> String {
        let mut buf = Vec::new();
        self.write(format, &mut buf)
            .expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("table output is UTF-8")
    }
}
