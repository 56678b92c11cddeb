//! Deterministic CSV and JSON rendering.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use num_rational::BigRational;
use serde::Serialize;

use crate::bounds::RationalInterval;
use crate::exact::{self, Exact, Rounding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// One rendered cell. Exact cells get a `_dec` companion column on request.
#[derive(Debug, Clone)]
pub enum Cell {
    Text(String),
    Exact(BigRational),
    Blank,
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Text(v.to_string())
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

/// Column name plus whether it holds exact rationals.
pub type Column = (&'static str, bool);

/// A table with a fixed header.
#[derive(Debug, Clone)]
pub struct Table {
    columns: Vec<Column>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[Column]) -> Self {
        Table {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width must match the header");
        self.rows.push(row);
    }

    /// CSV text; with `decimals`, every exact column gets a trailing
    /// `<name>_dec` column holding 12 significant digits.
    pub fn to_csv(&self, decimals: bool) -> String {
        let exact_cols: Vec<usize> = if decimals {
            (0..self.columns.len()).filter(|&i| self.columns[i].1).collect()
        } else {
            Vec::new()
        };
        let mut header: Vec<String> = self.columns.iter().map(|c| c.0.to_string()).collect();
        header.extend(exact_cols.iter().map(|&i| format!("{}_dec", self.columns[i].0)));
        let mut out = line(&header);
        for row in &self.rows {
            let mut cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(t) => t.clone(),
                    Cell::Exact(r) => rat(r),
                    Cell::Blank => String::new(),
                })
                .collect();
            cells.extend(exact_cols.iter().map(|&i| match &row[i] {
                Cell::Exact(r) => dec(r),
                _ => String::new(),
            }));
            out.push_str(&line(&cells));
        }
        out
    }
}

fn line(cells: &[String]) -> String {
    cells.iter().map(|c| escape(c)).collect::<Vec<_>>().join(",") + "\n"
}

fn escape(cell: &str) -> String {
    if cell.contains([',', '"', '\n']) {
        format!("\"{}\"", cell.replace('"', "\"\""))
    } else {
        cell.to_string()
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

pub fn rat(r: &BigRational) -> String {
    exact::format_rational(r)
}

pub fn dec(r: &BigRational) -> String {
    Exact(r.clone()).decimal()
}

/// Endpoints of an enclosure as 12-digit decimals rounded outward.
pub fn interval_cells(iv: &RationalInterval) -> [String; 2] {
    [
        exact::decimal(iv.lo(), 12, Rounding::Down),
        exact::decimal(iv.hi(), 12, Rounding::Up),
    ]
}

/// Writes to `path`, or to stdout when absent.
pub fn emit(text: &str, path: Option<&Path>) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}
