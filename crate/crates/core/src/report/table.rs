use crate::error::{Error, Result};
use crate::harness::format_float;

/// A table cell; numbers are formatted by the writer.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i64),
    Float(f64),
    Missing,
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

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Missing, Cell::Float)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Table { name: name.to_string(), headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// RFC 4180 CSV with full-precision floats.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(Vec::new());
        let err = |e: csv::Error| Error::invalid(format!("csv encoding failed: {e}"));
        w.write_record(&self.headers).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|c| match c {
                Cell::Text(s) => s.clone(),
                Cell::Int(i) => i.to_string(),
                Cell::Float(v) => format_float(*v),
                Cell::Missing => String::new(),
            }))
            .map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::invalid(format!("csv encoding failed: {e}")))?;
        String::from_utf8(bytes).map_err(|e| Error::invalid(e.to_string()))
    }

    /// GitHub-style Markdown table with floats to 6 significant digits.
    pub fn to_markdown(&self) -> String {
        let escape = |s: &str| s.replace('|', "\\|");
        let mut out = String::new();
        out.push_str(&format!("| {} |\n", self.headers.iter().map(|h| escape(h)).collect::<Vec<_>>().join(" | ")));
        out.push_str(&format!("|{}\n", self.headers.iter().map(|_| "---|").collect::<String>()));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Text(s) => escape(s),
                    Cell::Int(i) => i.to_string(),
                    Cell::Float(v) => readable(*v),
                    Cell::Missing => "-".to_string(),
                })
                .collect();
            out.push_str(&format!("| {} |\n", cells.join(" | ")));
        }
        out
    }
}

/// Fixed notation with up to six decimals for moderate magnitudes,
/// scientific otherwise.
fn readable(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 || (1e-3..1e6).contains(&a) {
        let s = format!("{v:.6}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.5e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_per_rfc_4180() {
        let mut t = Table::new("t", &["name", "value"]);
        t.push(vec!["a,b".into(), 1.5.into()]);
        t.push(vec!["say \"hi\"".into(), Cell::Missing]);
        let csv = t.to_csv().unwrap();
        assert_eq!(csv, "name,value\r\n\"a,b\",1.5000000000000000e0\r\n\"say \"\"hi\"\"\",\r\n");
    }

    #[test]
    fn markdown_escapes_pipes() {
        let mut t = Table::new("t", &["a"]);
        t.push(vec!["x|y".into()]);
        assert_eq!(t.to_markdown(), "| a |\n|---|\n| x\\|y |\n");
    }

    #[test]
    fn markdown_numbers_are_readable() {
        assert_eq!(readable(14.0), "14");
        assert_eq!(readable(3.5), "3.5");
        assert_eq!(readable(0.0), "0");
        assert_eq!(readable(2.40358e7), "2.40358e7");
        assert_eq!(readable(1.5e-9), "1.50000e-9");
    }
}
