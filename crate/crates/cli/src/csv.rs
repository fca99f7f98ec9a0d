//! Minimal CSV writer with a fixed numeric rendering.

use eventclock::Magnitude;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Number(f64),
    Integer(i64),
    Text(String),
    Empty,
}

impl Cell {
    /// Linear value of a magnitude, empty when it leaves the `f64` range.
    pub fn linear(m: Magnitude) -> Self {
        m.to_f64().map_or(Cell::Empty, Cell::Number)
    }

    /// `log10 |m|`, empty for zero.
    pub fn log10(m: Magnitude) -> Self {
        if m.is_zero() {
            Cell::Empty
        } else {
            Cell::Number(m.log10())
        }
    }

    pub fn optional(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Number)
    }

    fn render(&self, out: &mut String) {
        use std::fmt::Write;
        match self {
            // nine significant digits; non-finite values never reach the file
            Cell::Number(x) if x.is_finite() => write!(out, "{x:.8e}").expect("write to String"),
            Cell::Number(_) | Cell::Empty => {}
            Cell::Integer(n) => write!(out, "{n}").expect("write to String"),
            Cell::Text(s) => out.push_str(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Number(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Integer(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

/// Header plus rows of equal width.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new<S: Into<String>>(header: impl IntoIterator<Item = S>) -> Self {
        let header: Vec<String> = header.into_iter().map(Into::into).collect();
        for name in &header {
            assert!(!name.contains([',', '\n', '"']), "column name {name:?} needs quoting");
        }
        Self {
            header,
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &[String] {
        &self.header
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width differs from header");
        self.rows.push(row);
    }

    /// `,`-delimited, `\n`-terminated text with the header first.
    pub fn render(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                cell.render(&mut out);
            }
            out.push('\n');
        }
        out
    }
}
