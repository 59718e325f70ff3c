//! Result tables and their CSV encoding.

use crate::Result;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
}

impl Cell {
    /// 17 significant digits for floats.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) if x.is_finite() => format!("{x:.16e}"),
            Cell::Num(x) => format!("{x}"),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match *self {
            Cell::Num(x) => Some(x),
            Cell::Int(n) => Some(n as f64),
            _ => None,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<u32> for Cell {
    fn from(n: u32) -> Self {
        Cell::Int(n as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width does not match the header");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Numeric values of `name`, restricted to rows where `filter` holds.
    pub fn values(&self, name: &str, filter: impl Fn(&[Cell]) -> bool) -> Vec<f64> {
        let Some(j) = self.column(name) else { return Vec::new() };
        self.rows.iter().filter(|r| filter(r)).filter_map(|r| r[j].as_f64()).collect()
    }
}

/// Provenance stamped on every output file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub experiment: String,
}

impl Provenance {
    pub fn header_line(&self) -> String {
        format!(
            "# knlab {} experiment={} seed={} config_hash={}",
            self.version, self.experiment, self.seed, self.config_hash
        )
    }
}

/// CSV bytes: one `#` provenance line, the header row, then the rows, each
/// with trailing `version` and `config_hash` columns.
pub fn to_csv(table: &Table, provenance: &Provenance) -> Result<Vec<u8>> {
    let mut out = provenance.header_line().into_bytes();
    out.push(b'\n');
    let mut w = csv::Writer::from_writer(out);
    let mut header = table.columns.clone();
    header.extend(["version".to_owned(), "config_hash".to_owned()]);
    w.write_record(&header)?;
    for row in &table.rows {
        let mut rec: Vec<String> = row.iter().map(Cell::render).collect();
        rec.push(provenance.version.clone());
        rec.push(provenance.config_hash.clone());
        w.write_record(&rec)?;
    }
    w.into_inner().map_err(|e| crate::CliError::Io(e.into_error()))
}
