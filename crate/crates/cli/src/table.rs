//! CSV tables with fixed schemas and round-trip-exact number formatting.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Timeseries,
    Equilibria,
    Bifurcation,
    Amplitude,
    Sweep,
    Portrait,
    Force,
    Friction,
    Potential,
    Codim2,
    Cycles,
}

impl Schema {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            Schema::Timeseries => &["T", "X", "V", "Q", "I", "mode", "U", "P"],
            Schema::Equilibria => &["X_star", "stability", "local_stiffness"],
            Schema::Bifurcation => &["set", "alpha", "beta"],
            Schema::Amplitude => &["Omega", "branch", "A_X", "source"],
            Schema::Sweep => &["case", "param", "value", "Q_rms", "I_rms", "U_rms", "P_avg"],
            Schema::Portrait => &["X", "V", "H"],
            Schema::Force => &["X", "F_s", "stiffness", "F_taylor"],
            Schema::Friction => &["V_r", "F_lo", "F_hi"],
            Schema::Potential => &["X", "PEN"],
            Schema::Codim2 => &["coordinate", "xi", "region"],
            Schema::Cycles => &[
                "cycle",
                "period",
                "amplitude",
                "mean_X",
                "X_min",
                "X_max",
                "members",
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // 17 significant digits
            Cell::Num(x) => write!(f, "{x:.16e}"),
            Cell::Int(n) => write!(f, "{n}"),
            Cell::Text(s) => f.write_str(s),
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

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub schema: Schema,
    rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(schema: Schema) -> Self {
        Self {
            schema,
            rows: Vec::new(),
        }
    }

    pub fn header(&self) -> &'static [&'static str] {
        self.schema.header()
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<(), CliError> {
        let want = self.header().len();
        if row.len() != want {
            return Err(CliError::RowWidth {
                got: row.len(),
                want,
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let io = "writing to memory cannot fail";
        w.write_record(self.header()).expect(io);
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string())).expect(io);
        }
        w.into_inner().expect(io)
    }
}

/// Writes the table as UTF-8 CSV with LF line endings.
pub fn write_csv(table: &CsvTable, path: &Path) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    };
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, table.to_bytes()).map_err(io)
}
