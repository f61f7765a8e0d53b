//! Artifact assembly: CSV tables, JSON documents and the run manifest.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use diracspec_core::channels::{Model, Potential};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    F(f64),
    I(i64),
    S(String),
}

impl Cell {
    /// Scientific notation with 17 significant digits, so values round-trip.
    fn render(&self) -> String {
        match self {
            Cell::F(x) => format!("{x:.16e}"),
            Cell::I(i) => i.to_string(),
            Cell::S(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Cell {
        Cell::F(x)
    }
}

impl From<i32> for Cell {
    fn from(i: i32) -> Cell {
        Cell::I(i as i64)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Cell {
        Cell::I(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Cell {
        Cell::S(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Cell {
        Cell::S(s)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Cell {
        Cell::S(b.to_string())
    }
}

/// Builds a row from heterogeneous values.
#[macro_export]
macro_rules! row {
    ($($x:expr),* $(,)?) => { vec![$($crate::output::Cell::from($x)),*] };
}

#[derive(Debug, Clone)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, header: &[&str]) -> Table {
        Table {
            name: name.to_string(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.header.len(), "row width for {}", self.name);
        self.rows.push(row);
    }
}

/// Model columns prepended to the rows of model-based tables.
pub const MODEL_HEADER: [&str; 4] = ["n", "potential", "mass", "coupling"];

pub fn model_cells(model: &Model) -> Vec<Cell> {
    let (name, coupling) = match model.potential {
        Potential::Free => ("free", 0.0),
        Potential::AharonovBohm { alpha } => ("aharonov-bohm", alpha),
        Potential::Coulomb { nu } => ("coulomb", nu),
    };
    row![model.n, name, model.mass, coupling]
}

/// A table whose rows start with the model columns.
pub fn model_table(name: &str, header: &[&str]) -> Table {
    let mut t = Table::new(name, &MODEL_HEADER);
    t.header.extend(header.iter().map(|s| s.to_string()));
    t
}

/// A pass/fail assertion. Soft checks are reported but never change the exit status.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub hard: bool,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    pub fn hard(name: impl Into<String>, value: f64, threshold: f64, passed: bool, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            hard: true,
            passed,
            value,
            threshold,
            detail: detail.into(),
        }
    }

    /// value < threshold, NaN failing.
    pub fn below(name: impl Into<String>, value: f64, threshold: f64, detail: impl Into<String>) -> Check {
        Check::hard(name, value, threshold, value < threshold, detail)
    }

    pub fn soft(mut self) -> Check {
        self.hard = false;
        self
    }
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub documents: Vec<(String, serde_json::Value)>,
    pub checks: Vec<Check>,
}

impl Outcome {
    pub fn hard_failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.hard && !c.passed)
    }
}

#[derive(Serialize)]
struct Build {
    version: &'static str,
    profile: &'static str,
    target_arch: &'static str,
    target_os: &'static str,
}

#[derive(Serialize)]
struct Artifact {
    file: String,
    sha256: String,
}

#[derive(Serialize)]
struct Summary {
    status: &'static str,
    hard_checks: usize,
    hard_failed: usize,
    soft_checks: usize,
    soft_failed: usize,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    build: Build,
    subcommand: &'a str,
    seed: u64,
    config: &'a str,
    artifacts: Vec<Artifact>,
    summary: Summary,
    checks: &'a [Check],
    failures: Vec<&'a Check>,
    error: Option<&'a str>,
}

pub struct RunInfo<'a> {
    pub subcommand: &'a str,
    pub seed: u64,
    pub config: &'a str,
}

fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

fn csv_bytes(table: &Table) -> io::Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&table.header)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render))?;
    }
    w.into_inner().map_err(|e| e.into_error())
}

/// Writes `<dir>/<subcommand>/` with every table, document and the manifest;
/// returns the manifest path. `error` records a numerical failure that
/// stopped the run before all artifacts were produced.
pub fn write_run(dir: &Path, info: &RunInfo, outcome: &Outcome, error: Option<&str>) -> io::Result<PathBuf> {
    let dir = dir.join(info.subcommand);
    fs::create_dir_all(&dir)?;
    let mut artifacts = Vec::new();
    let mut emit = |file: String, bytes: Vec<u8>| -> io::Result<()> {
        fs::write(dir.join(&file), &bytes)?;
        artifacts.push(Artifact {
            sha256: sha256_hex(&bytes),
            file,
        });
        Ok(())
    };
    for t in &outcome.tables {
        emit(format!("{}.csv", t.name), csv_bytes(t)?)?;
    }
    for (name, doc) in &outcome.documents {
        let mut bytes = serde_json::to_vec_pretty(doc)?;
        bytes.push(b'\n');
        emit(format!("{name}.json"), bytes)?;
    }
    let hard = outcome.checks.iter().filter(|c| c.hard).count();
    let soft = outcome.checks.len() - hard;
    let hard_failed = outcome.hard_failures().count();
    let soft_failed = outcome.checks.iter().filter(|c| !c.hard && !c.passed).count();
    let manifest = Manifest {
        tool: "diracspec",
        build: Build {
            version: env!("CARGO_PKG_VERSION"),
            profile: if cfg!(debug_assertions) { "debug" } else { "release" },
            target_arch: std::env::consts::ARCH,
            target_os: std::env::consts::OS,
        },
        subcommand: info.subcommand,
        seed: info.seed,
        config: info.config,
        artifacts,
        summary: Summary {
            status: match (error, hard_failed) {
                (Some(_), _) => "error",
                (None, 0) => "pass",
                _ => "fail",
            },
            hard_checks: hard,
            hard_failed,
            soft_checks: soft,
            soft_failed,
        },
        checks: &outcome.checks,
        failures: outcome.hard_failures().collect(),
        error,
    };
    let path = dir.join("manifest.json");
    let mut bytes = serde_json::to_vec_pretty(&manifest)?;
    bytes.push(b'\n');
    fs::write(&path, bytes)?;
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_render_with_seventeen_digits() {
        assert_eq!(Cell::F(0.1).render(), "1.0000000000000001e-1");
        assert_eq!(Cell::F(f64::INFINITY).render(), "inf");
        assert_eq!(Cell::F(-2.0).render(), "-2.0000000000000000e0");
        let x: f64 = Cell::F(std::f64::consts::PI).render().parse().unwrap();
        assert_eq!(x, std::f64::consts::PI);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let mut t = Table::new("t", &["a", "b"]);
        t.push(row![1i32, 0.5]);
        let s = String::from_utf8(csv_bytes(&t).unwrap()).unwrap();
        assert_eq!(s, "a,b\n1,5.0000000000000000e-1\n");
    }
}
