//! The report record and its text, JSON and CSV renderings.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{Map, Value};

pub const SCHEMA: &str = "rbloch-report/1";

/// Everything a command produced. Only `runtime` varies between runs of the
/// same command and seed.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub results: Vec<Section>,
    pub checks: Vec<Check>,
    pub tables: Vec<Table>,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime: Option<Runtime>,
}

/// A named group of result fields, kept in insertion order.
#[derive(Clone, Debug, Serialize)]
pub struct Section {
    pub name: String,
    #[serde(flatten)]
    pub fields: Map<String, Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Runtime {
    pub total_ms: f64,
    pub steps: Vec<Step>,
    pub cache: CacheStats,
}

#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub name: String,
    pub ms: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct CacheStats {
    pub enabled: bool,
    pub hits: u64,
    pub misses: u64,
    pub writes: u64,
}

/// Integers that fit in `i64` become JSON numbers, larger ones strings.
pub fn int(n: &BigInt) -> Value {
    n.to_i64()
        .map_or_else(|| Value::String(n.to_string()), Value::from)
}

pub fn ints(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(int).collect())
}

pub fn ms(d: std::time::Duration) -> f64 {
    (d.as_secs_f64() * 1e6).round() / 1e3
}

impl Section {
    pub fn new(name: impl Into<String>) -> Self {
        Section {
            name: name.into(),
            fields: Map::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_string(), value.into());
        self
    }
}

impl Check {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            passed,
            detail: detail.into(),
            witness: None,
        }
    }

    pub fn witness(mut self, w: impl Into<Value>) -> Self {
        if !self.passed {
            self.witness = Some(w.into());
        }
        self
    }
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }
}

impl Report {
    pub fn new(command: impl Into<String>, seed: Option<u64>) -> Self {
        Report {
            schema: SCHEMA,
            command: command.into(),
            seed,
            results: Vec::new(),
            checks: Vec::new(),
            tables: Vec::new(),
            passed: true,
            runtime: None,
        }
    }

    /// Recomputes `passed` as the conjunction of all checks.
    pub fn seal(mut self) -> Self {
        self.passed = self.checks.iter().all(|c| c.passed);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report values are plain JSON") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "command: {}", self.command);
        if let Some(seed) = self.seed {
            let _ = writeln!(out, "seed: {seed}");
        }
        for s in &self.results {
            let _ = writeln!(out, "\n== {}", s.name);
            for (k, v) in &s.fields {
                let _ = writeln!(out, "  {k}: {}", plain(v));
            }
        }
        for t in &self.tables {
            let _ = writeln!(out, "\n== table {}", t.name);
            let cells: Vec<Vec<String>> = std::iter::once(t.columns.clone())
                .chain(t.rows.iter().map(|r| r.iter().map(plain).collect()))
                .collect();
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|j| {
                    cells
                        .iter()
                        .map(|r| r[j].chars().count())
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for row in &cells {
                let line: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, w)| format!("{c:<w$}"))
                    .collect();
                let _ = writeln!(out, "  {}", line.join("  ").trim_end());
            }
        }
        if !self.checks.is_empty() {
            let _ = writeln!(out, "\n== checks");
            for c in &self.checks {
                let _ = writeln!(
                    out,
                    "  {} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
                if let Some(w) = &c.witness {
                    let _ = writeln!(out, "       witness: {}", plain(w));
                }
            }
        }
        let passed = self.checks.iter().filter(|c| c.passed).count();
        let _ = writeln!(
            out,
            "\nresult: {} ({passed}/{} checks)",
            if self.passed { "PASS" } else { "FAIL" },
            self.checks.len()
        );
        if let Some(r) = &self.runtime {
            let _ = writeln!(out, "time: {} ms", r.total_ms);
        }
        out
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json())
            .with_context(|| format!("cannot write JSON report to {}", path.display()))
    }

    /// One CSV file per table: `path` itself when there is a single table,
    /// otherwise `<stem>-<table>.<ext>` beside it. Returns the files written.
    pub fn write_csv(&self, path: &Path) -> Result<Vec<PathBuf>> {
        let targets: Vec<(PathBuf, &Table)> = if self.tables.len() == 1 {
            vec![(path.to_path_buf(), &self.tables[0])]
        } else {
            let stem = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let ext = path
                .extension()
                .map(|e| e.to_string_lossy().into_owned())
                .unwrap_or_else(|| "csv".into());
            self.tables
                .iter()
                .map(|t| (path.with_file_name(format!("{stem}-{}.{ext}", t.name)), t))
                .collect()
        };
        for (p, t) in &targets {
            let mut w = csv::Writer::from_path(p)
                .with_context(|| format!("cannot write CSV to {}", p.display()))?;
            w.write_record(&t.columns)?;
            for row in &t.rows {
                w.write_record(row.iter().map(plain))?;
            }
            w.flush()
                .with_context(|| format!("cannot write CSV to {}", p.display()))?;
        }
        Ok(targets.into_iter().map(|(p, _)| p).collect())
    }
}

/// Strings unquoted, everything else as compact JSON.
fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}
