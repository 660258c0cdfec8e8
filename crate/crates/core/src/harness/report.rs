//! Per-case rows with their pass/fail check, a summary, and `#` provenance
//! lines ahead of the CSV body.

use std::fmt;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};

use super::config::Command;
use crate::error::{Result, WaveError};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    AtMost,
    Below,
    Above,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::AtMost => "<=",
            Relation::Below => "<",
            Relation::Above => ">",
        }
    }

    pub fn holds(self, value: f64, bound: f64) -> bool {
        match self {
            Relation::AtMost => value <= bound,
            Relation::Below => value < bound,
            Relation::Above => value > bound,
        }
    }
}

/// The invariant a row is judged by: `value relation bound`. NaN fails.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
}

impl Check {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            bound,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Check {
            relation: Relation::Below,
            ..Check::at_most(name, value, bound)
        }
    }

    pub fn passed(&self) -> bool {
        self.relation.holds(self.value, self.bound)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub values: Vec<String>,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub version: String,
    pub command: Command,
    pub config_sha256: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub cases: usize,
    pub passed: usize,
    pub failed: usize,
    /// Largest check value among `<=`/`<` rows.
    pub max_residual: f64,
}

/// Columns that follow the command-specific ones in every report.
pub const CHECK_COLUMNS: [&str; 6] = ["check", "measured", "relation", "bound", "status", "violated"];

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub provenance: Provenance,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
    /// Free-form `#` lines after the provenance (fitted orders and similar).
    pub notes: Vec<String>,
}

/// Shortest round-trip representation.
pub fn num(v: f64) -> String {
    format!("{v:e}")
}

impl Report {
    pub fn new(provenance: Provenance, columns: &[&str]) -> Self {
        Report {
            provenance,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn push(&mut self, values: Vec<String>, check: Check) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.rows.push(Row { values, check });
    }

    pub fn all_passed(&self) -> bool {
        self.rows.iter().all(|r| r.check.passed())
    }

    pub fn summary(&self) -> Summary {
        let passed = self.rows.iter().filter(|r| r.check.passed()).count();
        let max_residual = self
            .rows
            .iter()
            .filter(|r| r.check.relation != Relation::Above)
            .map(|r| r.check.value)
            .fold(0.0, |a: f64, v| if v.is_nan() { f64::NAN } else { a.max(v) });
        Summary {
            cases: self.rows.len(),
            passed,
            failed: self.rows.len() - passed,
            max_residual,
        }
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        let p = &self.provenance;
        writeln!(w, "# wavecauchy {}", p.version)?;
        writeln!(w, "# command: {}", p.command)?;
        writeln!(w, "# config_sha256: {}", p.config_sha256)?;
        writeln!(w, "# seed: {}", p.seed)?;
        for note in &self.notes {
            writeln!(w, "# {note}")?;
        }
        let s = self.summary();
        writeln!(
            w,
            "# summary: cases={} passed={} failed={} max_residual={}",
            s.cases,
            s.passed,
            s.failed,
            num(s.max_residual)
        )?;
        let mut csv = csv::Writer::from_writer(w);
        let csv_err = |e: csv::Error| WaveError::Io(e.to_string());
        csv.write_record(self.columns.iter().map(String::as_str).chain(CHECK_COLUMNS))
            .map_err(csv_err)?;
        for row in &self.rows {
            let c = &row.check;
            let passed = c.passed();
            let tail = [
                c.name.clone(),
                num(c.value),
                c.relation.symbol().to_string(),
                num(c.bound),
                if passed { "pass" } else { "fail" }.to_string(),
                if passed { String::new() } else { c.name.clone() },
            ];
            csv.write_record(row.values.iter().cloned().chain(tail)).map_err(csv_err)?;
        }
        csv.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory cannot fail");
        String::from_utf8(buf).expect("report is UTF-8")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| WaveError::Io(format!("{}: {e}", path.display())))?;
        self.write_csv(std::io::BufWriter::new(file))
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} cases, {} passed, {} failed, max residual {:.3e}",
            self.cases, self.passed, self.failed, self.max_residual
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report() -> Report {
        let mut r = Report::new(
            Provenance {
                version: "0.1.0".into(),
                command: Command::Constants,
                config_sha256: sha256_hex(b""),
                seed: 7,
            },
            &["n", "value"],
        );
        r.push(vec!["3".into(), num(1.0)], Check::at_most("relative_error", 1e-16, 1e-10));
        r.push(vec!["5".into(), num(0.5)], Check::at_most("relative_error", 1e-3, 1e-10));
        r
    }

    #[test]
    fn status_follows_check() {
        let r = report();
        assert!(!r.all_passed());
        let s = r.summary();
        assert_eq!((s.cases, s.passed, s.failed), (2, 1, 1));
        assert_eq!(s.max_residual, 1e-3);
        assert!(!Check::at_most("x", f64::NAN, 1.0).passed());
        assert!(!Check::below("x", 1.0, 1.0).passed());
    }

    #[test]
    fn csv_layout() {
        let text = report().to_csv_string();
        assert!(text.contains("# config_sha256: e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"));
        let body: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
        assert_eq!(body[0], "n,value,check,measured,relation,bound,status,violated");
        assert_eq!(body[1], "3,1e0,relative_error,1e-16,<=,1e-10,pass,");
        assert!(body[2].ends_with("fail,relative_error"));
    }
}
