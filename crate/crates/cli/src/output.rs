//! Result records and their text, CSV and JSON renderings.
//!
//! Every number leaves with the formula that produced it and the active
//! enhancement convention.

use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Quantity {
    pub name: String,
    pub value: f64,
    pub unit: &'static str,
    pub formula: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub name: String,
    pub formula: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub convention: &'static str,
    pub scenario: BTreeMap<String, String>,
    pub results: Vec<Quantity>,
    pub tables: Vec<Table>,
}

/// Rows printed to standard output before a table is only summarised.
const MAX_PRINTED_ROWS: usize = 64;

impl Report {
    pub fn new(
        command: &str,
        convention: &'static str,
        scenario: BTreeMap<String, String>,
    ) -> Self {
        Self {
            tool: "fastlight",
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            convention,
            scenario,
            results: Vec::new(),
            tables: Vec::new(),
        }
    }

    pub fn push(
        &mut self,
        name: impl Into<String>,
        value: f64,
        unit: &'static str,
        formula: &'static str,
    ) {
        self.results.push(Quantity {
            name: name.into(),
            value,
            unit,
            formula,
        });
    }

    pub fn table(
        &mut self,
        name: &str,
        formula: impl Into<String>,
        columns: &[&str],
        rows: Vec<Vec<f64>>,
    ) {
        self.tables.push(Table {
            name: name.to_string(),
            formula: formula.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows,
        });
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        self.results
            .iter()
            .find(|q| q.name == name)
            .map(|q| q.value)
    }

    fn tag(&self, formula: &str) -> String {
        format!("[{formula}; convention={}]", self.convention)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} {} [version {}]",
            self.tool, self.command, self.version
        );
        for (k, v) in &self.scenario {
            let _ = writeln!(out, "input {k} = {v} [scenario input]");
        }
        for q in &self.results {
            let unit = if q.unit.is_empty() {
                String::new()
            } else {
                format!(" {}", q.unit)
            };
            let _ = writeln!(
                out,
                "{} = {:.9e}{unit} {}",
                q.name,
                q.value,
                self.tag(q.formula)
            );
        }
        for t in &self.tables {
            let tag = self.tag(&t.formula);
            let _ = writeln!(
                out,
                "table {} ({} rows): {} {tag}",
                t.name,
                t.rows.len(),
                t.columns.join(", ")
            );
            if t.rows.len() <= MAX_PRINTED_ROWS {
                for row in &t.rows {
                    let cells: Vec<String> = row.iter().map(|x| format!("{x:.9e}")).collect();
                    let _ = writeln!(out, "  {} {tag}", cells.join("  "));
                }
            }
        }
        out
    }

    fn results_csv(&self) -> String {
        let mut out = String::from("name,value,unit,formula,convention\n");
        for q in &self.results {
            let _ = writeln!(
                out,
                "{},{:.16e},{},{},{}",
                q.name, q.value, q.unit, q.formula, self.convention
            );
        }
        out
    }

    fn table_csv(&self, t: &Table) -> String {
        let mut out = t.columns.join(",");
        out.push_str(",formula,convention\n");
        let formula = t.formula.replace(',', ";");
        for row in &t.rows {
            for x in row {
                let _ = write!(out, "{x:.16e},");
            }
            let _ = writeln!(out, "{formula},{}", self.convention);
        }
        out
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }

    /// Writes the report into `dir` and returns the paths written.
    pub fn write(&self, dir: &Path, format: Format) -> std::io::Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir)?;
        let stem = self.command.replace('-', "_");
        let mut written = Vec::new();
        match format {
            Format::Json => {
                let p = dir.join(format!("{stem}.json"));
                std::fs::write(&p, self.to_json())?;
                written.push(p);
            }
            Format::Csv => {
                let p = dir.join(format!("{stem}_results.csv"));
                std::fs::write(&p, self.results_csv())?;
                written.push(p);
                for t in &self.tables {
                    let p = dir.join(format!("{stem}_{}.csv", t.name));
                    std::fs::write(&p, self.table_csv(t))?;
                    written.push(p);
                }
            }
        }
        Ok(written)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut r = Report::new(
            "split",
            "derived",
            BTreeMap::from([("finesse".into(), "1e3".into())]),
        );
        r.push("splitting", 2.0, "rad/s", "splitting_no_dispersion");
        r.table(
            "sweep",
            "shift_cubic",
            &["a", "b"],
            vec![vec![1.0, 0.5], vec![2.0, 0.25]],
        );
        r
    }

    #[test]
    fn text_lines_are_tagged() {
        for line in sample().to_text().lines() {
            assert!(line.ends_with(']'), "{line}");
        }
    }

    #[test]
    fn csv_uses_seventeen_digits() {
        let r = sample();
        let csv = r.table_csv(&r.tables[0]);
        assert!(
            csv.contains("5.0000000000000000e-1,shift_cubic,derived"),
            "{csv}"
        );
        assert!(r
            .results_csv()
            .contains("splitting,2.0000000000000000e0,rad/s"));
    }

    #[test]
    fn json_round_trips() {
        let r = sample();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["results"][0]["value"], 2.0);
        assert_eq!(v["scenario"]["finesse"], "1e3");
    }
}
