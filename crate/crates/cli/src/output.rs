use std::env;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde_json::{json, Map, Value};

use crate::config::ConfigFile;

/// Output directory override for relative `--out` / `--summary` paths.
pub const OUT_DIR_VAR: &str = "MABLAB_OUT_DIR";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            _ => Err(format!("unknown format `{s}` (csv or json)")),
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Flat key = value file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Data file (default: stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON summary file (default: next to --out, else stderr)
    #[arg(long)]
    pub summary: Option<PathBuf>,
    /// Exit with status 3 when the run leaves its physical regime
    #[arg(long)]
    pub strict: bool,
}

pub struct Run {
    pub format: Format,
    pub out: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub strict: bool,
    started: Instant,
}

impl OutputArgs {
    /// Loads the config file and pulls the output keys out of it.
    pub fn resolve(&self) -> Result<(Run, ConfigFile)> {
        let mut cfg = ConfigFile::load(self.config.as_deref())?;
        let format = cfg.take("format", self.format)?.unwrap_or(Format::Csv);
        let out = cfg.take("out", self.out.clone())?;
        let summary = cfg.take("summary", self.summary.clone())?;
        let strict = self.strict || cfg.take::<bool>("strict", None)?.unwrap_or(false);
        let run = Run {
            format,
            out: out.map(|p| in_out_dir(&p)),
            summary: summary.map(|p| in_out_dir(&p)),
            strict,
            started: Instant::now(),
        };
        Ok((run, cfg))
    }
}

fn in_out_dir(path: &Path) -> PathBuf {
    match env::var_os(OUT_DIR_VAR) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "NaN".into(),
            Cell::Num(x) => format!("{x:.16e}"),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => json!(x),
            Cell::Int(i) => json!(i),
            Cell::Text(s) => json!(s),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<&'static str>) -> Self {
        Table {
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)
                    .with_context(|| format!("creating {}", dir.display()))?;
            }
            Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)
        }
        None => Box::new(io::stdout().lock()),
    })
}

impl Run {
    pub fn write_table(&self, table: &Table) -> Result<()> {
        let mut w = sink(self.out.as_deref())?;
        match self.format {
            Format::Csv => {
                let mut csv = csv::Writer::from_writer(&mut w);
                csv.write_record(&table.columns)?;
                for row in &table.rows {
                    csv.write_record(row.iter().map(Cell::csv))?;
                }
                csv.flush()?;
            }
            Format::Json => {
                let rows: Vec<Value> = table
                    .rows
                    .iter()
                    .map(|row| {
                        let obj: Map<String, Value> = table
                            .columns
                            .iter()
                            .zip(row)
                            .map(|(c, v)| (c.to_string(), v.json()))
                            .collect();
                        Value::Object(obj)
                    })
                    .collect();
                serde_json::to_writer_pretty(&mut w, &rows)?;
                writeln!(w)?;
            }
        }
        Ok(())
    }

    /// Single JSON document instead of a table (holonomy in JSON form).
    pub fn write_value(&self, value: &Value) -> Result<()> {
        let mut w = sink(self.out.as_deref())?;
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        Ok(())
    }

    /// Adds version, wall time and the given parameters/margins, then
    /// writes the summary to its destination.
    pub fn write_summary(
        &self,
        command: &str,
        parameters: Value,
        margins: Value,
        results: Value,
    ) -> Result<()> {
        let summary = json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "parameters": parameters,
            "margins": margins,
            "results": results,
            "wall_time_s": self.started.elapsed().as_secs_f64(),
        });
        let target = self
            .summary
            .clone()
            .or_else(|| self.out.as_ref().map(|p| p.with_extension("summary.json")));
        match target {
            Some(p) => {
                let mut w = sink(Some(&p))?;
                serde_json::to_writer_pretty(&mut w, &summary)?;
                writeln!(w)?;
            }
            None => {
                let mut e = io::stderr().lock();
                serde_json::to_writer_pretty(&mut e, &summary)?;
                writeln!(e)?;
            }
        }
        Ok(())
    }
}

/// Rejects a regime violation under `--strict`, exit status 3.
#[derive(Debug)]
pub struct RegimeViolation(pub String);

impl std::fmt::Display for RegimeViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "regime violation: {}", self.0)
    }
}

impl std::error::Error for RegimeViolation {}

pub fn require_positive(name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 {
        bail!("`{name}` must be a finite positive number, got {v}");
    }
    Ok(v)
}
