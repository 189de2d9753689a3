//! Batch computation of ω(D) and ρ(D) over knot tables.
//!
//! Input tables are CSV files with columns `name`, `pd_notation` and an
//! optional `bridge_number`. Tabulated bridge numbers are reference values
//! only: ρ(D) ≥ β and ω(D) ≥ β must hold for every diagram, and a violation
//! is reported, never corrected.

use std::collections::HashSet;
use std::fs::{File, OpenOptions};
use std::io;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::{invariants_within, SearchLimits};
use crate::diagram::parse_pd;
use crate::dual::DualGraph;
use crate::error::{DiagramError, SearchError};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("cannot read {path}: {source}")]
    FileUnreadable { path: PathBuf, source: io::Error },
    #[error("{path} lacks required column(s): {missing}")]
    MissingColumns { path: PathBuf, missing: String },
    #[error("csv error in {path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: io::Error },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableRow {
    pub name: String,
    pub pd: String,
    pub beta_ref: Option<u32>,
}

/// A row that could not be turned into a [`TableRow`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkippedRow {
    /// 1-based line in the input file.
    pub line: u64,
    pub name: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default)]
pub struct Ingested {
    pub rows: Vec<TableRow>,
    pub skipped: Vec<SkippedRow>,
}

pub fn ingest(path: &Path) -> Result<Ingested, CensusError> {
    let file = File::open(path).map_err(|source| CensusError::FileUnreadable {
        path: path.to_path_buf(),
        source,
    })?;
    ingest_reader(file, path)
}

/// Parse a table from any reader; `origin` is used in error messages.
pub fn ingest_reader<R: io::Read>(reader: R, origin: &Path) -> Result<Ingested, CensusError> {
    let csv_err = |source| CensusError::Csv {
        path: origin.to_path_buf(),
        source,
    };
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let (name_col, pd_col, beta_col) = (col("name"), col("pd_notation"), col("bridge_number"));
    let missing: Vec<&str> = [("name", name_col), ("pd_notation", pd_col)]
        .iter()
        .filter(|(_, c)| c.is_none())
        .map(|(n, _)| *n)
        .collect();
    let (Some(name_col), Some(pd_col)) = (name_col, pd_col) else {
        return Err(CensusError::MissingColumns {
            path: origin.to_path_buf(),
            missing: missing.join(", "),
        });
    };

    let mut out = Ingested::default();
    for record in rdr.records() {
        let record = record.map_err(csv_err)?;
        let line = record.position().map_or(0, |p| p.line());
        let name = record.get(name_col).unwrap_or("").to_string();
        let skip = |reason: String| SkippedRow {
            line,
            name: name.clone(),
            reason,
        };
        if name.is_empty() {
            out.skipped.push(skip("empty name".into()));
            continue;
        }
        let pd = record.get(pd_col).unwrap_or("").to_string();
        if let Err(e) = parse_pd(&pd) {
            out.skipped.push(skip(e.to_string()));
            continue;
        }
        let beta_ref = match beta_col.and_then(|c| record.get(c)).unwrap_or("") {
            "" => None,
            s => match s.parse::<u32>() {
                Ok(b) => Some(b),
                Err(_) => {
                    out.skipped.push(skip(format!("bad bridge_number {s:?}")));
                    continue;
                }
            },
        };
        out.rows.push(TableRow { name, pd, beta_ref });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusRecord {
    pub name: String,
    #[serde(rename = "n")]
    pub n_crossings: usize,
    #[serde(rename = "strands")]
    pub n_strands: usize,
    pub omega: usize,
    pub rho: usize,
    pub beta_ref: Option<u32>,
    pub strict_gap: bool,
    pub bound_ok: bool,
    #[serde(rename = "millis")]
    pub wall_millis: u64,
}

impl CensusRecord {
    /// Same values, ignoring wall time.
    pub fn same_values(&self, other: &CensusRecord) -> bool {
        CensusRecord {
            wall_millis: 0,
            ..self.clone()
        } == CensusRecord {
            wall_millis: 0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct CensusOptions {
    pub max_crossings: Option<usize>,
    pub jobs: usize,
    pub timeout_per_diagram: Option<Duration>,
}

impl Default for CensusOptions {
    fn default() -> Self {
        CensusOptions {
            max_crossings: None,
            jobs: 1,
            timeout_per_diagram: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub totals: usize,
    pub gap_count: usize,
    pub violation_count: usize,
    pub timeout_count: usize,
}

impl CensusSummary {
    pub fn from_records<'a>(
        records: impl IntoIterator<Item = &'a CensusRecord>,
        timeout_count: usize,
    ) -> Self {
        let mut s = CensusSummary {
            timeout_count,
            ..Default::default()
        };
        for r in records {
            s.totals += 1;
            s.gap_count += r.strict_gap as usize;
            s.violation_count += !r.bound_ok as usize;
        }
        s
    }
}

#[derive(Debug, Clone, Default)]
pub struct CensusOutcome {
    /// Completed rows, in input order.
    pub records: Vec<CensusRecord>,
    pub timed_out: Vec<String>,
    /// Rows that failed after ingest (e.g. a non-planar PD code).
    pub failed: Vec<(String, String)>,
    /// Rows excluded by `max_crossings`.
    pub filtered: usize,
    pub summary: CensusSummary,
}

enum RowResult {
    Done(CensusRecord),
    Filtered,
    TimedOut,
    Failed(DiagramError),
}

fn compute_row(row: &TableRow, opts: &CensusOptions) -> RowResult {
    let start = Instant::now();
    let d = match parse_pd(&row.pd) {
        Ok(d) => d,
        Err(e) => return RowResult::Failed(e),
    };
    if opts.max_crossings.is_some_and(|m| d.crossing_count() > m) {
        return RowResult::Filtered;
    }
    let g = match DualGraph::new(&d) {
        Ok(g) => g,
        Err(e) => return RowResult::Failed(e),
    };
    let limits = opts
        .timeout_per_diagram
        .map_or_else(SearchLimits::unbounded, SearchLimits::timeout);
    let inv = match invariants_within(&d, &g, &limits) {
        Ok(inv) => inv,
        Err(SearchError::Timeout) => return RowResult::TimedOut,
    };
    let (omega, rho) = (inv.omega.value, inv.rho.value);
    let bound_ok = row
        .beta_ref
        .is_none_or(|b| rho >= b as usize && omega >= b as usize);
    RowResult::Done(CensusRecord {
        name: row.name.clone(),
        n_crossings: d.crossing_count(),
        n_strands: d.strand_count(),
        omega,
        rho,
        beta_ref: row.beta_ref,
        strict_gap: rho < omega,
        bound_ok,
        wall_millis: start.elapsed().as_millis() as u64,
    })
}

/// Compute every row on a pool of `jobs` workers. Each diagram is one unit of work.
pub fn run_census(rows: &[TableRow], opts: &CensusOptions) -> CensusOutcome {
    let work = || -> Vec<RowResult> { rows.par_iter().map(|r| compute_row(r, opts)).collect() };
    let results = match rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
    {
        Ok(pool) => pool.install(work),
        Err(_) => rows.iter().map(|r| compute_row(r, opts)).collect(),
    };

    let mut out = CensusOutcome::default();
    for (row, result) in rows.iter().zip(results) {
        match result {
            RowResult::Done(rec) => out.records.push(rec),
            RowResult::Filtered => out.filtered += 1,
            RowResult::TimedOut => out.timed_out.push(row.name.clone()),
            RowResult::Failed(e) => out.failed.push((row.name.clone(), e.to_string())),
        }
    }
    out.summary = CensusSummary::from_records(&out.records, out.timed_out.len());
    out
}

/// Append-only CSV of census records. Re-runs skip names already present.
#[derive(Debug)]
pub struct CensusStore {
    path: PathBuf,
    existing: Vec<CensusRecord>,
}

impl CensusStore {
    pub fn open(path: impl Into<PathBuf>) -> Result<Self, CensusError> {
        let path = path.into();
        let mut existing = Vec::new();
        if path.exists() {
            let mut rdr = csv::Reader::from_path(&path).map_err(|source| CensusError::Csv {
                path: path.clone(),
                source,
            })?;
            for rec in rdr.deserialize() {
                existing.push(rec.map_err(|source| CensusError::Csv {
                    path: path.clone(),
                    source,
                })?);
            }
        }
        Ok(CensusStore { path, existing })
    }

    pub fn records(&self) -> &[CensusRecord] {
        &self.existing
    }

    pub fn done_names(&self) -> HashSet<&str> {
        self.existing.iter().map(|r| r.name.as_str()).collect()
    }

    /// Rows whose names are not yet stored.
    pub fn pending(&self, rows: &[TableRow]) -> Vec<TableRow> {
        let done = self.done_names();
        rows.iter()
            .filter(|r| !done.contains(r.name.as_str()))
            .cloned()
            .collect()
    }

    pub fn append(&mut self, records: &[CensusRecord]) -> Result<(), CensusError> {
        let write_err = |source| CensusError::Write {
            path: self.path.clone(),
            source,
        };
        let fresh =
            !self.path.exists() || std::fs::metadata(&self.path).map_err(write_err)?.len() == 0;
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)
            .map_err(write_err)?;
        let mut wtr = csv::WriterBuilder::new()
            .has_headers(fresh)
            .from_writer(file);
        if fresh && records.is_empty() {
            wtr.write_record([
                "name",
                "n",
                "strands",
                "omega",
                "rho",
                "beta_ref",
                "strict_gap",
                "bound_ok",
                "millis",
            ])
            .map_err(|source| CensusError::Csv {
                path: self.path.clone(),
                source,
            })?;
        }
        for r in records {
            wtr.serialize(r).map_err(|source| CensusError::Csv {
                path: self.path.clone(),
                source,
            })?;
        }
        wtr.flush().map_err(write_err)?;
        self.existing.extend_from_slice(records);
        Ok(())
    }
}

pub fn write_summary(path: &Path, summary: &CensusSummary) -> Result<(), CensusError> {
    let text = serde_json::to_string_pretty(summary).expect("summary serializes");
    std::fs::write(path, text + "\n").map_err(|source| CensusError::Write {
        path: path.to_path_buf(),
        source,
    })
}
