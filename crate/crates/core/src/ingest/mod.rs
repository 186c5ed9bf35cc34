//! Long-format CSV ingestion, sector crosswalks and panel validation.
//!
//! The canonical input is a tidy CSV with one row per (year, geo, org, tech)
//! cell:
//!
//! ```text
//! year,geo,org,tech,count
//! 2002,Oslo,1-4,45,10
//! ```
//!
//! Duplicate cells are summed. Category universes are the union across
//! years, and cells absent from a year are zero.

mod crosswalk;
mod panel;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use serde::Serialize;

pub use crosswalk::{apply_crosswalk, apply_crosswalk_records, Crosswalk, RevisionSchedule};
pub use panel::PanelSeries;

use crate::error::{Error, Result};
use crate::tensor::{Axis, ContingencyTensor};

/// Header names of the five required input columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnMapping {
    pub year: String,
    pub geo: String,
    pub org: String,
    pub tech: String,
    pub count: String,
}

impl Default for ColumnMapping {
    fn default() -> Self {
        ColumnMapping {
            year: "year".into(),
            geo: "geo".into(),
            org: "org".into(),
            tech: "tech".into(),
            count: "count".into(),
        }
    }
}

/// One row of long-format input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub year: i32,
    pub geo: String,
    pub org: String,
    pub tech: String,
    pub count: u64,
}

pub fn read_records<R: Read>(reader: R, schema: &ColumnMapping) -> Result<Vec<Record>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let find = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::Schema(format!("missing column {name:?}")))
    };
    let cols = [
        find(&schema.year)?,
        find(&schema.geo)?,
        find(&schema.org)?,
        find(&schema.tech)?,
        find(&schema.count)?,
    ];

    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |c: usize| row.get(c).unwrap_or("");
        let year = field(cols[0]).parse::<i32>().map_err(|_| Error::BadValue {
            row: line,
            column: schema.year.clone(),
            value: field(cols[0]).to_string(),
        })?;
        let count = field(cols[4]).parse::<u64>().map_err(|_| Error::BadCount {
            row: line,
            value: field(cols[4]).to_string(),
        })?;
        for (c, name) in [(cols[1], &schema.geo), (cols[2], &schema.org), (cols[3], &schema.tech)] {
            if field(c).is_empty() {
                return Err(Error::BadValue {
                    row: line,
                    column: name.clone(),
                    value: String::new(),
                });
            }
        }
        out.push(Record {
            year,
            geo: field(cols[1]).to_string(),
            org: field(cols[2]).to_string(),
            tech: field(cols[3]).to_string(),
            count,
        });
    }
    if out.is_empty() {
        return Err(Error::EmptyData("input has no data rows".into()));
    }
    Ok(out)
}

/// Category ordering used for every axis: labels with a leading number sort
/// numerically on it ("1-4" < "5-9" < "10-19"), then the rest lexically.
pub fn label_order(a: &str, b: &str) -> Ordering {
    fn lead(s: &str) -> Option<u64> {
        let digits: String = s.chars().take_while(char::is_ascii_digit).collect();
        digits.parse().ok()
    }
    match (lead(a), lead(b)) {
        (Some(x), Some(y)) => x.cmp(&y).then_with(|| a.cmp(b)),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => a.cmp(b),
    }
}

fn sorted_labels(set: BTreeSet<&str>) -> Vec<String> {
    let mut v: Vec<String> = set.into_iter().map(str::to_string).collect();
    v.sort_by(|a, b| label_order(a, b));
    v
}

/// Aggregates records into per-year tensors over the union of categories.
pub fn assemble(records: &[Record]) -> Result<PanelSeries> {
    if records.is_empty() {
        return Err(Error::EmptyData("no records".into()));
    }
    let mut geo = BTreeSet::new();
    let mut org = BTreeSet::new();
    let mut tech = BTreeSet::new();
    for r in records {
        geo.insert(r.geo.as_str());
        org.insert(r.org.as_str());
        tech.insert(r.tech.as_str());
    }
    let labels = [sorted_labels(geo), sorted_labels(org), sorted_labels(tech)];
    let index: Vec<HashMap<&str, usize>> = labels
        .iter()
        .map(|ls| ls.iter().enumerate().map(|(i, l)| (l.as_str(), i)).collect())
        .collect();

    let mut by_year: BTreeMap<i32, ContingencyTensor> = BTreeMap::new();
    for r in records {
        let t = match by_year.get_mut(&r.year) {
            Some(t) => t,
            None => by_year
                .entry(r.year)
                .or_insert(ContingencyTensor::zeros(labels.clone())?),
        };
        t.add(
            index[0][r.geo.as_str()],
            index[1][r.org.as_str()],
            index[2][r.tech.as_str()],
            r.count,
        );
    }
    let (years, tensors) = by_year.into_iter().unzip();
    PanelSeries::new(years, tensors)
}

pub fn read_panel(path: impl AsRef<Path>, schema: &ColumnMapping) -> Result<PanelSeries> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    assemble(&read_records(file, schema)?)
}

/// Writes every cell of the panel (zeros included) as long-format CSV.
pub fn write_panel<W: Write>(panel: &PanelSeries, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["year", "geo", "org", "tech", "count"])?;
    for (year, t) in panel.iter() {
        let [n0, n1, n2] = t.shape();
        let year = year.to_string();
        for i in 0..n0 {
            for j in 0..n1 {
                for k in 0..n2 {
                    w.write_record([
                        year.as_str(),
                        &t.labels(Axis::Geo)[i],
                        &t.labels(Axis::Org)[j],
                        &t.labels(Axis::Tech)[k],
                        &t.get(i, j, k).to_string(),
                    ])?;
                }
            }
        }
    }
    w.flush().map_err(|e| Error::io("<output>", e))?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct YearSummary {
    pub year: i32,
    pub total: u64,
    pub zero_cell_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    /// `empty-year`, `year-gap` or `label-mismatch`.
    pub kind: &'static str,
    pub year: i32,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub years: Vec<YearSummary>,
    pub issues: Vec<Issue>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Report-only health check of a panel. Year gaps are flagged because the
/// spectral analysis treats consecutive entries as equally spaced.
pub fn validate_panel(panel: &PanelSeries) -> ValidationReport {
    let mut issues = Vec::new();
    let mut years = Vec::new();
    let reference = panel.tensors()[0].all_labels();
    let mut prev: Option<i32> = None;
    for (year, t) in panel.iter() {
        let cells = t.counts().len();
        let zeros = t.counts().iter().filter(|&&c| c == 0).count();
        years.push(YearSummary {
            year,
            total: t.total(),
            zero_cell_fraction: zeros as f64 / cells as f64,
        });
        if t.total() == 0 {
            issues.push(Issue {
                kind: "empty-year",
                year,
                message: format!("{year} has no counts"),
            });
        }
        if t.all_labels() != reference {
            issues.push(Issue {
                kind: "label-mismatch",
                year,
                message: format!("{year} axis labels differ from {}", panel.start_year()),
            });
        }
        if let Some(p) = prev {
            if year != p + 1 {
                issues.push(Issue {
                    kind: "year-gap",
                    year,
                    message: format!("no data between {p} and {year}"),
                });
            }
        }
        prev = Some(year);
    }
    ValidationReport { years, issues }
}
