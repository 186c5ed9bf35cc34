//! Mapping of sector classification codes onto a small set of target
//! classes, loaded from an editable CSV (`source_revision,source_code,
//! target_class`).

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::Read;
use std::path::Path;

use super::{label_order, PanelSeries, Record};
use crate::error::{Error, Result};
use crate::tensor::Axis;

const BUNDLED: &str = include_str!("../../data/nace_high_level.csv");

#[derive(Debug, Clone, PartialEq, Eq)]
struct Target {
    class: String,
    explicit: bool,
    line: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Crosswalk {
    entries: BTreeMap<(String, String), Target>,
    revisions: Vec<String>,
    targets: Vec<String>,
}

fn normalize_revision(rev: &str) -> String {
    rev.trim().to_ascii_lowercase()
}

/// Canonical form of a single code: upper-cased, division zero-padded to two
/// digits ("1" -> "01", "5.02" -> "05.02").
pub(crate) fn normalize_code(code: &str) -> String {
    let code = code.trim().to_ascii_uppercase();
    let (head, tail) = match code.find('.') {
        Some(at) => code.split_at(at),
        None => (code.as_str(), ""),
    };
    if head.len() == 1 && head.chars().all(|c| c.is_ascii_digit()) {
        format!("0{head}{tail}")
    } else {
        code
    }
}

fn expand(code: &str) -> Result<(Vec<String>, bool)> {
    let Some((lo, hi)) = code.split_once('-') else {
        return Ok((vec![normalize_code(code)], true));
    };
    let (lo, hi) = (lo.trim(), hi.trim());
    if let (Ok(a), Ok(b)) = (lo.parse::<u32>(), hi.parse::<u32>()) {
        if a > b {
            return Err(Error::Crosswalk(format!("descending range {code:?}")));
        }
        return Ok(((a..=b).map(|d| format!("{d:02}")).collect(), false));
    }
    let letter = |s: &str| {
        let s = s.to_ascii_uppercase();
        match s.as_bytes() {
            [c] if c.is_ascii_uppercase() => Some(*c),
            _ => None,
        }
    };
    match (letter(lo), letter(hi)) {
        (Some(a), Some(b)) if a <= b => Ok(((a..=b).map(|c| (c as char).to_string()).collect(), false)),
        _ => Err(Error::Crosswalk(format!("unsupported range {code:?}"))),
    }
}

impl Crosswalk {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_reader(reader);
        let headers = rdr.headers()?.clone();
        let col = |name: &str| {
            headers
                .iter()
                .position(|h| h.eq_ignore_ascii_case(name))
                .ok_or_else(|| Error::Schema(format!("crosswalk missing column {name:?}")))
        };
        let (rc, sc, tc) = (col("source_revision")?, col("source_code")?, col("target_class")?);

        let mut cw = Crosswalk {
            entries: BTreeMap::new(),
            revisions: Vec::new(),
            targets: Vec::new(),
        };
        for row in rdr.records() {
            let row = row?;
            let line = row.position().map_or(0, |p| p.line() as usize);
            let get = |c: usize| row.get(c).unwrap_or("").to_string();
            let (rev, code, class) = (normalize_revision(&get(rc)), get(sc), get(tc));
            if rev.is_empty() || code.is_empty() || class.is_empty() {
                return Err(Error::Crosswalk(format!("incomplete row at line {line}")));
            }
            if !cw.revisions.contains(&rev) {
                cw.revisions.push(rev.clone());
            }
            if !cw.targets.contains(&class) {
                cw.targets.push(class.clone());
            }
            let (codes, explicit) = expand(&code)?;
            for code in codes {
                cw.insert(&rev, code, Target { class: class.clone(), explicit, line })?;
            }
        }
        if cw.entries.is_empty() {
            return Err(Error::Crosswalk("crosswalk has no entries".into()));
        }
        Ok(cw)
    }

    fn insert(&mut self, rev: &str, code: String, target: Target) -> Result<()> {
        let key = (rev.to_string(), code);
        match self.entries.get(&key) {
            None => {
                self.entries.insert(key, target);
            }
            Some(old) if old.class == target.class => {
                if target.explicit && !old.explicit {
                    self.entries.insert(key, target);
                }
            }
            Some(old) if old.explicit != target.explicit => {
                if target.explicit {
                    self.entries.insert(key, target);
                }
            }
            Some(old) => {
                return Err(Error::Crosswalk(format!(
                    "{} code {} maps to {} (line {}) and {} (line {})",
                    key.0, key.1, old.class, old.line, target.class, target.line
                )));
            }
        }
        Ok(())
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_reader(file)
    }

    /// The 10-class NACE Rev. 1.1 / Rev. 2 aggregation shipped with the crate.
    pub fn bundled() -> Self {
        Self::from_reader(BUNDLED.as_bytes()).expect("bundled crosswalk is valid")
    }

    pub fn bundled_source() -> &'static str {
        BUNDLED
    }

    /// Source revisions in order of first appearance.
    pub fn revisions(&self) -> &[String] {
        &self.revisions
    }

    /// Target classes in order of first appearance.
    pub fn targets(&self) -> &[String] {
        &self.targets
    }

    /// Longest-prefix lookup: "74.141" tries "74.141", "74.14", "74.1", "74".
    pub fn resolve(&self, revision: &str, code: &str) -> Option<&str> {
        let rev = normalize_revision(revision);
        let mut probe = normalize_code(code);
        loop {
            if let Some(t) = self.entries.get(&(rev.clone(), probe.clone())) {
                return Some(&t.class);
            }
            if !probe.contains('.') {
                return None;
            }
            probe.pop();
            if probe.ends_with('.') {
                probe.pop();
            }
        }
    }
}

/// Which source revision the tech codes of a given year are in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RevisionSchedule {
    initial: String,
    switches: Vec<(i32, String)>,
}

impl RevisionSchedule {
    pub fn single(revision: impl Into<String>) -> Self {
        RevisionSchedule {
            initial: revision.into(),
            switches: Vec::new(),
        }
    }

    /// From `year` onward codes are in `revision`.
    pub fn switch_at(mut self, year: i32, revision: impl Into<String>) -> Self {
        self.switches.push((year, revision.into()));
        self.switches.sort_by_key(|s| s.0);
        self
    }

    /// Schedule for a crosswalk with exactly one revision.
    pub fn infer(crosswalk: &Crosswalk) -> Result<Self> {
        match crosswalk.revisions() {
            [only] => Ok(Self::single(only.clone())),
            many => Err(Error::Crosswalk(format!(
                "crosswalk has revisions {}; choose one",
                many.join(", ")
            ))),
        }
    }

    pub fn revision_for(&self, year: i32) -> &str {
        self.switches
            .iter()
            .rev()
            .find(|(from, _)| year >= *from)
            .map_or(&self.initial, |(_, r)| r)
    }

    fn check(&self, crosswalk: &Crosswalk) -> Result<()> {
        let known = crosswalk.revisions();
        for rev in std::iter::once(&self.initial).chain(self.switches.iter().map(|s| &s.1)) {
            if !known.contains(&normalize_revision(rev)) {
                return Err(Error::Crosswalk(format!("unknown revision {rev:?}")));
            }
        }
        Ok(())
    }
}

fn unmapped_error(missing: BTreeSet<(String, String)>) -> Error {
    Error::UnmappedCode(
        missing
            .into_iter()
            .map(|(rev, code)| format!("{code} ({rev})"))
            .collect(),
    )
}

/// Replaces each record's tech code by its target class. Zero-count records
/// with codes the crosswalk does not know are dropped.
pub fn apply_crosswalk_records(
    records: &[Record],
    crosswalk: &Crosswalk,
    schedule: &RevisionSchedule,
) -> Result<Vec<Record>> {
    schedule.check(crosswalk)?;
    let mut missing = BTreeSet::new();
    let mut out = Vec::with_capacity(records.len());
    for r in records {
        let rev = schedule.revision_for(r.year);
        match crosswalk.resolve(rev, &r.tech) {
            Some(class) => out.push(Record {
                tech: class.to_string(),
                ..r.clone()
            }),
            None if r.count == 0 => {}
            None => {
                missing.insert((normalize_revision(rev), r.tech.clone()));
            }
        }
    }
    if !missing.is_empty() {
        return Err(unmapped_error(missing));
    }
    if out.is_empty() {
        return Err(Error::EmptyData("no records left after crosswalk".into()));
    }
    Ok(out)
}

/// Panel-level crosswalk: the tech axis becomes the set of target classes
/// that receive counts, with totals preserved per year.
pub fn apply_crosswalk(
    panel: &PanelSeries,
    crosswalk: &Crosswalk,
    schedule: &RevisionSchedule,
) -> Result<PanelSeries> {
    schedule.check(crosswalk)?;
    let codes = panel.labels(Axis::Tech);
    let mut missing = BTreeSet::new();
    let mut per_year: Vec<Vec<Option<&str>>> = Vec::with_capacity(panel.len());
    let mut used = BTreeSet::new();
    for (year, t) in panel.iter() {
        let rev = schedule.revision_for(year);
        let present = t.marginal_counts(Axis::Tech);
        let mut map = Vec::with_capacity(codes.len());
        for (code, &n) in codes.iter().zip(&present) {
            let class = crosswalk.resolve(rev, code);
            match class {
                Some(c) if n > 0 => {
                    used.insert(c);
                }
                None if n > 0 => {
                    missing.insert((normalize_revision(rev), code.clone()));
                }
                _ => {}
            }
            map.push(class);
        }
        per_year.push(map);
    }
    if !missing.is_empty() {
        return Err(unmapped_error(missing));
    }
    if used.is_empty() {
        return Err(Error::EmptyData("panel has no counts".into()));
    }
    let mut targets: Vec<String> = used.into_iter().map(str::to_string).collect();
    targets.sort_by(|a, b| label_order(a, b));

    let mut tensors = Vec::with_capacity(panel.len());
    for (t, map) in panel.tensors().iter().zip(per_year) {
        // zero-count codes with no (or an unused) class can go anywhere
        let assign: Vec<usize> = map
            .iter()
            .map(|c| c.and_then(|c| targets.iter().position(|t| t == c)).unwrap_or(0))
            .collect();
        tensors.push(t.regroup(Axis::Tech, targets.clone(), &assign)?);
    }
    PanelSeries::new(panel.years().to_vec(), tensors)
}
