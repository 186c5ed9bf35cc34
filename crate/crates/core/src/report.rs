//! The full analysis report (`report.json`) and its companion files.
//!
//! JSON output is deterministic: object keys are sorted and every
//! non-integer number is rounded to 12 significant digits before printing.

use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::decomposition::{decompose_panel, deviations, transmission_power, DeviationReport, PowerBranch};
use crate::error::{Error, Result};
use crate::hurst::{hurst_exponent_with, HurstResult, MeanMode};
use crate::ingest::PanelSeries;
use crate::plot::{bar_chart, line_chart, scatter_with_line, Series};
use crate::spectral::{amplitude_fits, group_spectra, line_specter, FrequencyFit, GroupSpectra, LineEntry, TimeSeries};
use crate::tensor::{Axis, EntropySet};
use crate::MBITS_PER_BIT;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportOptions {
    /// Input file as given on the command line.
    pub input: String,
    pub axis: Axis,
    pub crosswalk: Option<String>,
    pub revisions: Option<String>,
    pub fit_degree: usize,
    pub hurst_mean: MeanMode,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            input: String::new(),
            axis: Axis::Geo,
            crosswalk: None,
            revisions: None,
            fit_degree: 2,
            hurst_mean: MeanMode::Prefix,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub version: &'static str,
    #[serde(flatten)]
    pub options: ReportOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NationalYear {
    pub year: i32,
    pub total_count: u64,
    pub entropies_bits: EntropySet,
    pub synergy_bits: f64,
    pub synergy_mbits: f64,
    pub tau: f64,
    pub tau_branch: PowerBranch,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSeries {
    pub label: String,
    /// Contribution per year, bits.
    pub synergy_bits: Vec<f64>,
    /// Group transmission power per year; null where the group has no
    /// counts or its denominator vanishes.
    pub tau: Vec<Option<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Contributions {
    pub axis: Axis,
    pub groups: Vec<GroupSeries>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub metadata: Metadata,
    pub years: Vec<i32>,
    pub national: Vec<NationalYear>,
    pub contributions: Contributions,
    pub deviations: Option<DeviationReport>,
    pub deviations_error: Option<String>,
    pub spectra: Option<GroupSpectra>,
    pub spectra_error: Option<String>,
    pub line_specter: Vec<LineEntry>,
    pub hurst: Option<HurstResult>,
    pub hurst_error: Option<String>,
    pub fits: Vec<FrequencyFit>,
}

fn split<T>(r: Result<T>) -> (Option<T>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

pub fn build_report(panel: &PanelSeries, options: ReportOptions) -> Result<AnalysisReport> {
    let axis = options.axis;
    let decs = decompose_panel(panel, axis)?;

    let mut national = Vec::with_capacity(panel.len());
    for ((year, tensor), dec) in panel.iter().zip(&decs) {
        let h = tensor.probabilities()?.entropy_set();
        let tp = transmission_power(&h)?;
        national.push(NationalYear {
            year,
            total_count: tensor.total(),
            entropies_bits: h,
            synergy_bits: dec.total,
            synergy_mbits: dec.total * MBITS_PER_BIT,
            tau: tp.tau,
            tau_branch: tp.branch,
        });
    }

    let groups = panel
        .labels(axis)
        .iter()
        .enumerate()
        .map(|(g, label)| GroupSeries {
            label: label.clone(),
            synergy_bits: decs.iter().map(|d| d.contributions[g]).collect(),
            tau: panel
                .tensors()
                .iter()
                .zip(&decs)
                .map(|(t, d)| {
                    (t.marginal_counts(axis)[g] > 0)
                        .then(|| transmission_power(&d.shares[g]).ok().map(|p| p.tau))
                        .flatten()
                })
                .collect(),
        })
        .collect();

    let (deviations, deviations_error) = split(deviations(panel, axis));
    let (spectra, spectra_error) = split(group_spectra(panel, axis));
    let fits = spectra
        .as_ref()
        .map(|s| amplitude_fits(s, options.fit_degree))
        .unwrap_or_default();
    let series = TimeSeries::new(panel.start_year(), national.iter().map(|n| n.synergy_bits).collect());
    let (hurst, hurst_error) = split(series.and_then(|s| hurst_exponent_with(&s, options.hurst_mean)));

    Ok(AnalysisReport {
        schema_version: SCHEMA_VERSION,
        metadata: Metadata {
            tool: "trihelix",
            version: env!("CARGO_PKG_VERSION"),
            options,
        },
        years: panel.years().to_vec(),
        national,
        contributions: Contributions { axis, groups },
        deviations,
        deviations_error,
        spectra,
        spectra_error,
        line_specter: line_specter(panel, axis)?,
        hurst,
        hurst_error,
        fits,
    })
}

/// Rounds to 12 significant digits; -0 becomes 0.
pub fn round_sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

fn round_numbers(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(f) = n.as_f64() {
                *v = serde_json::Number::from_f64(round_sig12(f)).map_or(Value::Null, Value::Number);
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_numbers),
        Value::Object(map) => map.values_mut().for_each(round_numbers),
        _ => {}
    }
}

/// Deterministic pretty-printed JSON for any serializable value.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    let mut v = serde_json::to_value(value)?;
    round_numbers(&mut v);
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// `year,total_count,synergy_bits,tau,<group>...` with group columns in bits.
pub fn series_csv(report: &AnalysisReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["year".to_string(), "total_count".into(), "synergy_bits".into(), "tau".into()];
    header.extend(report.contributions.groups.iter().map(|g| format!("{}_bits", g.label)));
    w.write_record(&header)?;
    for (y, n) in report.national.iter().enumerate() {
        let mut row = vec![
            n.year.to_string(),
            n.total_count.to_string(),
            format!("{:?}", round_sig12(n.synergy_bits)),
            format!("{:?}", round_sig12(n.tau)),
        ];
        row.extend(
            report
                .contributions
                .groups
                .iter()
                .map(|g| format!("{:?}", round_sig12(g.synergy_bits[y]))),
        );
        w.write_record(&row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io("<series.csv>", e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Writes `report.json`, `series.csv` and, with `plots`, the SVG figures
/// into `dir`. Returns the written file names.
pub fn write_report(report: &AnalysisReport, dir: &Path, plots: bool) -> Result<Vec<String>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = vec![
        ("report.json".to_string(), to_canonical_json(report)?),
        ("series.csv".to_string(), series_csv(report)?),
    ];
    if plots {
        files.extend(render_plots(report));
    }
    for (name, body) in &files {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(path, e))?;
    }
    Ok(files.into_iter().map(|(n, _)| n).collect())
}

pub fn render_plots(report: &AnalysisReport) -> Vec<(String, String)> {
    let year_series = |name: &str, f: &dyn Fn(&NationalYear) -> f64| Series {
        name: name.into(),
        points: report.national.iter().map(|n| (n.year as f64, f(n))).collect(),
    };
    let mut out = vec![
        (
            "synergy_by_year.svg".to_string(),
            line_chart(
                "Synergy by year",
                "year",
                "T (mbits)",
                &[year_series("national", &|n| n.synergy_mbits)],
            ),
        ),
        (
            "tau_by_year.svg".to_string(),
            line_chart(
                "Transmission power by year",
                "year",
                "tau (relative units x 100)",
                &[year_series("national", &|n| n.tau * 100.0)],
            ),
        ),
    ];
    if let Some(spectra) = &report.spectra {
        let bars: Vec<(f64, f64)> = spectra
            .aggregate
            .harmonics
            .iter()
            .map(|h| (h.l as f64, h.c * MBITS_PER_BIT))
            .collect();
        out.push((
            "spectrum.svg".to_string(),
            bar_chart("Fourier coefficient moduli", "frequency index l", "C_l (mbits)", &bars),
        ));
    }
    if let Some(h) = &report.hurst {
        let pts: Vec<(f64, f64)> = h.points.iter().map(|p| ((p.t as f64).ln(), p.rs.ln())).collect();
        out.push((
            "rs_loglog.svg".to_string(),
            scatter_with_line(
                &format!("R/S analysis (H = {:.4})", h.h),
                "ln t",
                "ln (R/S)",
                &pts,
                h.h,
                h.intercept,
            ),
        ));
    }
    out
}
