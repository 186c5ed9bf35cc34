//! Command implementations behind the `trihelix` binary. Each command writes
//! a CSV table to the given writer. Synergy is shown in mbits (millibits,
//! 10⁻³ bit) and transmission power in relative units × 100.

use std::fs::{self, File};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};

use crate::decomposition::{decompose_panel, deviations, transmission_power};
use crate::error::Error;
use crate::hurst::{hurst_exponent_with, MeanMode};
use crate::ingest::{
    apply_crosswalk_records, assemble, read_records, write_panel, ColumnMapping, Crosswalk,
    PanelSeries, RevisionSchedule,
};
use crate::polyfit::polyfit;
use crate::report::{build_report, write_report, ReportOptions};
use crate::spectral::{amplitude_fits, dft, group_spectra, SpectrumResult, TimeSeries};
use crate::tensor::Axis;
use crate::MBITS_PER_BIT;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CommandKind {
    /// National synergy and transmission power per year.
    Synergy,
    /// Per-group synergy contributions per year.
    Decompose,
    /// National and per-group transmission power per year.
    Power,
    /// K / P average-deviation percentages per group.
    Deviation,
    /// Fourier coefficients of the synergy series.
    Spectrum,
    /// Rescaled-range analysis of the national synergy series.
    Hurst,
    /// Polynomial fits of |mean synergy| against amplitudes, or of two bare columns.
    Fit,
    /// Map tech codes through a crosswalk and print the resulting long CSV.
    Crosswalk,
    /// Full JSON report, series CSV and optional SVG plots.
    Report,
}

#[derive(Debug, Parser)]
#[command(name = "trihelix", version, about = "Triple-Helix synergy analytics for categorical panel data")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: CommandKind,

    /// Long-format CSV (year,geo,org,tech,count); for `fit`, alternatively two numeric columns.
    #[arg(long)]
    pub input: PathBuf,

    /// Decomposition axis.
    #[arg(long, default_value = "geo")]
    pub axis: Axis,

    /// Crosswalk CSV for tech codes, or `bundled` for the shipped NACE aggregation.
    #[arg(long)]
    pub crosswalk: Option<String>,

    /// Source revision of the tech codes (e.g. rev1.1).
    #[arg(long)]
    pub revision: Option<String>,

    /// Revision change, YEAR=REV (e.g. 2009=rev2); repeatable.
    #[arg(long = "revision-from", value_name = "YEAR=REV")]
    pub revision_from: Vec<String>,

    /// Polynomial degree for `fit` and the report fits.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,

    /// Mean used for the cumulative deviate in R/S analysis: prefix or full.
    #[arg(long, default_value = "prefix")]
    pub hurst_mean: MeanMode,

    /// Include per-group rows in `spectrum`.
    #[arg(long)]
    pub by_group: bool,

    /// Write SVG plots with `report`.
    #[arg(long)]
    pub plots: bool,

    /// Output directory for `report`; output file for the other commands.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Data(#[from] Error),
}

impl CliError {
    /// 1 usage, 2 data, 3 numeric degeneracy.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(e) => e.exit_code(),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Data(e.into())
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Shortest round-trip decimal form; -0 prints as 0.
pub fn fmt_num(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:?}")
}

fn io_err(path: &Path) -> impl Fn(io::Error) -> CliError + '_ {
    move |e| CliError::Data(Error::io(path, e))
}

fn schedule(cli: &Cli, cw: &Crosswalk) -> CliResult<RevisionSchedule> {
    let mut s = match &cli.revision {
        Some(r) => RevisionSchedule::single(r.clone()),
        None if cli.revision_from.is_empty() => RevisionSchedule::infer(cw)?,
        None => {
            return Err(CliError::Usage(
                "--revision-from needs --revision for the earlier years".into(),
            ))
        }
    };
    for arg in &cli.revision_from {
        let (year, rev) = arg
            .split_once('=')
            .and_then(|(y, r)| Some((y.trim().parse::<i32>().ok()?, r.trim())))
            .ok_or_else(|| CliError::Usage(format!("bad --revision-from {arg:?}, expected YEAR=REV")))?;
        s = s.switch_at(year, rev);
    }
    Ok(s)
}

fn load_crosswalk(arg: &str) -> CliResult<Crosswalk> {
    if arg == "bundled" {
        Ok(Crosswalk::bundled())
    } else {
        Ok(Crosswalk::from_path(arg)?)
    }
}

/// Reads the input panel, applying the crosswalk when one is configured.
pub fn load_panel(cli: &Cli) -> CliResult<PanelSeries> {
    let file = File::open(&cli.input).map_err(io_err(&cli.input))?;
    let records = read_records(file, &ColumnMapping::default())?;
    let records = match &cli.crosswalk {
        Some(arg) => {
            let cw = load_crosswalk(arg)?;
            apply_crosswalk_records(&records, &cw, &schedule(cli, &cw)?)?
        }
        None => records,
    };
    Ok(assemble(&records)?)
}

fn table<W: Write>(out: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().flexible(true).from_writer(out)
}

pub fn cmd_synergy(panel: &PanelSeries, out: &mut dyn Write) -> CliResult<()> {
    let mut w = table(out);
    w.write_record(["year", "synergy_mbits", "tau_x100", "tau_branch"])?;
    for (year, t) in panel.iter() {
        let h = t.probabilities()?.entropy_set();
        let tp = transmission_power(&h)?;
        w.write_record([
            year.to_string(),
            fmt_num(h.synergy() * MBITS_PER_BIT),
            fmt_num(tp.tau * 100.0),
            tp.branch.name().to_string(),
        ])?;
    }
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

fn year_header(panel: &PanelSeries) -> Vec<String> {
    std::iter::once("group".to_string())
        .chain(panel.years().iter().map(|y| y.to_string()))
        .collect()
}

pub fn cmd_decompose(panel: &PanelSeries, axis: Axis, out: &mut dyn Write) -> CliResult<()> {
    let decs = decompose_panel(panel, axis)?;
    let mut w = table(out);
    w.write_record(year_header(panel))?;
    for (g, label) in panel.labels(axis).iter().enumerate() {
        let mut row = vec![label.clone()];
        row.extend(decs.iter().map(|d| fmt_num(d.contributions[g] * MBITS_PER_BIT)));
        w.write_record(&row)?;
    }
    let mut national = vec!["national".to_string()];
    national.extend(decs.iter().map(|d| fmt_num(d.total * MBITS_PER_BIT)));
    w.write_record(&national)?;
    let mut check = vec!["checksum".to_string()];
    check.extend(
        decs.iter()
            .map(|d| fmt_num((d.contributions.iter().sum::<f64>() - d.total) * MBITS_PER_BIT)),
    );
    w.write_record(&check)?;
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

pub fn cmd_power(panel: &PanelSeries, axis: Axis, out: &mut dyn Write) -> CliResult<()> {
    let decs = decompose_panel(panel, axis)?;
    let mut w = table(out);
    w.write_record(year_header(panel))?;
    let mut national = vec!["national".to_string()];
    for t in panel.tensors() {
        let tp = transmission_power(&t.probabilities()?.entropy_set())?;
        national.push(fmt_num(tp.tau * 100.0));
    }
    w.write_record(&national)?;
    for (g, label) in panel.labels(axis).iter().enumerate() {
        let mut row = vec![label.clone()];
        for (t, d) in panel.tensors().iter().zip(&decs) {
            let cell = if t.marginal_counts(axis)[g] == 0 {
                String::new()
            } else {
                fmt_num(transmission_power(&d.shares[g])?.tau * 100.0)
            };
            row.push(cell);
        }
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

pub fn cmd_deviation(panel: &PanelSeries, axis: Axis, out: &mut dyn Write) -> CliResult<()> {
    let r = deviations(panel, axis)?;
    let mut w = table(out);
    w.write_record(["group", "years_used", "tau_avg_x100", "synergy_avg_mbits", "k_percent", "p_percent"])?;
    for g in &r.groups {
        w.write_record([
            g.label.clone(),
            g.years_used.to_string(),
            fmt_num(g.tau_avg * 100.0),
            fmt_num(g.synergy_avg * MBITS_PER_BIT),
            fmt_num(g.k_percent),
            fmt_num(g.p_percent),
        ])?;
    }
    w.write_record([
        "mean".to_string(),
        String::new(),
        fmt_num(r.tau_mean * 100.0),
        fmt_num(r.synergy_mean * MBITS_PER_BIT),
        String::new(),
        String::new(),
    ])?;
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

/// Oscillatory components with C_l at or below this fraction of the
/// spectrum's largest magnitude are not listed.
const NEGLIGIBLE: f64 = 1e-12;

fn spectrum_rows(name: &str, s: &SpectrumResult) -> Vec<Vec<String>> {
    let scale = s.harmonics.iter().map(|h| h.c).fold(s.constant.abs(), f64::max);
    let mut rows = vec![vec![
        name.to_string(),
        "0".into(),
        String::new(),
        fmt_num(s.constant * MBITS_PER_BIT),
        "0.0".into(),
        fmt_num(s.constant.abs() * MBITS_PER_BIT),
    ]];
    for h in s.harmonics.iter().filter(|h| h.c > NEGLIGIBLE * scale) {
        rows.push(vec![
            name.to_string(),
            h.l.to_string(),
            fmt_num(s.period(h.l)),
            fmt_num(h.b * MBITS_PER_BIT),
            fmt_num(h.d * MBITS_PER_BIT),
            fmt_num(h.c * MBITS_PER_BIT),
        ]);
    }
    rows
}

pub fn cmd_spectrum(panel: &PanelSeries, axis: Axis, by_group: bool, out: &mut dyn Write) -> CliResult<()> {
    let mut w = table(out);
    w.write_record(["series", "l", "period_years", "b_mbits", "d_mbits", "c_mbits"])?;
    if by_group {
        let gs = group_spectra(panel, axis)?;
        for row in spectrum_rows("national", &gs.aggregate) {
            w.write_record(&row)?;
        }
        for g in &gs.groups {
            for row in spectrum_rows(&g.label, &g.spectrum) {
                w.write_record(&row)?;
            }
        }
    } else {
        let s = dft(&TimeSeries::new(panel.start_year(), panel.synergy_series()?)?);
        for row in spectrum_rows("national", &s) {
            w.write_record(&row)?;
        }
    }
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

pub fn cmd_hurst(panel: &PanelSeries, mode: MeanMode, out: &mut dyn Write) -> CliResult<()> {
    let series = TimeSeries::new(panel.start_year(), panel.synergy_series()?)?;
    let r = hurst_exponent_with(&series, mode)?;
    let mut w = table(out);
    w.write_record(["t", "r_bits", "s_bits", "rs"])?;
    for p in &r.points {
        w.write_record([p.t.to_string(), fmt_num(p.range), fmt_num(p.std_dev), fmt_num(p.rs)])?;
    }
    w.write_record(["h", "intercept", "r_squared", "classification", "mean_mode"])?;
    w.write_record([
        fmt_num(r.h),
        fmt_num(r.intercept),
        fmt_num(r.r_squared),
        r.classification.name().to_string(),
        match r.mean_mode {
            MeanMode::Prefix => "prefix",
            MeanMode::FullSeries => "full",
        }
        .to_string(),
    ])?;
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

fn coefficient_header(degree: usize) -> impl Iterator<Item = String> {
    (0..=degree).map(|i| format!("c{i}"))
}

/// Reads two numeric columns; a non-numeric first row is taken as a header.
pub fn read_xy(path: &Path) -> CliResult<(Vec<f64>, Vec<f64>)> {
    let text = fs::read_to_string(path).map_err(io_err(path))?;
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for (i, row) in rdr.records().enumerate() {
        let row = row?;
        let parse = |c: usize| row.get(c).and_then(|v| v.parse::<f64>().ok());
        match (parse(0), parse(1), row.len()) {
            (Some(a), Some(b), 2) => {
                x.push(a);
                y.push(b);
            }
            _ if i == 0 => {}
            _ => {
                return Err(CliError::Data(Error::BadValue {
                    row: i + 1,
                    column: "x,y".into(),
                    value: row.iter().collect::<Vec<_>>().join(","),
                }))
            }
        }
    }
    if x.is_empty() {
        return Err(CliError::Data(Error::EmptyData("no numeric rows".into())));
    }
    Ok((x, y))
}

fn is_panel_file(path: &Path) -> CliResult<bool> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(file);
    let headers = rdr.headers()?;
    let has = |n: &str| headers.iter().any(|h| h.eq_ignore_ascii_case(n));
    Ok(has("year") && has("count"))
}

pub fn cmd_fit(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let mut w = table(out);
    if is_panel_file(&cli.input)? {
        let panel = load_panel(cli)?;
        let gs = group_spectra(&panel, cli.axis)?;
        let mut header: Vec<String> = ["l", "period_years", "points", "r_squared"].map(String::from).to_vec();
        header.extend(coefficient_header(cli.degree));
        header.push("error".into());
        w.write_record(&header)?;
        for f in amplitude_fits(&gs, cli.degree) {
            let mut row = vec![f.l.to_string(), fmt_num(f.period), f.points.len().to_string()];
            match &f.fit {
                Some(fit) => {
                    row.push(fmt_num(fit.r_squared));
                    row.extend(fit.coefficients.iter().map(|&c| fmt_num(c)));
                    row.push(String::new());
                }
                None => {
                    row.push(String::new());
                    row.extend(coefficient_header(cli.degree).map(|_| String::new()));
                    row.push(f.error.clone().unwrap_or_default());
                }
            }
            w.write_record(&row)?;
        }
    } else {
        let (x, y) = read_xy(&cli.input)?;
        let fit = polyfit(&x, &y, cli.degree)?;
        let mut header: Vec<String> = vec!["degree".into(), "points".into(), "r_squared".into()];
        header.extend(coefficient_header(cli.degree));
        w.write_record(&header)?;
        let mut row = vec![fit.degree.to_string(), x.len().to_string(), fmt_num(fit.r_squared)];
        row.extend(fit.coefficients.iter().map(|&c| fmt_num(c)));
        w.write_record(&row)?;
    }
    w.flush().map_err(|e| CliError::Data(Error::io("<output>", e)))?;
    Ok(())
}

pub fn cmd_crosswalk(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    let arg = cli.crosswalk.as_deref().unwrap_or("bundled");
    let cw = load_crosswalk(arg)?;
    let file = File::open(&cli.input).map_err(io_err(&cli.input))?;
    let records = read_records(file, &ColumnMapping::default())?;
    let mapped = apply_crosswalk_records(&records, &cw, &schedule(cli, &cw)?)?;
    write_panel(&assemble(&mapped)?, out)?;
    Ok(())
}

pub fn cmd_report(cli: &Cli, panel: &PanelSeries) -> CliResult<Vec<String>> {
    let dir = cli
        .out
        .as_ref()
        .ok_or_else(|| CliError::Usage("report needs --out <dir>".into()))?;
    let revisions = (cli.revision.is_some() || !cli.revision_from.is_empty()).then(|| {
        std::iter::once(cli.revision.clone().unwrap_or_default())
            .chain(cli.revision_from.iter().cloned())
            .collect::<Vec<_>>()
            .join(";")
    });
    let options = ReportOptions {
        input: cli.input.display().to_string(),
        axis: cli.axis,
        crosswalk: cli.crosswalk.clone(),
        revisions,
        fit_degree: cli.degree,
        hurst_mean: cli.hurst_mean,
    };
    let report = build_report(panel, options)?;
    Ok(write_report(&report, dir, cli.plots)?)
}

/// Runs one command. Tables go to `--out` when given, otherwise to `stdout`.
pub fn run(cli: &Cli, stdout: &mut dyn Write) -> CliResult<()> {
    if cli.degree == 0 {
        return Err(CliError::Usage("--degree must be at least 1".into()));
    }
    let mut file;
    let out: &mut dyn Write = match (&cli.out, cli.command) {
        (Some(path), kind) if kind != CommandKind::Report => {
            file = File::create(path).map_err(io_err(path))?;
            &mut file
        }
        _ => stdout,
    };
    match cli.command {
        CommandKind::Fit => return cmd_fit(cli, out),
        CommandKind::Crosswalk => return cmd_crosswalk(cli, out),
        _ => {}
    }
    let panel = load_panel(cli)?;
    match cli.command {
        CommandKind::Synergy => cmd_synergy(&panel, out),
        CommandKind::Decompose => cmd_decompose(&panel, cli.axis, out),
        CommandKind::Power => cmd_power(&panel, cli.axis, out),
        CommandKind::Deviation => cmd_deviation(&panel, cli.axis, out),
        CommandKind::Spectrum => cmd_spectrum(&panel, cli.axis, cli.by_group, out),
        CommandKind::Hurst => cmd_hurst(&panel, cli.hurst_mean, out),
        CommandKind::Report => {
            for name in cmd_report(cli, &panel)? {
                writeln!(out, "{name}").map_err(|e| CliError::Data(Error::io("<stdout>", e)))?;
            }
            Ok(())
        }
        CommandKind::Fit | CommandKind::Crosswalk => unreachable!(),
    }
}
