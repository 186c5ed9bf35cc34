//! Finite Fourier decomposition of short synergy series.
//!
//! A series x_0 … x_{L−1} is written as
//! `x_w = A + Σ_l [B_l cos(2πlw/L) + D_l sin(2πlw/L)]` for l = 1 … ⌊L/2⌋,
//! with A the mean, oscillatory coefficients scaled by 2/L and the Nyquist
//! term (even L) by 1/L, so the sum reproduces the input exactly. The
//! transform is a direct O(L²) sum; series here are a few dozen samples and
//! L is often prime.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::decomposition::decompose_panel;
use crate::error::{Error, Result};
use crate::ingest::PanelSeries;
use crate::polyfit::{polyfit, PolyFit};
use crate::tensor::Axis;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    start_year: i32,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(start_year: i32, values: Vec<f64>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::SeriesTooShort {
                len: values.len(),
                min: 2,
            });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(TimeSeries { start_year, values })
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One oscillatory component l of a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Harmonic {
    pub l: usize,
    /// Cosine coefficient B_l.
    pub b: f64,
    /// Sine coefficient D_l.
    pub d: f64,
    /// Modulus C_l = sqrt(B_l² + D_l²).
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    /// Series length L the spectrum was computed from.
    pub length: usize,
    /// Constant term A (the series mean).
    pub constant: f64,
    /// Components l = 1 … ⌊L/2⌋.
    pub harmonics: Vec<Harmonic>,
}

impl SpectrumResult {
    /// Period of component `l` in samples (years), L / l.
    pub fn period(&self, l: usize) -> f64 {
        self.length as f64 / l as f64
    }

    /// Value of the Fourier sum at sample index `w`.
    pub fn evaluate(&self, w: usize) -> f64 {
        let len = self.length;
        self.harmonics.iter().fold(self.constant, |acc, h| {
            let angle = phase(h.l, w, len);
            acc + h.b * angle.cos() + h.d * angle.sin()
        })
    }
}

/// 2πlw/L with the product reduced mod L first.
#[inline]
fn phase(l: usize, w: usize, len: usize) -> f64 {
    2.0 * PI * ((l * w) % len) as f64 / len as f64
}

pub fn dft(series: &TimeSeries) -> SpectrumResult {
    let x = series.values();
    let len = x.len();
    let n = len as f64;
    let constant = x.iter().sum::<f64>() / n;
    let harmonics = (1..=len / 2)
        .map(|l| {
            let nyquist = 2 * l == len;
            let weight = if nyquist { 1.0 / n } else { 2.0 / n };
            let (mut b, mut d) = (0.0, 0.0);
            for (w, &v) in x.iter().enumerate() {
                let angle = phase(l, w, len);
                b += v * angle.cos();
                d += v * angle.sin();
            }
            let b = weight * b;
            let d = if nyquist { 0.0 } else { weight * d };
            Harmonic {
                l,
                b,
                d,
                c: b.hypot(d),
            }
        })
        .collect();
    SpectrumResult {
        length: len,
        constant,
        harmonics,
    }
}

/// Evaluates the Fourier sum at w = 0 … L−1. The result starts at year 0.
pub fn inverse_dft(spectrum: &SpectrumResult, length: usize) -> Result<TimeSeries> {
    if spectrum.length != length || spectrum.harmonics.len() != length / 2 {
        return Err(Error::ShapeMismatch(format!(
            "spectrum with {} components for length {} evaluated at length {length}",
            spectrum.harmonics.len(),
            spectrum.length
        )));
    }
    if let Some((i, h)) = spectrum.harmonics.iter().enumerate().find(|(i, h)| h.l != i + 1) {
        return Err(Error::ShapeMismatch(format!(
            "component {i} has frequency index {}",
            h.l
        )));
    }
    TimeSeries::new(0, (0..length).map(|w| spectrum.evaluate(w)).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpectrum {
    pub label: String,
    pub spectrum: SpectrumResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupSpectra {
    pub axis: Axis,
    pub groups: Vec<GroupSpectrum>,
    /// Spectrum of the national synergy series.
    pub aggregate: SpectrumResult,
}

/// Per-group contribution series over the panel years, one row per group.
pub fn contribution_series(panel: &PanelSeries, axis: Axis) -> Result<Vec<Vec<f64>>> {
    let decs = decompose_panel(panel, axis)?;
    let groups = panel.labels(axis).len();
    Ok((0..groups)
        .map(|g| decs.iter().map(|d| d.contributions[g]).collect())
        .collect())
}

pub fn group_spectra(panel: &PanelSeries, axis: Axis) -> Result<GroupSpectra> {
    let start = panel.start_year();
    let national = TimeSeries::new(start, panel.synergy_series()?)?;
    let groups = panel
        .labels(axis)
        .iter()
        .zip(contribution_series(panel, axis)?)
        .map(|(label, series)| {
            Ok(GroupSpectrum {
                label: label.clone(),
                spectrum: dft(&TimeSeries::new(start, series)?),
            })
        })
        .collect::<Result<_>>()?;
    Ok(GroupSpectra {
        axis,
        groups,
        aggregate: dft(&national),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LineEntry {
    pub label: String,
    /// Mean contribution over the panel years, bits.
    pub mean: f64,
}

/// Per-group mean synergy over all panel years (the constant terms of the
/// group spectra).
pub fn line_specter(panel: &PanelSeries, axis: Axis) -> Result<Vec<LineEntry>> {
    let n = panel.len() as f64;
    Ok(panel
        .labels(axis)
        .iter()
        .zip(contribution_series(panel, axis)?)
        .map(|(label, s)| LineEntry {
            label: label.clone(),
            mean: s.iter().sum::<f64>() / n,
        })
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyFit {
    pub l: usize,
    pub period: f64,
    /// Per-group C_l (x) and |mean synergy| (y), bits.
    pub points: Vec<(f64, f64)>,
    pub fit: Option<PolyFit>,
    /// Why `fit` is absent.
    pub error: Option<String>,
}

/// For every frequency l, fits |mean synergy| of each group against the
/// group's amplitude C_l with a polynomial of the given degree.
pub fn amplitude_fits(spectra: &GroupSpectra, degree: usize) -> Vec<FrequencyFit> {
    let aggregate = &spectra.aggregate;
    aggregate
        .harmonics
        .iter()
        .map(|h| {
            let points: Vec<(f64, f64)> = spectra
                .groups
                .iter()
                .map(|g| (g.spectrum.harmonics[h.l - 1].c, g.spectrum.constant.abs()))
                .collect();
            let (x, y): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
            let (fit, error) = match polyfit(&x, &y, degree) {
                Ok(f) => (Some(f), None),
                Err(e) => (None, Some(e.to_string())),
            };
            FrequencyFit {
                l: h.l,
                period: aggregate.period(h.l),
                points,
                fit,
                error,
            }
        })
        .collect()
}
