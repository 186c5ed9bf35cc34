//! Rescaled-range (R/S) analysis and the Hurst exponent.
//!
//! For every prefix length t = 2 … N the cumulative deviate range R_t is
//! divided by the population standard deviation S_t of the first t values;
//! H is the slope of ln(R/S)_t against ln t.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::TimeSeries;

/// Half-width of the band around 0.5 classified as a random series.
pub const RANDOM_BAND: f64 = 0.05;

/// Mean subtracted before accumulating the deviate series Z_t.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeanMode {
    /// Mean of the first t values, the same mean S_t is taken about.
    #[default]
    Prefix,
    /// Mean of the whole series for every t.
    FullSeries,
}

impl std::str::FromStr for MeanMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "prefix" => Ok(MeanMode::Prefix),
            "full" | "full-series" => Ok(MeanMode::FullSeries),
            other => Err(Error::Schema(format!("unknown mean mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RsPoint {
    pub t: usize,
    pub range: f64,
    pub std_dev: f64,
    /// (R/S)_t
    pub rs: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Persistence {
    AntiPersistent,
    Random,
    Persistent,
}

impl Persistence {
    pub fn classify(h: f64) -> Self {
        if (h - 0.5).abs() <= RANDOM_BAND {
            Persistence::Random
        } else if h < 0.5 {
            Persistence::AntiPersistent
        } else {
            Persistence::Persistent
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Persistence::AntiPersistent => "anti-persistent",
            Persistence::Random => "random",
            Persistence::Persistent => "persistent",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HurstResult {
    pub h: f64,
    /// ln C in (R/S)_t = C·t^H.
    pub intercept: f64,
    pub r_squared: f64,
    pub mean_mode: MeanMode,
    pub points: Vec<RsPoint>,
    pub classification: Persistence,
}

/// (R/S)_t for t = 2 … N. Points where S_t or R_t is zero are left out, as
/// their logarithm is undefined.
pub fn rescaled_range(series: &TimeSeries, mode: MeanMode) -> Result<Vec<RsPoint>> {
    let x = series.values();
    let n = x.len();
    if n < 3 {
        return Err(Error::SeriesTooShort { len: n, min: 3 });
    }
    let full_mean = x.iter().sum::<f64>() / n as f64;
    let mut points = Vec::with_capacity(n - 1);
    let mut prefix_sum = 0.0;
    for t in 1..=n {
        prefix_sum += x[t - 1];
        if t < 2 {
            continue;
        }
        let prefix = &x[..t];
        let prefix_mean = prefix_sum / t as f64;
        let m = match mode {
            MeanMode::Prefix => prefix_mean,
            MeanMode::FullSeries => full_mean,
        };
        let (mut z, mut lo, mut hi) = (0.0, f64::INFINITY, f64::NEG_INFINITY);
        for v in prefix {
            z += v - m;
            lo = lo.min(z);
            hi = hi.max(z);
        }
        let range = hi - lo;
        let var = prefix.iter().map(|v| (v - prefix_mean).powi(2)).sum::<f64>() / t as f64;
        let std_dev = var.sqrt();
        if std_dev == 0.0 || range == 0.0 {
            continue;
        }
        points.push(RsPoint {
            t,
            range,
            std_dev,
            rs: range / std_dev,
        });
    }
    if points.len() < 2 {
        return Err(Error::DegenerateSeries(format!(
            "{} usable R/S points (need 2)",
            points.len()
        )));
    }
    Ok(points)
}

pub fn hurst_exponent(series: &TimeSeries) -> Result<HurstResult> {
    hurst_exponent_with(series, MeanMode::default())
}

pub fn hurst_exponent_with(series: &TimeSeries, mode: MeanMode) -> Result<HurstResult> {
    let points = rescaled_range(series, mode)?;
    let (slope, intercept, r_squared) = log_log_fit(&points);
    Ok(HurstResult {
        h: slope,
        intercept,
        r_squared,
        mean_mode: mode,
        classification: Persistence::classify(slope),
        points,
    })
}

/// OLS of ln(rs) on ln(t): (slope, intercept, R²).
pub fn log_log_fit(points: &[RsPoint]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| (p.t as f64).ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.rs.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = ly.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    (slope, intercept, r_squared)
}
