//! Least-squares polynomial fits, solved by Householder QR on the
//! Vandermonde matrix.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyFit {
    pub degree: usize,
    /// Ascending powers: y ≈ c0 + c1·x + c2·x² + …
    pub coefficients: Vec<f64>,
    pub r_squared: f64,
}

impl PolyFit {
    pub fn evaluate(&self, x: f64) -> f64 {
        self.coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
    }
}

/// Relative size of an R diagonal entry below which the design matrix is
/// treated as rank deficient.
const RANK_TOLERANCE: f64 = 1e-12;

pub fn polyfit(x: &[f64], y: &[f64], degree: usize) -> Result<PolyFit> {
    if x.len() != y.len() {
        return Err(Error::ShapeMismatch(format!("{} x values, {} y values", x.len(), y.len())));
    }
    if degree == 0 {
        return Err(Error::InsufficientPoints { points: x.len(), degree });
    }
    if let Some(i) = x.iter().chain(y).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(i % x.len().max(1)));
    }
    let rows = x.len();
    let cols = degree + 1;
    if rows < cols {
        return Err(Error::InsufficientPoints { points: rows, degree });
    }

    // column-major Vandermonde
    let mut a = vec![0.0; rows * cols];
    for (r, &xv) in x.iter().enumerate() {
        let mut p = 1.0;
        for c in 0..cols {
            a[c * rows + r] = p;
            p *= xv;
        }
    }
    let mut rhs = y.to_vec();
    let col_norm = |a: &[f64], c: usize| a[c * rows..(c + 1) * rows].iter().map(|v| v * v).sum::<f64>().sqrt();
    let scale = (0..cols).map(|c| col_norm(&a, c)).fold(0.0, f64::max);

    for k in 0..cols {
        let norm = a[k * rows + k..(k + 1) * rows].iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm <= RANK_TOLERANCE * scale {
            return Err(Error::SingularFit(format!("column {k} is linearly dependent")));
        }
        let alpha = if a[k * rows + k] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = a[k * rows + k..(k + 1) * rows].to_vec();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|e| e * e).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let reflect = |col: &mut [f64]| {
            let dot: f64 = v.iter().zip(col.iter()).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / vnorm2;
            for (c, vi) in col.iter_mut().zip(&v) {
                *c -= f * vi;
            }
        };
        for c in k..cols {
            reflect(&mut a[c * rows + k..(c + 1) * rows]);
        }
        reflect(&mut rhs[k..]);
    }

    let mut coefficients = vec![0.0; cols];
    for k in (0..cols).rev() {
        let mut s = rhs[k];
        for c in k + 1..cols {
            s -= a[c * rows + k] * coefficients[c];
        }
        coefficients[k] = s / a[k * rows + k];
    }

    let fit = PolyFit {
        degree,
        coefficients,
        r_squared: 0.0,
    };
    let mean = y.iter().sum::<f64>() / rows as f64;
    let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
    let ss_res: f64 = x.iter().zip(y).map(|(&xv, &yv)| (yv - fit.evaluate(xv)).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 || ss_res == 0.0 { 1.0 } else { 1.0 - ss_res / ss_tot };
    Ok(PolyFit { r_squared, ..fit })
}
