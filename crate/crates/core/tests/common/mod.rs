#![allow(dead_code, clippy::needless_range_loop)]

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use trihelix::{ContingencyTensor, PanelSeries};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn idx(shape: [usize; 3], i: usize, j: usize, k: usize) -> usize {
    (i * shape[1] + j) * shape[2] + k
}

pub fn random_tensor(rng: &mut impl Rng, max: [usize; 3], max_count: u64, zero_rate: f64) -> ContingencyTensor {
    let shape = [rng.gen_range(1..=max[0]), rng.gen_range(1..=max[1]), rng.gen_range(1..=max[2])];
    loop {
        let counts: Vec<u64> = (0..shape.iter().product::<usize>())
            .map(|_| if rng.gen_bool(zero_rate) { 0 } else { rng.gen_range(0..=max_count) })
            .collect();
        if counts.iter().any(|&c| c > 0) {
            return ContingencyTensor::from_counts(shape, counts).unwrap();
        }
    }
}

pub fn random_panel(rng: &mut impl Rng, years: usize, max: [usize; 3], max_count: u64) -> PanelSeries {
    let shape = [rng.gen_range(1..=max[0]), rng.gen_range(1..=max[1]), rng.gen_range(1..=max[2])];
    let tensors = (0..years)
        .map(|_| loop {
            let counts: Vec<u64> = (0..shape.iter().product::<usize>()).map(|_| rng.gen_range(0..=max_count)).collect();
            if counts.iter().any(|&c| c > 0) {
                break ContingencyTensor::from_counts(shape, counts).unwrap();
            }
        })
        .collect();
    PanelSeries::new((0..years as i32).map(|y| 2002 + y).collect(), tensors).unwrap()
}

pub fn tensor_strategy(max_dim: usize, max_count: u64) -> impl Strategy<Value = ContingencyTensor> {
    (1..=max_dim, 1..=max_dim, 1..=max_dim)
        .prop_flat_map(move |(a, b, c)| (Just([a, b, c]), prop::collection::vec(0..=max_count, a * b * c)))
        .prop_filter("non-empty", |(_, v)| v.iter().any(|&c| c > 0))
        .prop_map(|(shape, v)| ContingencyTensor::from_counts(shape, v).unwrap())
}

/// −Σ p ln p / ln 2 over a flat list of counts, zeros skipped.
pub fn h_counts(counts: &[f64]) -> f64 {
    let n: f64 = counts.iter().sum();
    -counts
        .iter()
        .filter(|&&c| c > 0.0)
        .map(|&c| (c / n) * (c / n).ln())
        .sum::<f64>()
        / std::f64::consts::LN_2
}

/// Seven entropies from raw counts: [h1,h2,h3,h12,h13,h23,h123].
pub fn entropies_oracle(t: &ContingencyTensor) -> [f64; 7] {
    let [a, b, c] = t.shape();
    let (mut m1, mut m2, mut m3) = (vec![0.0; a], vec![0.0; b], vec![0.0; c]);
    let (mut m12, mut m13, mut m23) = (vec![0.0; a * b], vec![0.0; a * c], vec![0.0; b * c]);
    let mut all = Vec::new();
    for i in 0..a {
        for j in 0..b {
            for k in 0..c {
                let v = t.get(i, j, k) as f64;
                m1[i] += v;
                m2[j] += v;
                m3[k] += v;
                m12[i * b + j] += v;
                m13[i * c + k] += v;
                m23[j * c + k] += v;
                all.push(v);
            }
        }
    }
    [h_counts(&m1), h_counts(&m2), h_counts(&m3), h_counts(&m12), h_counts(&m13), h_counts(&m23), h_counts(&all)]
}

pub fn synergy_oracle(t: &ContingencyTensor) -> f64 {
    let h = entropies_oracle(t);
    h[0] + h[1] + h[2] - h[3] - h[4] - h[5] + h[6]
}

pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

/// Naive double-loop transform: (A, [(B_l, D_l)]) for l = 1..=L/2.
pub fn dft_oracle(x: &[f64]) -> (f64, Vec<(f64, f64)>) {
    let n = x.len();
    let a = x.iter().sum::<f64>() / n as f64;
    let mut out = Vec::new();
    for l in 1..=n / 2 {
        let nyquist = 2 * l == n;
        let weight = if nyquist { 1.0 } else { 2.0 } / n as f64;
        let (mut b, mut d) = (0.0, 0.0);
        for (w, v) in x.iter().enumerate() {
            let phase = 2.0 * std::f64::consts::PI * (l * w) as f64 / n as f64;
            b += v * phase.cos();
            d += v * phase.sin();
        }
        out.push((b * weight, if nyquist { 0.0 } else { d * weight }));
    }
    (a, out)
}

/// Least squares via the normal equations solved by Gaussian elimination
/// with partial pivoting. Coefficients ascending.
pub fn normal_equations(x: &[f64], y: &[f64], degree: usize) -> Vec<f64> {
    let m = degree + 1;
    let mut a = vec![vec![0.0; m + 1]; m];
    for (&xi, &yi) in x.iter().zip(y) {
        for r in 0..m {
            for c in 0..m {
                a[r][c] += xi.powi((r + c) as i32);
            }
            a[r][m] += yi * xi.powi(r as i32);
        }
    }
    for col in 0..m {
        let piv = (col..m).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).unwrap();
        a.swap(col, piv);
        for r in 0..m {
            if r != col {
                let f = a[r][col] / a[col][col];
                for c in col..=m {
                    a[r][c] -= f * a[col][c];
                }
            }
        }
    }
    (0..m).map(|r| a[r][m] / a[r][r]).collect()
}

/// Step-by-step R/S table with prefix means: (t, R, S).
pub fn rs_oracle(x: &[f64]) -> Vec<(usize, f64, f64)> {
    let mut rows = Vec::new();
    for t in 2..=x.len() {
        let p = &x[..t];
        let mean = p.iter().sum::<f64>() / t as f64;
        let mut z = Vec::with_capacity(t);
        let mut acc = 0.0;
        for v in p {
            acc += v - mean;
            z.push(acc);
        }
        let r = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - z.iter().cloned().fold(f64::INFINITY, f64::min);
        let s = (p.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / t as f64).sqrt();
        rows.push((t, r, s));
    }
    rows
}

pub fn write_long_csv(panel: &PanelSeries) -> String {
    let mut s = String::from("year,geo,org,tech,count\n");
    for (year, t) in panel.iter() {
        let [a, b, c] = t.shape();
        for i in 0..a {
            for j in 0..b {
                for k in 0..c {
                    s.push_str(&format!(
                        "{year},{},{},{},{}\n",
                        t.labels(trihelix::Axis::Geo)[i],
                        t.labels(trihelix::Axis::Org)[j],
                        t.labels(trihelix::Axis::Tech)[k],
                        t.get(i, j, k)
                    ));
                }
            }
        }
    }
    s
}

pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
