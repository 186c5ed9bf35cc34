//! Writes the bundled synthetic panel: 13 years (2002-2014) of firm counts
//! over 19 regions, 8 size classes and 10 technology classes, with a
//! three-way interaction whose strength oscillates over the years.
//!
//! cargo run -p trihelix --example synthetic_panel > crates/core/data/synthetic_panel.csv

#![allow(clippy::needless_range_loop)]

use std::f64::consts::PI;
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_020_214;
const YEARS: std::ops::RangeInclusive<i32> = 2002..=2014;
const GEO: usize = 19;
const ORG: usize = 8;
const TECH: usize = 10;
const FIRMS_PER_YEAR: f64 = 150_000.0;

fn sign(i: usize) -> f64 {
    if i.is_multiple_of(2) { 1.0 } else { -1.0 }
}

fn main() -> io::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let geo_w: Vec<f64> = (0..GEO).map(|_| rng.gen_range(0.3..3.0)).collect();
    let org_w: Vec<f64> = (0..ORG).map(|i| 2.0f64.powi(-(i as i32)) + 0.02).collect();
    let tech_w: Vec<f64> = (0..TECH).map(|_| rng.gen_range(0.5..2.0)).collect();
    let norm = geo_w.iter().sum::<f64>() * org_w.iter().sum::<f64>() * tech_w.iter().sum::<f64>();

    let out = io::stdout();
    let mut out = io::BufWriter::new(out.lock());
    writeln!(out, "year,geo,org,tech,count")?;
    for year in YEARS {
        let k = (year - YEARS.start()) as f64;
        let coupling = 0.45 + 0.3 * (2.0 * PI * k / 3.25).sin() + 0.1 * (2.0 * PI * k / 6.5).cos();
        let growth = 1.0 + 0.02 * k;
        for g in 0..GEO {
            for o in 0..ORG {
                for t in 0..TECH {
                    let base = geo_w[g] * org_w[o] * tech_w[t] / norm;
                    let inter = 1.0 + coupling * sign(g) * sign(o) * sign(t);
                    let noise = rng.gen_range(0.85..1.15);
                    let count = (FIRMS_PER_YEAR * growth * base * inter * noise).round() as u64;
                    writeln!(out, "{year},county{:02},size{},{},{}", g + 1, o + 1, t + 1, count)?;
                }
            }
        }
    }
    out.flush()
}
