mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use trihelix::spectral::contribution_series;
use trihelix::{dft, group_spectra, inverse_dft, line_specter, polyfit, Axis, ContingencyTensor, PanelSeries, TimeSeries};

fn series(v: Vec<f64>) -> TimeSeries {
    TimeSeries::new(2002, v).unwrap()
}

fn random_values(r: &mut impl Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| r.gen_range(-5.0..5.0)).collect()
}

#[test]
fn matches_naive_oracle() {
    let mut r = rng(20);
    for _ in 0..300 {
        let len = r.gen_range(2..=40);
        let x = random_values(&mut r, len);
        let s = dft(&series(x.clone()));
        let (a, bd) = dft_oracle(&x);
        assert!(close(s.constant, a, 1e-12));
        assert_eq!(s.harmonics.len(), bd.len());
        for (h, (b, d)) in s.harmonics.iter().zip(bd) {
            assert!(close(h.b, b, 1e-10) && close(h.d, d, 1e-10));
            assert!(close(h.c, b.hypot(d), 1e-10));
        }
    }
}

#[test]
fn thirteen_years_six_components() {
    let mut r = rng(21);
    let x = random_values(&mut r, 13);
    let s = dft(&series(x.clone()));
    assert_eq!(s.harmonics.iter().map(|h| h.l).collect::<Vec<_>>(), vec![1, 2, 3, 4, 5, 6]);
    let back = inverse_dft(&s, 13).unwrap();
    for (a, b) in back.values().iter().zip(&x) {
        assert!(close(*a, *b, 1e-10));
    }
}

#[test]
fn single_cosine_component() {
    let x: Vec<f64> = (0..8).map(|w| 2.0 * (4.0 * std::f64::consts::PI * w as f64 / 8.0).cos()).collect();
    let s = dft(&series(x));
    for h in &s.harmonics {
        let want = if h.l == 2 { 2.0 } else { 0.0 };
        assert!(close(h.b, want, 1e-12) && close(h.d, 0.0, 1e-12));
    }
}

fn parseval_gap(x: &[f64]) -> f64 {
    let s = dft(&series(x.to_vec()));
    let l = x.len();
    let lhs = x.iter().map(|v| v * v).sum::<f64>() / l as f64;
    let mut rhs = s.constant * s.constant;
    for h in &s.harmonics {
        rhs += if 2 * h.l == l { h.b * h.b } else { (h.b * h.b + h.d * h.d) / 2.0 };
    }
    (lhs - rhs).abs()
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn linearity(x in prop::collection::vec(-10.0f64..10.0, 2..40), a in -3.0f64..3.0, b in -3.0f64..3.0, seed in any::<u64>()) {
        let mut r = rng(seed);
        let y = random_values(&mut r, x.len());
        let z: Vec<f64> = x.iter().zip(&y).map(|(p, q)| a * p + b * q).collect();
        let (sx, sy, sz) = (dft(&series(x)), dft(&series(y)), dft(&series(z)));
        prop_assert!(close(sz.constant, a * sx.constant + b * sy.constant, 1e-10));
        for ((hz, hx), hy) in sz.harmonics.iter().zip(&sx.harmonics).zip(&sy.harmonics) {
            prop_assert!(close(hz.b, a * hx.b + b * hy.b, 1e-10));
            prop_assert!(close(hz.d, a * hx.d + b * hy.d, 1e-10));
        }
    }

    #[test]
    fn round_trip(x in prop::collection::vec(-100.0f64..100.0, 2..=64)) {
        let back = inverse_dft(&dft(&series(x.clone())), x.len()).unwrap();
        for (a, b) in back.values().iter().zip(&x) {
            prop_assert!(rel_close(*a, *b, 1e-10));
        }
    }

    #[test]
    fn parseval(x in prop::collection::vec(-10.0f64..10.0, 2..=64)) {
        prop_assert!(parseval_gap(&x) <= 1e-9);
    }

    #[test]
    fn circular_shift_keeps_amplitudes(x in prop::collection::vec(-10.0f64..10.0, 2..=64), k in 0usize..64) {
        let mut y = x.clone();
        y.rotate_left(k % x.len());
        let (sx, sy) = (dft(&series(x)), dft(&series(y)));
        for (a, b) in sx.harmonics.iter().zip(&sy.harmonics) {
            prop_assert!(close(a.c, b.c, 1e-10));
        }
    }

    #[test]
    fn residuals_orthogonal_to_basis(x in prop::collection::vec(-2.0f64..2.0, 6..30), degree in 1usize..4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let y = random_values(&mut r, x.len());
        prop_assume!(polyfit(&x, &y, degree).is_ok());
        let f = polyfit(&x, &y, degree).unwrap();
        for p in 0..=degree {
            let dot: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - f.evaluate(*xi)) * xi.powi(p as i32)).sum();
            prop_assert!(dot.abs() <= 1e-8, "power {p}: {dot}");
        }
    }
}

fn group_panel(r: &mut impl Rng, groups: usize, years: usize) -> PanelSeries {
    let tensors = (0..years)
        .map(|_| {
            let c: Vec<u64> = (0..groups * 3 * 4).map(|_| r.gen_range(1..30)).collect();
            ContingencyTensor::from_counts([groups, 3, 4], c).unwrap()
        })
        .collect();
    PanelSeries::new((2002..).take(years).collect(), tensors).unwrap()
}

#[test]
fn aggregate_is_sum_of_groups() {
    let mut r = rng(22);
    for _ in 0..100 {
        let groups = r.gen_range(1..6);
        let panel = group_panel(&mut r, groups, 13);
        for axis in [Axis::Geo, Axis::Org, Axis::Tech] {
            let gs = group_spectra(&panel, axis).unwrap();
            let sum_a: f64 = gs.groups.iter().map(|g| g.spectrum.constant).sum();
            assert!(close(sum_a, gs.aggregate.constant, 1e-9));
            for (i, h) in gs.aggregate.harmonics.iter().enumerate() {
                let b: f64 = gs.groups.iter().map(|g| g.spectrum.harmonics[i].b).sum();
                let d: f64 = gs.groups.iter().map(|g| g.spectrum.harmonics[i].d).sum();
                assert!(close(b, h.b, 1e-9) && close(d, h.d, 1e-9));
            }
        }
    }
}

#[test]
fn single_group_spectrum_is_aggregate() {
    let mut r = rng(23);
    let panel = group_panel(&mut r, 1, 13);
    let gs = group_spectra(&panel, Axis::Geo).unwrap();
    let g = &gs.groups[0].spectrum;
    assert!(close(g.constant, gs.aggregate.constant, 1e-12));
    for (a, b) in g.harmonics.iter().zip(&gs.aggregate.harmonics) {
        assert!(close(a.b, b.b, 1e-12) && close(a.d, b.d, 1e-12));
    }
}

#[test]
fn opposite_groups_cancel_in_sum() {
    let x = [1.0, -2.0, 0.5, 3.0, -1.0, 0.0, 2.0];
    let neg: Vec<f64> = x.iter().map(|v| -v).collect();
    let (sx, sn) = (dft(&series(x.to_vec())), dft(&series(neg)));
    assert!(close(sx.constant + sn.constant, 0.0, 1e-15));
    for (a, b) in sx.harmonics.iter().zip(&sn.harmonics) {
        assert!(close(a.b + b.b, 0.0, 1e-15) && close(a.c, b.c, 1e-15));
    }
}

#[test]
fn line_specter_equals_constant_terms() {
    let mut r = rng(24);
    let panel = group_panel(&mut r, 4, 9);
    let gs = group_spectra(&panel, Axis::Geo).unwrap();
    let ls = line_specter(&panel, Axis::Geo).unwrap();
    let cs = contribution_series(&panel, Axis::Geo).unwrap();
    for ((entry, g), s) in ls.iter().zip(&gs.groups).zip(&cs) {
        assert_eq!(entry.label, g.label);
        assert!(close(entry.mean, g.spectrum.constant, 1e-12));
        assert!(close(entry.mean, s.iter().sum::<f64>() / s.len() as f64, 1e-12));
    }
}

#[test]
fn polyfit_recovers_exact_polynomials() {
    let mut r = rng(25);
    for degree in 1..=4 {
        let coeffs: Vec<f64> = (0..=degree).map(|_| r.gen_range(-3.0..3.0)).collect();
        let x: Vec<f64> = (0..12).map(|i| -1.5 + 0.27 * i as f64).collect();
        let y: Vec<f64> = x.iter().map(|&v| coeffs.iter().rev().fold(0.0, |acc, c| acc * v + c)).collect();
        let f = polyfit(&x, &y, degree).unwrap();
        for (a, b) in f.coefficients.iter().zip(&coeffs) {
            assert!(close(*a, *b, 1e-10), "degree {degree}: {a} vs {b}");
        }
        assert!(close(f.r_squared, 1.0, 1e-12));
    }
}

#[test]
fn polyfit_matches_normal_equations() {
    let mut r = rng(26);
    for _ in 0..200 {
        let degree = r.gen_range(1..=3);
        let n = r.gen_range(degree + 2..25);
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.5 - 1.2 * v + 0.3 * v * v + r.gen_range(-0.2..0.2)).collect();
        let f = polyfit(&x, &y, degree).unwrap();
        let o = normal_equations(&x, &y, degree);
        for (a, b) in f.coefficients.iter().zip(&o) {
            assert!(close(*a, *b, 1e-8), "{a} vs {b}");
        }
        let mean = y.iter().sum::<f64>() / n as f64;
        let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        let ss_res: f64 = x.iter().zip(&y).map(|(xi, yi)| (yi - f.evaluate(*xi)).powi(2)).sum();
        assert!(close(f.r_squared, 1.0 - ss_res / ss_tot, 1e-10));
    }
}
