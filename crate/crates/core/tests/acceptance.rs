//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the summary is printed on every `cargo test`.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use common::*;
use rand::Rng;
use trihelix::{
    apply_crosswalk, decompose, dft, group_spectra, hurst_exponent, inverse_dft, polyfit, synergy_3d,
    transmission_power, Axis, ContingencyTensor, Crosswalk, PanelSeries, ProbabilityModel, RevisionSchedule,
    TimeSeries,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    check(elapsed < limit, format!("runtime {elapsed:?} exceeds {limit:?}"))
}

fn xor_parity() -> Outcome {
    let start = Instant::now();
    let mut joint = vec![0.0; 8];
    for i in 0..2 {
        for j in 0..2 {
            joint[(i * 2 + j) * 2 + (i ^ j)] = 0.25;
        }
    }
    let m = ProbabilityModel::from_joint([2, 2, 2], joint).map_err(|e| e.to_string())?;
    let t = synergy_3d(&m);
    let tau = transmission_power(&m.entropy_set()).map_err(|e| e.to_string())?.tau;
    let elapsed = start.elapsed();
    check(close(t, -1.0, 1e-12), format!("T = {t}"))?;
    check(close(tau, 1.0, 1e-12), format!("tau = {tau}"))?;
    within(elapsed, Duration::from_millis(1))?;
    Ok(format!("T = {t}, tau = {tau}, {elapsed:?}"))
}

fn independence() -> Outcome {
    let mut r = rng(101);
    let (mut worst_rounded, mut worst_exact) = (0.0f64, 0.0f64);
    for _ in 0..500 {
        let shape = [r.gen_range(1..=6), r.gen_range(1..=6), r.gen_range(1..=6)];
        let marg: Vec<Vec<u64>> = shape.iter().map(|&n| (0..n).map(|_| r.gen_range(1..=20)).collect()).collect();
        let n_total: f64 = r.gen_range(1e4..=1e6);
        let mass: Vec<f64> = marg.iter().map(|m| m.iter().sum::<u64>() as f64).collect();
        let (mut exact, mut rounded) = (Vec::new(), Vec::new());
        for &a in &marg[0] {
            for &b in &marg[1] {
                for &c in &marg[2] {
                    exact.push(a * b * c);
                    let p = a as f64 / mass[0] * b as f64 / mass[1] * c as f64 / mass[2];
                    rounded.push((p * n_total).round() as u64);
                }
            }
        }
        let te = synergy_3d(&ContingencyTensor::from_counts(shape, exact).unwrap().probabilities().unwrap());
        let tr = synergy_3d(&ContingencyTensor::from_counts(shape, rounded).unwrap().probabilities().unwrap());
        worst_exact = worst_exact.max(te.abs());
        worst_rounded = worst_rounded.max(tr.abs());
    }
    check(worst_exact <= 1e-12, format!("exact products: max |T| = {worst_exact:e}"))?;
    check(worst_rounded <= 5e-3, format!("rounded counts: max |T| = {worst_rounded:e}"))?;
    Ok(format!("max |T| exact {worst_exact:.1e}, rounded {worst_rounded:.1e}"))
}

fn additivity() -> Outcome {
    let start = Instant::now();
    let mut r = rng(102);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let t = random_tensor(&mut r, [19, 8, 10], 50, 0.3);
        for axis in [Axis::Geo, Axis::Org, Axis::Tech] {
            let d = decompose(&t, axis).map_err(|e| e.to_string())?;
            worst = worst.max((d.contributions.iter().sum::<f64>() - d.total).abs());
        }
    }
    let elapsed = start.elapsed();
    check(worst <= 1e-9, format!("max |sum - T| = {worst:e}"))?;
    within(elapsed, Duration::from_secs(10))?;
    Ok(format!("max |sum T_g - T| = {worst:.1e}, {elapsed:?}"))
}

fn dft_round_trip() -> Outcome {
    let mut r = rng(103);
    let (mut worst_rt, mut worst_p) = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        let len = r.gen_range(2..=64);
        let x: Vec<f64> = (0..len).map(|_| r.gen_range(-10.0..10.0)).collect();
        let s = dft(&TimeSeries::new(0, x.clone()).unwrap());
        let back = inverse_dft(&s, len).map_err(|e| e.to_string())?;
        let scale = x.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for (a, b) in back.values().iter().zip(&x) {
            worst_rt = worst_rt.max((a - b).abs() / scale);
        }
        let lhs = x.iter().map(|v| v * v).sum::<f64>() / len as f64;
        let rhs = s.constant * s.constant
            + s.harmonics
                .iter()
                .map(|h| if 2 * h.l == len { h.b * h.b } else { (h.b * h.b + h.d * h.d) / 2.0 })
                .sum::<f64>();
        worst_p = worst_p.max((lhs - rhs).abs());
    }
    let six = dft(&TimeSeries::new(2002, (0..13).map(|i| (i * i % 7) as f64).collect()).unwrap()).harmonics.len();
    check(worst_rt <= 1e-10, format!("round trip error {worst_rt:e}"))?;
    check(worst_p <= 1e-9, format!("Parseval gap {worst_p:e}"))?;
    check(six == 6, format!("L = 13 gives {six} components"))?;
    Ok(format!("round trip {worst_rt:.1e}, Parseval {worst_p:.1e}, L=13 -> {six} components"))
}

fn spectral_linearity() -> Outcome {
    let mut r = rng(104);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let groups = r.gen_range(2..=6);
        let years = r.gen_range(4..=16);
        let tensors = (0..years)
            .map(|_| {
                let c = (0..groups * 4 * 3).map(|_| r.gen_range(0..40)).collect();
                ContingencyTensor::from_counts([groups, 4, 3], c).unwrap()
            })
            .filter(|t| t.total() > 0)
            .collect::<Vec<_>>();
        let panel = PanelSeries::new((2000..).take(tensors.len()).collect(), tensors).unwrap();
        let gs = group_spectra(&panel, Axis::Geo).map_err(|e| e.to_string())?;
        worst = worst.max((gs.groups.iter().map(|g| g.spectrum.constant).sum::<f64>() - gs.aggregate.constant).abs());
        for (i, h) in gs.aggregate.harmonics.iter().enumerate() {
            let b: f64 = gs.groups.iter().map(|g| g.spectrum.harmonics[i].b).sum();
            let d: f64 = gs.groups.iter().map(|g| g.spectrum.harmonics[i].d).sum();
            worst = worst.max((b - h.b).abs()).max((d - h.d).abs());
        }
    }
    check(worst <= 1e-9, format!("max coefficient gap {worst:e}"))?;
    Ok(format!("max coefficient gap {worst:.1e}"))
}

fn hurst_calibration() -> Outcome {
    let start = Instant::now();
    let h = |v: Vec<f64>| hurst_exponent(&TimeSeries::new(0, v).unwrap()).map(|r| r.h).map_err(|e| e.to_string());
    let alt = h((0..64).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect())?;
    let ramp = h((1..=64).map(f64::from).collect())?;
    let mut r = rng(105);
    let mut noise = (0..200)
        .map(|_| h((0..256).map(|_| r.gen::<f64>()).collect()))
        .collect::<Result<Vec<_>, _>>()?;
    noise.sort_by(f64::total_cmp);
    let median = (noise[99] + noise[100]) / 2.0;
    let elapsed = start.elapsed();
    check(alt < 0.15, format!("alternating H = {alt}"))?;
    check(ramp > 0.85, format!("ramp H = {ramp}"))?;
    check((0.40..=0.65).contains(&median), format!("noise median H = {median}"))?;
    use trihelix::hurst::Persistence;
    check(
        Persistence::classify(0.0655) == Persistence::AntiPersistent
            && Persistence::classify(0.5) == Persistence::Random
            && Persistence::classify(0.9) == Persistence::Persistent,
        "classification bands",
    )?;
    within(elapsed, Duration::from_secs(5))?;
    Ok(format!("alternating {alt:.4}, ramp {ramp:.4}, noise median {median:.4}, {elapsed:?}"))
}

const SPOT: &[(&str, &str, &str)] = &[
    ("rev1.1", "45", "3"),
    ("rev1.1", "70", "7"),
    ("rev1.1", "74.14", "1"),
    ("rev1.1", "92.72", "1"),
    ("rev1.1", "1", "1"),
    ("rev1.1", "02", "1"),
    ("rev1.1", "05", "1"),
    ("rev1.1", "01.13", "2"),
    ("rev1.1", "02.01", "2"),
    ("rev1.1", "10", "2"),
    ("rev1.1", "15", "2"),
    ("rev1.1", "41", "2"),
    ("rev1.1", "51.34", "2"),
    ("rev1.1", "90.02", "2"),
    ("rev1.1", "20.30", "3"),
    ("rev1.1", "29.22", "3"),
    ("rev1.1", "70.11", "3"),
    ("rev1.1", "50", "4"),
    ("rev1.1", "63", "4"),
    ("rev1.1", "11.10", "4"),
    ("rev1.1", "64.12", "4"),
    ("rev1.1", "64", "5"),
    ("rev1.1", "72", "5"),
    ("rev1.1", "22.11", "5"),
    ("rev1.1", "92.13", "5"),
    ("rev1.1", "65", "6"),
    ("rev1.1", "67", "6"),
    ("rev1.1", "74.15", "6"),
    ("rev1.1", "71", "8"),
    ("rev1.1", "73", "8"),
    ("rev1.1", "05.01", "8"),
    ("rev1.1", "63.40", "8"),
    ("rev1.1", "85.20", "8"),
    ("rev1.1", "75", "9"),
    ("rev1.1", "80", "9"),
    ("rev1.1", "63.22", "9"),
    ("rev1.1", "93.65", "9"),
    ("rev1.1", "92", "10"),
    ("rev1.1", "91", "10"),
    ("rev1.1", "99", "10"),
    ("rev1.1", "01.50", "10"),
    ("rev1.1", "36.14", "10"),
    ("rev1.1", "52.73", "10"),
    ("rev1.1", "75.14", "10"),
    ("rev2", "A", "1"),
    ("rev2", "C", "2"),
    ("rev2", "F", "3"),
    ("rev2", "H", "4"),
    ("rev2", "J", "5"),
    ("rev2", "K", "6"),
    ("rev2", "L", "7"),
    ("rev2", "N", "8"),
    ("rev2", "P", "9"),
    ("rev2", "S", "10"),
];

fn crosswalk_fidelity() -> Outcome {
    let cw = Crosswalk::bundled();
    let wrong: Vec<String> = SPOT
        .iter()
        .filter_map(|&(rev, code, want)| match cw.resolve(rev, code) {
            Some(got) if got == want => None,
            got => Some(format!("{code} ({rev}) -> {got:?}, want {want}")),
        })
        .collect();
    check(wrong.is_empty(), wrong.join("; "))?;

    let codes: Vec<String> = SPOT.iter().filter(|s| s.0 == "rev1.1").map(|s| s.1.to_string()).collect();
    let mut r = rng(106);
    let tensors: Vec<ContingencyTensor> = (0..5)
        .map(|_| {
            let labels = [vec!["a".into(), "b".into()], vec!["x".into()], codes.clone()];
            ContingencyTensor::new(labels, (0..2 * codes.len()).map(|_| r.gen_range(0..100)).collect()).unwrap()
        })
        .collect();
    let panel = PanelSeries::new((2002..2007).collect(), tensors).unwrap();
    let mapped = apply_crosswalk(&panel, &cw, &RevisionSchedule::single("rev1.1")).map_err(|e| e.to_string())?;
    for (a, b) in panel.tensors().iter().zip(mapped.tensors()) {
        check(a.total() == b.total(), format!("total {} -> {}", a.total(), b.total()))?;
    }
    Ok(format!("{} spot codes, per-year totals preserved", SPOT.len()))
}

fn determinism() -> Outcome {
    let input = concat!(env!("CARGO_MANIFEST_DIR"), "/data/synthetic_panel.csv");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let start = Instant::now();
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_trihelix"))
            .args(["report", "--input", input, "--out", out.to_str().unwrap(), "--plots"])
            .output()
            .map_err(|e| e.to_string())?;
        check(status.status.success(), String::from_utf8_lossy(&status.stderr).to_string())?;
        outputs.push(std::fs::read(out.join("report.json")).map_err(|e| e.to_string())?);
    }
    let per_run = start.elapsed() / 2;
    check(outputs[0] == outputs[1], "report.json differs between runs")?;
    within(per_run, Duration::from_secs(5))?;
    Ok(format!("{} identical bytes, {per_run:?} per run", outputs[0].len()))
}

fn polyfit_accuracy() -> Outcome {
    let mut r = rng(107);
    let (mut worst_c, mut worst_r2, mut worst_ne) = (0.0f64, 0.0f64, 0.0f64);
    for degree in 1..=4 {
        for _ in 0..25 {
            let coeffs: Vec<f64> = (0..=degree).map(|_| r.gen_range(-5.0..5.0)).collect();
            let x: Vec<f64> = (0..15).map(|i| -2.0 + 0.3 * i as f64).collect();
            let y: Vec<f64> = x.iter().map(|&v| coeffs.iter().rev().fold(0.0, |a, c| a * v + c)).collect();
            let f = polyfit(&x, &y, degree).map_err(|e| e.to_string())?;
            for (a, b) in f.coefficients.iter().zip(&coeffs) {
                worst_c = worst_c.max((a - b).abs());
            }
            worst_r2 = worst_r2.max((f.r_squared - 1.0).abs());

            let noisy: Vec<f64> = y.iter().map(|v| v + r.gen_range(-0.5..0.5)).collect();
            let f = polyfit(&x, &noisy, degree).map_err(|e| e.to_string())?;
            for (a, b) in f.coefficients.iter().zip(normal_equations(&x, &noisy, degree)) {
                worst_ne = worst_ne.max((a - b).abs());
            }
        }
    }
    check(worst_c <= 1e-10, format!("exact coefficient error {worst_c:e}"))?;
    check(worst_r2 <= 1e-12, format!("R^2 off by {worst_r2:e}"))?;
    check(worst_ne <= 1e-8, format!("normal-equations gap {worst_ne:e}"))?;
    Ok(format!("exact {worst_c:.1e}, |R^2-1| {worst_r2:.1e}, vs normal equations {worst_ne:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("1 XOR parity", xor_parity),
        ("2 independence", independence),
        ("3 decomposition additivity", additivity),
        ("4 DFT round trip and Parseval", dft_round_trip),
        ("5 spectral linearity", spectral_linearity),
        ("6 Hurst calibration", hurst_calibration),
        ("7 crosswalk fidelity", crosswalk_fidelity),
        ("8 report determinism", determinism),
        ("9 polyfit", polyfit_accuracy),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
