//! Static SVG charts for reports: line charts over years, bar charts of
//! spectral amplitudes and log-log scatter plots with a fitted line.

use std::fmt::Write;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_RIGHT: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 70.0;
const MARGIN_LEFT: f64 = 90.0;
const TICKS: usize = 5;

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone)]
pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn fmt_tick(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
}

impl Frame {
    fn fit(points: impl Iterator<Item = (f64, f64)>, y_zero: bool) -> Frame {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for (x, y) in points.filter(|(x, y)| x.is_finite() && y.is_finite()) {
            x0 = x0.min(x);
            x1 = x1.max(x);
            y0 = y0.min(y);
            y1 = y1.max(y);
        }
        if !x0.is_finite() {
            (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
        }
        if y_zero {
            y0 = y0.min(0.0);
            y1 = y1.max(0.0);
        }
        let pad = |lo: f64, hi: f64| {
            if hi - lo <= f64::EPSILON * hi.abs().max(1.0) {
                let d = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
                (lo - d, hi + d)
            } else {
                let d = (hi - lo) * 0.05;
                (lo - d, hi + d)
            }
        };
        Frame {
            x: pad(x0, x1),
            y: pad(y0, y1),
        }
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN_BOTTOM - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn open(svg: &mut String, title: &str, x_label: &str, y_label: &str, frame: &Frame) {
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">
<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>
<text x="{}" y="28" font-size="18" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let (left, right) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (top, bottom) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let yv = frame.y.0 + f * (frame.y.1 - frame.y.0);
        let xv = frame.x.0 + f * (frame.x.1 - frame.x.0);
        let (py, px) = (frame.py(yv), frame.px(xv));
        let _ = writeln!(
            svg,
            r##"<line x1="{left:.2}" y1="{py:.2}" x2="{right:.2}" y2="{py:.2}" stroke="#e5e5e5"/>
<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end">{}</text>
<text x="{px:.2}" y="{:.2}" font-size="12" text-anchor="middle">{}</text>"##,
            left - 6.0,
            py + 4.0,
            fmt_tick(yv),
            bottom + 18.0,
            fmt_tick(xv)
        );
    }
    let _ = writeln!(
        svg,
        r##"<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}" stroke="#333"/>
<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}" stroke="#333"/>
<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle">{}</text>
<text x="20" y="{:.2}" font-size="14" text-anchor="middle" transform="rotate(-90 20 {:.2})">{}</text>"##,
        (left + right) / 2.0,
        HEIGHT - 20.0,
        escape(x_label),
        (top + bottom) / 2.0,
        (top + bottom) / 2.0,
        escape(y_label)
    );
}

fn legend(svg: &mut String, names: &[&str]) {
    for (i, name) in names.iter().enumerate() {
        let y = MARGIN_TOP + 10.0 + 18.0 * i as f64;
        let x = WIDTH - MARGIN_RIGHT - 160.0;
        let _ = writeln!(
            svg,
            r#"<rect x="{x}" y="{:.2}" width="12" height="12" fill="{}"/>
<text x="{:.2}" y="{y:.2}" font-size="12" dominant-baseline="middle">{}</text>"#,
            y - 6.0,
            PALETTE[i % PALETTE.len()],
            x + 18.0,
            escape(name)
        );
    }
}

pub fn line_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let frame = Frame::fit(series.iter().flat_map(|s| s.points.iter().copied()), false);
    let mut svg = String::new();
    open(&mut svg, title, x_label, y_label, &frame);
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
            .collect();
        let _ = writeln!(
            svg,
            r#"<polyline fill="none" stroke="{color}" stroke-width="2" points="{}"/>"#,
            path.join(" ")
        );
        for &(x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                frame.px(x),
                frame.py(y)
            );
        }
    }
    if series.len() > 1 {
        legend(&mut svg, &series.iter().map(|s| s.name.as_str()).collect::<Vec<_>>());
    }
    svg.push_str("</svg>\n");
    svg
}

/// Vertical bars at the given x positions.
pub fn bar_chart(title: &str, x_label: &str, y_label: &str, bars: &[(f64, f64)]) -> String {
    let frame = Frame::fit(bars.iter().map(|&(x, y)| (x, y)).chain(bars.iter().map(|&(x, _)| (x, 0.0))), true);
    let mut svg = String::new();
    open(&mut svg, title, x_label, y_label, &frame);
    let slot = (WIDTH - MARGIN_LEFT - MARGIN_RIGHT) / (bars.len().max(1) as f64 + 1.0);
    for &(x, y) in bars {
        let (top, base) = (frame.py(y.max(0.0)), frame.py(y.min(0.0)));
        let _ = writeln!(
            svg,
            r#"<rect x="{:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            frame.px(x) - slot * 0.3,
            slot * 0.6,
            (base - top).max(0.0),
            PALETTE[0]
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Scatter of points with an overlaid straight line y = intercept + slope·x.
pub fn scatter_with_line(
    title: &str,
    x_label: &str,
    y_label: &str,
    points: &[(f64, f64)],
    slope: f64,
    intercept: f64,
) -> String {
    let frame = Frame::fit(points.iter().copied(), false);
    let mut svg = String::new();
    open(&mut svg, title, x_label, y_label, &frame);
    for &(x, y) in points {
        let _ = writeln!(
            svg,
            r#"<circle cx="{:.2}" cy="{:.2}" r="3.5" fill="{}"/>"#,
            frame.px(x),
            frame.py(y),
            PALETTE[0]
        );
    }
    if let (Some(lo), Some(hi)) = (
        points.iter().map(|p| p.0).reduce(f64::min),
        points.iter().map(|p| p.0).reduce(f64::max),
    ) {
        let _ = writeln!(
            svg,
            r#"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="2"/>"#,
            frame.px(lo),
            frame.py(intercept + slope * lo),
            frame.px(hi),
            frame.py(intercept + slope * hi),
            PALETTE[1]
        );
    }
    svg.push_str("</svg>\n");
    svg
}
