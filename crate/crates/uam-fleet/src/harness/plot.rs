//! Hand-rolled SVG rendering of report statistics.
//!
//! Two primitives cover every figure: grouped box plots and multi-series line
//! plots. Output is plain SVG 1.1 text with deterministic number formatting,
//! so repeated runs produce byte-identical files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::Result;
use crate::harness::pipeline::AggregateReport;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_LEFT: f64 = 62.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 64.0;

const SERIES_COLORS: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Five-number summary of one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxStats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

/// Quartiles by nearest-rank on the sorted sample; empty input is a caller
/// error and panics.
pub fn box_stats(values: &[f64]) -> BoxStats {
    assert!(!values.is_empty(), "box_stats needs data");
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("no NaN"));
    let pick = |q: f64| sorted[((sorted.len() - 1) as f64 * q).round() as usize];
    BoxStats {
        min: sorted[0],
        q1: pick(0.25),
        median: pick(0.5),
        q3: pick(0.75),
        max: sorted[sorted.len() - 1],
    }
}

fn fmt(v: f64) -> String {
    format!("{v:.2}")
}

struct Frame {
    y_min: f64,
    y_max: f64,
}

impl Frame {
    fn new(y_min: f64, y_max: f64) -> Frame {
        let span = (y_max - y_min).max(1e-9);
        Frame {
            y_min: y_min - 0.05 * span,
            y_max: y_max + 0.05 * span,
        }
    }

    fn y(&self, v: f64) -> f64 {
        let frac = (v - self.y_min) / (self.y_max - self.y_min);
        HEIGHT - MARGIN_BOTTOM - frac * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn open_svg(title: &str) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        out,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="24" font-family="sans-serif" font-size="16" text-anchor="middle">{title}</text>"#,
        WIDTH / 2.0
    );
    out
}

fn draw_axes(out: &mut String, frame: &Frame, y_label: &str) {
    let x0 = MARGIN_LEFT;
    let x1 = WIDTH - MARGIN_RIGHT;
    let y0 = HEIGHT - MARGIN_BOTTOM;
    let y1 = MARGIN_TOP;
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>"#
    );
    let _ = writeln!(
        out,
        r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>"#
    );
    for tick in 0..=4 {
        let value = frame.y_min + (frame.y_max - frame.y_min) * f64::from(tick) / 4.0;
        let y = frame.y(value);
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{x0}" y2="{}" stroke="black"/>"#,
            x0 - 4.0,
            fmt(y),
            fmt(y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            x0 - 7.0,
            fmt(y + 4.0),
            fmt(value)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle" transform="rotate(-90 14 {})">{y_label}</text>"#,
        fmt((y0 + y1) / 2.0),
        fmt((y0 + y1) / 2.0)
    );
}

/// Render labelled groups as a box plot.
pub fn box_plot_svg(title: &str, y_label: &str, groups: &[(String, Vec<f64>)]) -> String {
    let mut out = open_svg(title);
    let populated: Vec<&(String, Vec<f64>)> =
        groups.iter().filter(|(_, v)| !v.is_empty()).collect();
    if populated.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let stats: Vec<BoxStats> = populated.iter().map(|(_, v)| box_stats(v)).collect();
    let y_lo = stats.iter().map(|s| s.min).fold(f64::INFINITY, f64::min);
    let y_hi = stats.iter().map(|s| s.max).fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(y_lo.min(0.0), y_hi);
    draw_axes(&mut out, &frame, y_label);
    let plot_width = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let slot = plot_width / populated.len() as f64;
    let box_width = (slot * 0.5).min(60.0);
    for (idx, ((label, _), s)) in populated.iter().zip(&stats).enumerate() {
        let cx = MARGIN_LEFT + slot * (idx as f64 + 0.5);
        let left = cx - box_width / 2.0;
        let right = cx + box_width / 2.0;
        // whiskers
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            fmt(cx),
            fmt(frame.y(s.min)),
            fmt(cx),
            fmt(frame.y(s.q1))
        );
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
            fmt(cx),
            fmt(frame.y(s.q3)),
            fmt(cx),
            fmt(frame.y(s.max))
        );
        for cap in [s.min, s.max] {
            let _ = writeln!(
                out,
                r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
                fmt(cx - box_width / 4.0),
                fmt(frame.y(cap)),
                fmt(cx + box_width / 4.0),
                fmt(frame.y(cap))
            );
        }
        // interquartile box and median
        let _ = writeln!(
            out,
            r##"<rect x="{}" y="{}" width="{}" height="{}" fill="#9ecae9" stroke="black"/>"##,
            fmt(left),
            fmt(frame.y(s.q3)),
            fmt(box_width),
            fmt((frame.y(s.q1) - frame.y(s.q3)).max(0.5))
        );
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="2"/>"#,
            fmt(left),
            fmt(frame.y(s.median)),
            fmt(right),
            fmt(frame.y(s.median))
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle">{label}</text>"#,
            fmt(cx),
            HEIGHT - MARGIN_BOTTOM + 18.0
        );
    }
    out.push_str("</svg>\n");
    out
}

/// Render (x, y) series as a line plot with a legend.
pub fn line_plot_svg(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[(String, Vec<(f64, f64)>)],
) -> String {
    let mut out = open_svg(title);
    let populated: Vec<&(String, Vec<(f64, f64)>)> =
        series.iter().filter(|(_, v)| !v.is_empty()).collect();
    if populated.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let xs: Vec<f64> = populated.iter().flat_map(|(_, v)| v.iter().map(|p| p.0)).collect();
    let ys: Vec<f64> = populated.iter().flat_map(|(_, v)| v.iter().map(|p| p.1)).collect();
    let x_lo = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let y_hi = ys.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let frame = Frame::new(0.0f64.min(ys.iter().copied().fold(f64::INFINITY, f64::min)), y_hi);
    draw_axes(&mut out, &frame, y_label);
    let x_span = (x_hi - x_lo).max(1e-9);
    let to_x =
        |v: f64| MARGIN_LEFT + (v - x_lo) / x_span * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT);
    for (idx, (label, points)) in populated.iter().enumerate() {
        let color = SERIES_COLORS[idx % SERIES_COLORS.len()];
        let mut sorted = points.clone();
        sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("no NaN"));
        let path: Vec<String> = sorted
            .iter()
            .map(|&(x, y)| format!("{},{}", fmt(to_x(x)), fmt(frame.y(y))))
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            path.join(" ")
        );
        for &(x, y) in &sorted {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                fmt(to_x(x)),
                fmt(frame.y(y))
            );
        }
        let legend_y = MARGIN_TOP + 16.0 * idx as f64;
        let _ = writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{color}" stroke-width="2"/>"#,
            WIDTH - 170.0,
            fmt(legend_y),
            WIDTH - 150.0,
            fmt(legend_y)
        );
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="11">{label}</text>"#,
            WIDTH - 145.0,
            fmt(legend_y + 4.0)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{x_label}</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 14.0
    );
    out.push_str("</svg>\n");
    out
}

fn scenario_label(add: f64, ar_coeff: f64) -> String {
    format!("add{add} ar{ar_coeff}")
}

/// Write the four report figures into `dir`. Figures with no data are skipped
/// with a warning; returns the paths actually written.
pub fn emit_plots(report: &AggregateReport, dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let scenarios = report.scenarios();
    if scenarios.is_empty() {
        eprintln!("warning: empty report, no plots written");
        return Ok(written);
    }

    let passengers: Vec<(String, Vec<f64>)> = scenarios
        .iter()
        .map(|&(add, ar)| {
            (
                scenario_label(add, ar),
                report
                    .rows_for(add, ar)
                    .iter()
                    .map(|r| r.realized_passengers as f64)
                    .collect(),
            )
        })
        .collect();
    let fleets: Vec<(String, Vec<f64>)> = scenarios
        .iter()
        .map(|&(add, ar)| {
            (
                scenario_label(add, ar),
                report
                    .rows_for(add, ar)
                    .iter()
                    .filter_map(|r| r.zero_spill_fleet)
                    .map(f64::from)
                    .collect(),
            )
        })
        .collect();

    // mean spill and bound curves per scenario, keyed by fleet size
    let mut spill_series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    let mut variance_groups: Vec<(String, Vec<f64>)> = Vec::new();
    for &(add, ar) in &scenarios {
        let rows = report.rows_for(add, ar);
        let mut by_fleet: Vec<(u32, Vec<f64>, Vec<f64>, Vec<f64>)> = Vec::new();
        for row in &rows {
            for point in &row.sweep {
                let entry = match by_fleet.iter_mut().find(|e| e.0 == point.fleet) {
                    Some(entry) => entry,
                    None => {
                        by_fleet.push((point.fleet, Vec::new(), Vec::new(), Vec::new()));
                        by_fleet.last_mut().expect("just pushed")
                    }
                };
                entry.1.push(f64::from(point.spill));
                entry.2.push(f64::from(point.lower_bound));
                entry.3.push(f64::from(point.upper_bound));
            }
        }
        by_fleet.sort_by_key(|e| e.0);
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        let curve = |pick: fn(&(u32, Vec<f64>, Vec<f64>, Vec<f64>)) -> &Vec<f64>| {
            by_fleet
                .iter()
                .map(|e| (f64::from(e.0), mean(pick(e))))
                .collect::<Vec<(f64, f64)>>()
        };
        let label = scenario_label(add, ar);
        spill_series.push((format!("{label} spill"), curve(|e| &e.1)));
        spill_series.push((format!("{label} lower"), curve(|e| &e.2)));
        spill_series.push((format!("{label} upper"), curve(|e| &e.3)));
        for entry in &by_fleet {
            variance_groups.push((format!("{label} F={}", entry.0), entry.1.clone()));
        }
    }

    let figures = [
        (
            "realized_passengers.svg",
            box_plot_svg("Daily realized passengers", "passengers", &passengers),
        ),
        (
            "zero_spill_fleet.svg",
            box_plot_svg("Zero-spill fleet size", "aircraft", &fleets),
        ),
        (
            "spill_vs_fleet.svg",
            line_plot_svg("Mean daily spill vs fleet size", "fleet size", "spill", &spill_series),
        ),
        (
            "spill_variance.svg",
            box_plot_svg("Spill distribution by fleet size", "spill", &variance_groups),
        ),
    ];
    for (name, svg) in figures {
        let has_data = svg.contains("<polyline") || svg.contains("<rect x=");
        if !has_data {
            eprintln!("warning: no data for {name}, skipped");
            continue;
        }
        let path = dir.join(name);
        std::fs::write(&path, svg)?;
        written.push(path);
    }
    Ok(written)
}
