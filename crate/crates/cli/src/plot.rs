//! Self-contained SVG plots of experiment reports.

use std::fmt::Write as _;
use std::path::Path;

use geotsp::experiments::ExperimentReport;
use serde::Serialize;
use thiserror::Error;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 72.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 78.0;
const TICKS: usize = 5;
const STAMP_CHARS: usize = 100;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

/// Columns a path-overlay report must carry. Rows with a NaN `step` are
/// the cloud; the others, ordered by `step`, form the highlighted path.
pub const OVERLAY_COLUMNS: [&str; 4] = ["vertex", "x", "y", "step"];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlotKind {
    Scatter,
    LogLog,
    PathOverlay,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlotSpec {
    pub kind: PlotKind,
    pub x: String,
    pub y: String,
    /// Column whose distinct values split the points into series.
    pub series: Option<String>,
}

impl PlotSpec {
    pub fn scatter(x: &str, y: &str, series: Option<&str>) -> Self {
        Self { kind: PlotKind::Scatter, x: x.into(), y: y.into(), series: series.map(Into::into) }
    }

    pub fn loglog(x: &str, y: &str) -> Self {
        Self { kind: PlotKind::LogLog, x: x.into(), y: y.into(), series: None }
    }

    pub fn path_overlay() -> Self {
        Self { kind: PlotKind::PathOverlay, x: "x".into(), y: "y".into(), series: None }
    }
}

#[derive(Debug, Error)]
pub enum PlotError {
    #[error("report {0} has no rows to plot")]
    EmptyReport(String),
    #[error("report {id} has no finite points for {x} against {y}")]
    NoPoints { id: String, x: String, y: String },
    #[error(transparent)]
    Column(#[from] geotsp::Error),
    #[error("cannot write plot {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

/// Renders `report` and writes the SVG to `path`.
pub fn emit_plot(report: &ExperimentReport, spec: &PlotSpec, path: &Path) -> Result<(), PlotError> {
    let svg = render_svg(report, spec)?;
    std::fs::write(path, svg).map_err(|source| PlotError::Io { path: path.display().to_string(), source })
}

#[derive(Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    log: bool,
}

impl Axis {
    fn fit(values: impl Iterator<Item = f64>, log: bool) -> Self {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values {
            let t = if log { v.ln() } else { v };
            lo = lo.min(t);
            hi = hi.max(t);
        }
        let pad = if hi > lo { 0.05 * (hi - lo) } else { 0.5f64.max(0.1 * lo.abs()) };
        Self { lo: lo - pad, hi: hi + pad, log }
    }

    /// Position in `[0, 1]` along the axis.
    fn unit(&self, v: f64) -> f64 {
        let t = if self.log { v.ln() } else { v };
        (t - self.lo) / (self.hi - self.lo)
    }

    fn ticks(&self) -> Vec<f64> {
        (0..TICKS)
            .map(|i| {
                let t = self.lo + (self.hi - self.lo) * (i as f64 + 0.5) / TICKS as f64;
                if self.log {
                    t.exp()
                } else {
                    t
                }
            })
            .collect()
    }
}

struct Frame {
    x: Axis,
    y: Axis,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        LEFT + self.x.unit(x) * (WIDTH - LEFT - RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - BOTTOM - self.y.unit(y) * (HEIGHT - TOP - BOTTOM)
    }
}

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

fn label(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && !(1e-3..1e5).contains(&a) {
        format!("{v:.2e}")
    } else {
        // Three significant digits.
        let decimals = if a == 0.0 { 0 } else { (2 - a.log10().floor() as i32).max(0) as usize };
        let s = format!("{v:.decimals$}");
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_owned()
        } else {
            s
        }
    }
}

fn stamp(report: &ExperimentReport) -> (String, String) {
    let full = serde_json::to_string(&report.parameters).unwrap_or_default();
    let mut short: String = full.chars().take(STAMP_CHARS).collect();
    if full.chars().count() > STAMP_CHARS {
        short.push_str("...");
    }
    (full, short)
}

fn points(
    report: &ExperimentReport,
    x: &str,
    y: &str,
    keep: impl Fn(f64, f64) -> bool,
) -> Result<Vec<(usize, f64, f64)>, PlotError> {
    let (xi, yi) = (report.column_index(x)?, report.column_index(y)?);
    Ok(report
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (i, r.values[xi], r.values[yi]))
        .filter(|&(_, a, b)| a.is_finite() && b.is_finite() && keep(a, b))
        .collect())
}

/// The SVG document for `report` under `spec`.
pub fn render_svg(report: &ExperimentReport, spec: &PlotSpec) -> Result<String, PlotError> {
    if report.is_empty() {
        return Err(PlotError::EmptyReport(report.experiment_id.clone()));
    }
    let log = spec.kind == PlotKind::LogLog;
    let pts = points(report, &spec.x, &spec.y, |a, b| !log || (a > 0.0 && b > 0.0))?;
    if pts.is_empty() {
        return Err(PlotError::NoPoints { id: report.experiment_id.clone(), x: spec.x.clone(), y: spec.y.clone() });
    }
    let frame = Frame { x: Axis::fit(pts.iter().map(|p| p.1), log), y: Axis::fit(pts.iter().map(|p| p.2), log) };

    let mut svg = String::new();
    let (full_stamp, short_stamp) = stamp(report);
    let w = &mut svg;
    // Writing into a String cannot fail.
    let _ = writeln!(w, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(w, "<title>{}</title>", escape(&report.experiment_id));
    let _ = writeln!(w, "<metadata>{}</metadata>", escape(&full_stamp));
    let _ = writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        w,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        WIDTH / 2.0,
        escape(&report.experiment_id)
    );
    axes(w, &frame, spec);

    let mut legend = Vec::new();
    match spec.kind {
        PlotKind::PathOverlay => overlay(w, report, &frame, &pts, &mut legend)?,
        PlotKind::Scatter => scatter(w, report, &frame, spec, &pts, &mut legend)?,
        PlotKind::LogLog => {
            dots(w, &frame, pts.iter().map(|p| (p.1, p.2)), PALETTE[0], "data");
            legend.push((PALETTE[0].to_owned(), format!("{} vs {}", spec.y, spec.x)));
            if let Some(fit) = report.fits.first() {
                let (x0, x1) = (
                    pts.iter().map(|p| p.1).fold(f64::INFINITY, f64::min),
                    pts.iter().map(|p| p.1).fold(0.0, f64::max),
                );
                let line = |x: f64| (fit.intercept + fit.slope * x.ln()).exp();
                let _ = writeln!(
                    w,
                    r#"<line class="fit" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="{}" stroke-width="1.5"/>"#,
                    frame.px(x0),
                    frame.py(line(x0)),
                    frame.px(x1),
                    frame.py(line(x1)),
                    PALETTE[1]
                );
                legend.push((PALETTE[1].to_owned(), format!("fit slope {:.4} ± {:.4}", fit.slope, fit.slope_stderr)));
            }
        }
    }

    for (i, (color, text)) in legend.iter().enumerate() {
        let y = TOP + 14.0 + 16.0 * i as f64;
        let _ = writeln!(
            w,
            r#"<g class="legend"><rect x="{:.1}" y="{:.1}" width="10" height="10" fill="{color}"/><text x="{:.1}" y="{:.1}">{}</text></g>"#,
            LEFT + 10.0,
            y - 9.0,
            LEFT + 26.0,
            y,
            escape(text)
        );
    }
    let _ = writeln!(
        w,
        r##"<text class="stamp" x="8" y="{:.1}" font-size="9" fill="#555">{} seed={} {}</text>"##,
        HEIGHT - 8.0,
        escape(&report.experiment_id),
        report.bootstrap_seed,
        escape(&short_stamp)
    );
    let _ = writeln!(w, "</svg>");
    Ok(svg)
}

fn axes(w: &mut String, frame: &Frame, spec: &PlotSpec) {
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(w, r#"<g class="axes" stroke="black">"#);
    let _ = writeln!(w, r#"<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}"/>"#);
    let _ = writeln!(w, r#"<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}"/>"#);
    let _ = writeln!(w, "</g>");
    for t in frame.x.ticks() {
        let px = frame.px(t);
        let _ = writeln!(
            w,
            r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{:.1}" stroke="black"/><text x="{px:.2}" y="{:.1}" text-anchor="middle">{}</text>"#,
            y0 + 5.0,
            y0 + 18.0,
            label(t)
        );
    }
    for t in frame.y.ticks() {
        let py = frame.py(t);
        let _ = writeln!(
            w,
            r#"<line x1="{:.1}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{:.1}" y="{:.2}" text-anchor="end">{}</text>"#,
            x0 - 5.0,
            x0 - 8.0,
            py + 4.0,
            label(t)
        );
    }
    let scale = if frame.x.log { " (log)" } else { "" };
    let _ = writeln!(
        w,
        r#"<text class="xlabel" x="{:.1}" y="{:.1}" text-anchor="middle">{}{scale}</text>"#,
        (x0 + x1) / 2.0,
        y0 + 38.0,
        escape(&spec.x)
    );
    let _ = writeln!(
        w,
        r#"<text class="ylabel" x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">{}{scale}</text>"#,
        (y0 + y1) / 2.0,
        (y0 + y1) / 2.0,
        escape(&spec.y)
    );
}

fn dots(w: &mut String, frame: &Frame, pts: impl Iterator<Item = (f64, f64)>, color: &str, class: &str) {
    let _ = writeln!(w, r#"<g class="{class}" fill="{color}">"#);
    for (x, y) in pts {
        let _ = writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, frame.px(x), frame.py(y));
    }
    let _ = writeln!(w, "</g>");
}

fn scatter(
    w: &mut String,
    report: &ExperimentReport,
    frame: &Frame,
    spec: &PlotSpec,
    pts: &[(usize, f64, f64)],
    legend: &mut Vec<(String, String)>,
) -> Result<(), PlotError> {
    let Some(series) = &spec.series else {
        dots(w, frame, pts.iter().map(|p| (p.1, p.2)), PALETTE[0], "series");
        legend.push((PALETTE[0].to_owned(), format!("{} vs {}", spec.y, spec.x)));
        return Ok(());
    };
    let si = report.column_index(series)?;
    for (k, key) in report.keys(series)?.into_iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        let _ = writeln!(w, r#"<g class="series" data-key="{}" fill="{color}">"#, label(key));
        for &(i, x, y) in pts {
            if report.rows[i].values[si].to_bits() == key.to_bits() {
                let _ = writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="3"/>"#, frame.px(x), frame.py(y));
            }
        }
        let _ = writeln!(w, "</g>");
        legend.push((color.to_owned(), format!("{series} = {}", label(key))));
    }
    Ok(())
}

fn overlay(
    w: &mut String,
    report: &ExperimentReport,
    frame: &Frame,
    pts: &[(usize, f64, f64)],
    legend: &mut Vec<(String, String)>,
) -> Result<(), PlotError> {
    let si = report.column_index("step")?;
    let cloud = pts.iter().filter(|p| report.rows[p.0].values[si].is_nan()).map(|p| (p.1, p.2));
    let _ = writeln!(w, r##"<g class="cloud" fill="#999">"##);
    for (x, y) in cloud {
        let _ = writeln!(w, r#"<circle cx="{:.2}" cy="{:.2}" r="1.5"/>"#, frame.px(x), frame.py(y));
    }
    let _ = writeln!(w, "</g>");
    let mut path: Vec<(f64, f64, f64)> =
        pts.iter().map(|p| (report.rows[p.0].values[si], p.1, p.2)).filter(|p| p.0.is_finite()).collect();
    path.sort_by(|a, b| a.0.total_cmp(&b.0));
    if !path.is_empty() {
        let coords: Vec<String> =
            path.iter().map(|&(_, x, y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y))).collect();
        let _ = writeln!(
            w,
            r#"<polyline class="path" points="{}" fill="none" stroke="{}" stroke-width="1.5"/>"#,
            coords.join(" "),
            PALETTE[1]
        );
        legend.push((PALETTE[1].to_owned(), format!("path, {} hops", path.len() - 1)));
    }
    Ok(())
}
