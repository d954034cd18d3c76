//! Self-contained SVG charts of front and metric CSVs.
//!
//! A CSV with an `iteration` column and no `policy_index` column is a
//! metrics log and is drawn as a line chart against the iteration, one
//! series per numeric column. Anything else is a set of returns and is
//! drawn as a scatter of its first two objective columns, one series per
//! file. Output depends only on the input bytes.

use std::fmt::Write as _;
use std::fs::File;
use std::path::{Path, PathBuf};

use morl::io::Table;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChartKind {
    Scatter,
    Line,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub kind: ChartKind,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 24.0;
const BOTTOM: f64 = 56.0;
const PALETTE: [&str; 8] = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"];

fn is_metrics_log(t: &Table) -> bool {
    t.column("iteration").is_some() && t.column("policy_index").is_none()
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| path.display().to_string())
}

/// Builds a chart from parsed tables. `y` restricts a line chart to one column.
pub fn chart_from_tables(tables: &[(PathBuf, Table)], y: Option<&str>) -> Result<Chart> {
    let Some((first_path, first)) = tables.first() else {
        return Err(CliError::Usage("nothing to plot".into()));
    };
    for (path, t) in tables {
        if t.rows.is_empty() {
            return Err(CliError::input(path, "no data rows"));
        }
        if is_metrics_log(t) != is_metrics_log(first) {
            return Err(CliError::input(path, format!("cannot share a chart with {}", first_path.display())));
        }
    }
    let numeric = |path: &Path, t: &Table, row: usize, col: usize| t.numeric(row, col).map_err(|e| CliError::input(path, e));

    if is_metrics_log(first) {
        let mut series = Vec::new();
        let mut columns_used = Vec::new();
        for (path, t) in tables {
            let x = t.column("iteration").expect("metrics log");
            let cols: Vec<usize> = match y {
                Some(name) => vec![t.column(name).ok_or_else(|| CliError::input(path, format!("no column '{name}'")))?],
                None => t.objective_columns(),
            };
            if cols.is_empty() {
                return Err(CliError::input(path, "no value columns"));
            }
            for c in cols {
                let mut points = (0..t.rows.len())
                    .map(|r| Ok((numeric(path, t, r, x)?, numeric(path, t, r, c)?)))
                    .collect::<Result<Vec<_>>>()?;
                points.sort_by(|a, b| a.0.total_cmp(&b.0));
                let label = if tables.len() > 1 { format!("{} {}", stem(path), t.header[c]) } else { t.header[c].clone() };
                columns_used.push(t.header[c].clone());
                series.push(Series { label, points });
            }
        }
        columns_used.dedup();
        let y_label = if columns_used.len() == 1 { columns_used.remove(0) } else { "value".into() };
        return Ok(Chart { kind: ChartKind::Line, x_label: "iteration".into(), y_label, series });
    }

    let mut series = Vec::new();
    let mut labels = None;
    for (path, t) in tables {
        let cols = t.objective_columns();
        if cols.len() < 2 {
            return Err(CliError::input(path, "a scatter needs two objective columns"));
        }
        labels.get_or_insert_with(|| (t.header[cols[0]].clone(), t.header[cols[1]].clone()));
        let points = (0..t.rows.len())
            .map(|r| Ok((numeric(path, t, r, cols[0])?, numeric(path, t, r, cols[1])?)))
            .collect::<Result<Vec<_>>>()?;
        series.push(Series { label: stem(path), points });
    }
    let (x_label, y_label) = labels.expect("at least one table");
    Ok(Chart { kind: ChartKind::Scatter, x_label, y_label, series })
}

/// Axis range widened to whole tick steps, with the step.
fn axis(values: impl Iterator<Item = f64>) -> (f64, f64, f64) {
    let (mut lo, mut hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
    if hi - lo <= f64::EPSILON * hi.abs().max(lo.abs()).max(1.0) {
        let pad = (lo.abs() * 0.1).max(1.0);
        lo -= pad;
        hi += pad;
    }
    let raw = (hi - lo) / 5.0;
    let mag = 10f64.powf(raw.log10().floor());
    let step = [1.0, 2.0, 2.5, 5.0, 10.0].iter().map(|m| m * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
    ((lo / step).floor() * step, (hi / step).ceil() * step, step)
}

fn tick_label(v: f64, step: f64) -> String {
    let mag = 10f64.powf(step.log10().floor());
    let decimals = (-mag.log10()).max(0.0).round() as usize + usize::from((step / mag - 2.5).abs() < 1e-9);
    let v = if v.abs() < step * 1e-9 { 0.0 } else { v };
    format!("{v:.decimals$}")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders `chart` as an SVG document.
pub fn render_svg(chart: &Chart) -> String {
    let all = || chart.series.iter().flat_map(|s| s.points.iter());
    let (x0, x1, xs) = axis(all().map(|p| p.0));
    let (y0, y1, ys) = axis(all().map(|p| p.1));
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * pw;
    let py = |y: f64| TOP + ph - (y - y0) / (y1 - y0) * ph;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(s, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#);

    let ticks = |lo: f64, hi: f64, step: f64| {
        let n = ((hi - lo) / step).round() as i64;
        (0..=n).map(move |k| lo + k as f64 * step)
    };
    for x in ticks(x0, x1, xs) {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{0:.2}" y2="{2:.2}" stroke="black"/><text x="{0:.2}" y="{3:.2}" text-anchor="middle">{4}</text>"#,
            px(x),
            TOP + ph,
            TOP + ph + 5.0,
            TOP + ph + 19.0,
            tick_label(x, xs)
        );
    }
    for y in ticks(y0, y1, ys) {
        let _ = writeln!(
            s,
            r#"<line x1="{0:.2}" y1="{1:.2}" x2="{2:.2}" y2="{1:.2}" stroke="black"/><text x="{3:.2}" y="{4:.2}" text-anchor="end">{5}</text>"#,
            LEFT - 5.0,
            py(y),
            LEFT,
            LEFT - 8.0,
            py(y) + 4.0,
            tick_label(y, ys)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{0:.2}" text-anchor="middle" transform="rotate(-90 16 {0:.2})">{1}</text>"#,
        TOP + ph / 2.0,
        escape(&chart.y_label)
    );

    for (i, series) in chart.series.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g fill="{colour}" stroke="{colour}">"#);
        if chart.kind == ChartKind::Line && series.points.len() > 1 {
            let pts: Vec<String> = series.points.iter().map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" points="{}"/>"#, pts.join(" "));
        }
        let r = if chart.kind == ChartKind::Line { 2.0 } else { 3.0 };
        for &(x, y) in &series.points {
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="{r}"/>"#, px(x), py(y));
        }
        let ly = TOP + 16.0 + 16.0 * i as f64;
        let lx = LEFT + pw - 150.0;
        let _ = writeln!(
            s,
            r#"<rect x="{lx:.2}" y="{:.2}" width="10" height="10"/><text x="{:.2}" y="{ly:.2}" stroke="none" fill="black">{}</text>"#,
            ly - 9.0,
            lx + 16.0,
            escape(&series.label)
        );
        s.push_str("</g>\n");
    }
    s.push_str("</svg>\n");
    s
}

/// Reads the CSVs and renders one chart.
pub fn plot(paths: &[PathBuf], y: Option<&str>) -> Result<String> {
    let tables = paths
        .iter()
        .map(|p| {
            let file = File::open(p).map_err(|e| CliError::io(p, e))?;
            let table = Table::read(file).map_err(|e| CliError::input(p, e))?;
            Ok((p.clone(), table))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(render_svg(&chart_from_tables(&tables, y)?))
}
