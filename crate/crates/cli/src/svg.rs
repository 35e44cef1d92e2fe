//! Minimal standalone SVG line plots.

use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::table::{read_csv, write_atomic, Table};

const WIDTH: f64 = 720.0;
const HEIGHT: f64 = 480.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 60.0;
const TICKS: usize = 5;
const PALETTE: [&str; 6] = [
    "#1f4e79", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#2e4053",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LineStyle {
    Solid,
    Dashed,
    Dotted,
}

impl LineStyle {
    fn dasharray(self) -> Option<&'static str> {
        match self {
            LineStyle::Solid => None,
            LineStyle::Dashed => Some("8 4"),
            LineStyle::Dotted => Some("2 3"),
        }
    }

    /// Solid, dashed, dotted, solid, ...
    pub fn cycle(i: usize) -> Self {
        [LineStyle::Solid, LineStyle::Dashed, LineStyle::Dotted][i % 3]
    }
}

/// What to draw from a table.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotRequest<'a> {
    pub x: &'a str,
    pub y: &'a [String],
    pub styles: &'a [LineStyle],
    pub log_x: bool,
}

/// Maps data coordinates to the plot area. Screen `y` grows downwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axes {
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    pub log_x: bool,
}

impl Axes {
    pub fn screen_x(&self, x: f64) -> f64 {
        let x = if self.log_x { x.log10() } else { x };
        let (lo, hi) = self.x_range;
        LEFT + (x - lo) / (hi - lo) * (WIDTH - LEFT - RIGHT)
    }

    pub fn screen_y(&self, y: f64) -> f64 {
        let (lo, hi) = self.y_range;
        TOP + (hi - y) / (hi - lo) * (HEIGHT - TOP - BOTTOM)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    if hi > lo {
        let pad = 0.05 * (hi - lo);
        (lo - pad, hi + pad)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { 0.05 * lo.abs() };
        (lo - pad, hi + pad)
    }
}

fn column(table: &Table, name: &str) -> Result<Vec<f64>> {
    table
        .column(name)
        .ok_or_else(|| CliError::usage(format!("plot: no column named `{name}`")))
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn tick_label(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{}", (v * 1e4).round() / 1e4)
    } else {
        format!("{v:.1e}")
    }
}

/// Renders the requested columns as an SVG document.
pub fn svg_document(table: &Table, req: &PlotRequest) -> Result<String> {
    if table.rows.len() < 2 {
        return Err(CliError::usage(format!(
            "plot: need at least 2 data rows, found {}",
            table.rows.len()
        )));
    }
    if req.y.is_empty() {
        return Err(CliError::usage("--y: no columns to plot"));
    }
    if !req.styles.is_empty() && req.styles.len() != req.y.len() {
        return Err(CliError::usage(format!(
            "--styles: {} styles given for {} columns",
            req.styles.len(),
            req.y.len()
        )));
    }
    let xs = column(table, req.x)?;
    let series: Vec<Vec<f64>> = req
        .y
        .iter()
        .map(|n| column(table, n))
        .collect::<Result<_>>()?;
    if req.log_x && xs.iter().any(|x| !(*x > 0.0)) {
        return Err(CliError::usage(format!(
            "--log-x: column `{}` has non-positive values",
            req.x
        )));
    }

    let tx: Vec<f64> = xs
        .iter()
        .map(|&x| if req.log_x { x.log10() } else { x })
        .collect();
    let finite = |v: &&f64| v.is_finite();
    let x_lo = tx
        .iter()
        .filter(finite)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    let x_hi = tx
        .iter()
        .filter(finite)
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let y_lo = series
        .iter()
        .flatten()
        .filter(finite)
        .fold(f64::INFINITY, |a, &b| a.min(b));
    let y_hi = series
        .iter()
        .flatten()
        .filter(finite)
        .fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !(x_lo.is_finite() && y_lo.is_finite()) {
        return Err(CliError::usage("plot: no finite data"));
    }
    let axes = Axes {
        x_range: if x_hi > x_lo {
            (x_lo, x_hi)
        } else {
            padded(x_lo, x_hi)
        },
        y_range: padded(y_lo, y_hi),
        log_x: req.log_x,
    };

    let mut s = String::new();
    let plot_w = WIDTH - LEFT - RIGHT;
    let plot_h = HEIGHT - TOP - BOTTOM;
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );

    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let xv = axes.x_range.0 + f * (axes.x_range.1 - axes.x_range.0);
        let sx = LEFT + f * plot_w;
        let label = if req.log_x {
            tick_label(10f64.powf(xv))
        } else {
            tick_label(xv)
        };
        let _ = writeln!(
            s,
            r#"<line x1="{sx:.2}" y1="{y0:.2}" x2="{sx:.2}" y2="{y1:.2}" stroke="black"/><text x="{sx:.2}" y="{ty:.2}" text-anchor="middle">{label}</text>"#,
            y0 = TOP + plot_h,
            y1 = TOP + plot_h + 5.0,
            ty = TOP + plot_h + 20.0,
        );
        let yv = axes.y_range.0 + f * (axes.y_range.1 - axes.y_range.0);
        let sy = axes.screen_y(yv);
        let _ = writeln!(
            s,
            r#"<line x1="{x0:.2}" y1="{sy:.2}" x2="{LEFT:.2}" y2="{sy:.2}" stroke="black"/><text x="{tx:.2}" y="{ly:.2}" text-anchor="end">{label}</text>"#,
            x0 = LEFT - 5.0,
            tx = LEFT - 8.0,
            ly = sy + 4.0,
            label = tick_label(yv),
        );
    }
    let x_label = if req.log_x {
        format!("{} (log scale)", req.x)
    } else {
        req.x.to_string()
    };
    let _ = writeln!(
        s,
        r#"<text x="{cx:.2}" y="{y:.2}" text-anchor="middle">{}</text>"#,
        escape(&x_label),
        cx = LEFT + plot_w / 2.0,
        y = HEIGHT - 15.0,
    );
    let y_label = req.y.join(", ");
    let _ = writeln!(
        s,
        r#"<text x="20" y="{cy:.2}" text-anchor="middle" transform="rotate(-90 20 {cy:.2})">{}</text>"#,
        escape(&y_label),
        cy = TOP + plot_h / 2.0,
    );

    for (i, (name, ys)) in req.y.iter().zip(&series).enumerate() {
        let style = req
            .styles
            .get(i)
            .copied()
            .unwrap_or_else(|| LineStyle::cycle(i));
        let colour = PALETTE[i % PALETTE.len()];
        let dash = style
            .dasharray()
            .map(|d| format!(r#" stroke-dasharray="{d}""#))
            .unwrap_or_default();
        let points: Vec<String> = xs
            .iter()
            .zip(ys)
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .map(|(&x, &y)| format!("{:.3},{:.3}", axes.screen_x(x), axes.screen_y(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{colour}" stroke-width="1.5"{dash} points="{}"/>"#,
            points.join(" ")
        );
        let ly = TOP + 15.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 10.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{lx2:.2}" y2="{ly:.2}" stroke="{colour}" stroke-width="1.5"{dash}/><text x="{tx:.2}" y="{ty:.2}">{}</text>"#,
            escape(name),
            lx2 = lx + 30.0,
            tx = lx + 36.0,
            ty = ly + 4.0,
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}

/// Reads `csv_path`, plots `y_columns` against `x_column` and writes the SVG
/// to `out_path`.
pub fn render_svg_plot(
    csv_path: &Path,
    x_column: &str,
    y_columns: &[String],
    styles: &[LineStyle],
    log_x: bool,
    out_path: &Path,
) -> Result<()> {
    let table = read_csv(csv_path)?;
    let req = PlotRequest {
        x: x_column,
        y: y_columns,
        styles,
        log_x,
    };
    write_atomic(out_path, svg_document(&table, &req)?.as_bytes())
}
