//! Minimal standalone SVG line plots (no external renderer).
//!
//! One polyline per series with point markers and a legend; the x axis can
//! run in descending order, which suits convergence plots where the mesh is
//! refined left to right. Output is a deterministic function of the input.

use std::fmt::Write;

/// One plotted curve.
#[derive(Debug, Clone)]
pub struct Series {
    pub label: String,
    /// `(x, y)` samples in drawing order.
    pub points: Vec<(f64, f64)>,
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 42.0;
const MARGIN_BOTTOM: f64 = 56.0;
const PALETTE: [&str; 6] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
];

/// Format an axis tick: fixed-point in a friendly range, scientific outside.
fn tick_label(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    let mag = v.abs();
    if (1e-3..1e6).contains(&mag) {
        let s = format!("{v:.4}");
        let trimmed = s.trim_end_matches('0').trim_end_matches('.');
        trimmed.to_string()
    } else {
        format!("{v:.3e}")
    }
}

fn range_of(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in values {
        lo = lo.min(v);
        hi = hi.max(v);
    }
    if lo > hi {
        (0.0, 1.0)
    } else if lo == hi {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    } else {
        (lo, hi)
    }
}

/// Render a line plot. With `x_descending`, larger x values sit on the left.
///
/// # Panics
/// If a coordinate is not finite or no series has any points.
pub fn line_plot(
    title: &str,
    x_label: &str,
    y_label: &str,
    series: &[Series],
    x_descending: bool,
) -> String {
    let all = || series.iter().flat_map(|s| s.points.iter().copied());
    assert!(all().count() > 0, "nothing to plot");
    assert!(
        all().all(|(x, y)| x.is_finite() && y.is_finite()),
        "plot coordinates must be finite"
    );
    let (x_lo, x_hi) = range_of(all().map(|(x, _)| x));
    let (mut y_lo, mut y_hi) = range_of(all().map(|(_, y)| y));
    let y_pad = (y_hi - y_lo) * 0.06;
    y_lo -= y_pad;
    y_hi += y_pad;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let x_pos = |x: f64| {
        let t = (x - x_lo) / (x_hi - x_lo);
        let t = if x_descending { 1.0 - t } else { t };
        MARGIN_LEFT + t * plot_w
    };
    let y_pos = |y: f64| MARGIN_TOP + (1.0 - (y - y_lo) / (y_hi - y_lo)) * plot_h;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(svg, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="24" font-family="sans-serif" font-size="15" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );

    // Axis ticks: reuse the data abscissae when few, else a uniform grid.
    let mut x_ticks: Vec<f64> = all().map(|(x, _)| x).collect();
    x_ticks.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    x_ticks.dedup();
    if x_ticks.len() > 8 {
        x_ticks = (0..=5)
            .map(|i| x_lo + (x_hi - x_lo) * i as f64 / 5.0)
            .collect();
    }
    let y_ticks: Vec<f64> = (0..=5)
        .map(|i| y_lo + (y_hi - y_lo) * i as f64 / 5.0)
        .collect();

    let axis_bottom = MARGIN_TOP + plot_h;
    for &x in &x_ticks {
        let px = x_pos(x);
        let _ = writeln!(
            svg,
            r##"<line x1="{px:.2}" y1="{MARGIN_TOP:.1}" x2="{px:.2}" y2="{axis_bottom:.1}" stroke="#dddddd" stroke-width="1"/>"##
        );
        let _ = writeln!(
            svg,
            r#"<text x="{px:.2}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">{}</text>"#,
            axis_bottom + 18.0,
            tick_label(x)
        );
    }
    for &y in &y_ticks {
        let py = y_pos(y);
        let _ = writeln!(
            svg,
            r##"<line x1="{MARGIN_LEFT:.1}" y1="{py:.2}" x2="{:.1}" y2="{py:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            MARGIN_LEFT + plot_w
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.2}" font-family="sans-serif" font-size="11" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 8.0,
            py + 4.0,
            tick_label(y)
        );
    }
    // Frame and axis labels.
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT:.1}" y="{MARGIN_TOP:.1}" width="{plot_w:.1}" height="{plot_h:.1}" fill="none" stroke="black" stroke-width="1"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 14.0,
        escape(x_label)
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{:.1}" font-family="sans-serif" font-size="13" text-anchor="middle" transform="rotate(-90 20 {:.1})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        escape(y_label)
    );

    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        if s.points.len() > 1 {
            let mut d = String::new();
            for (x, y) in &s.points {
                let _ = write!(d, "{:.2},{:.2} ", x_pos(*x), y_pos(*y));
            }
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                d.trim_end()
            );
        }
        for (x, y) in &s.points {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                x_pos(*x),
                y_pos(*y)
            );
        }
        // Legend entry.
        let ly = MARGIN_TOP + 14.0 + 18.0 * i as f64;
        let lx = MARGIN_LEFT + plot_w - 130.0;
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            lx + 22.0
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="12">{}</text>"#,
            lx + 28.0,
            ly + 4.0,
            escape(&s.label)
        );
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
