//! Hand-emitted SVG 1.1 line charts of sweep results: the analytic curve as
//! a polyline, Monte Carlo estimates as circle markers, optional log10 y
//! axis. No charting dependency, so the output stays diffable.

use std::fmt::Write as _;

use swipt_outage::SweepResult;

use crate::error::{CliError, Result};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 440.0;
const MARGIN_LEFT: f64 = 78.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 32.0;
const MARGIN_BOTTOM: f64 = 56.0;

#[derive(Debug)]
pub struct Chart {
    pub svg: String,
    /// Set when every y value was identical and the axis had to be padded.
    pub degenerate_range: bool,
}

fn fmt_tick(v: f64) -> String {
    let a = v.abs();
    if v == 0.0 {
        "0".to_string()
    } else if !(1e-3..1e4).contains(&a) {
        format!("{v:.2e}")
    } else {
        let s = format!("{v:.4}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

/// Renders the sweep. Requires at least two rows; with a log axis, rows
/// whose value is nonpositive are dropped from that series.
pub fn sweep_chart(sweep: &SweepResult, log_y: bool) -> Result<Chart> {
    if sweep.rows.len() < 2 {
        return Err(CliError::Validation(
            "a chart needs at least two sweep rows".into(),
        ));
    }
    let transform = |y: f64| -> Option<f64> {
        if log_y {
            (y > 0.0).then(|| y.log10())
        } else {
            Some(y)
        }
    };

    let analytic: Vec<(f64, f64)> = sweep
        .rows
        .iter()
        .filter_map(|r| r.analytic.and_then(transform).map(|y| (r.x, y)))
        .collect();
    let empirical: Vec<(f64, f64)> = sweep
        .rows
        .iter()
        .filter_map(|r| r.empirical.and_then(transform).map(|y| (r.x, y)))
        .collect();
    if analytic.len() + empirical.len() < 2 {
        return Err(CliError::Validation(
            "fewer than two plottable values (nonpositive data on a log axis?)".into(),
        ));
    }

    let xs = sweep.rows.iter().map(|r| r.x);
    let x_min = xs.clone().fold(f64::MAX, f64::min);
    let x_max = xs.fold(f64::MIN, f64::max);
    let ys = analytic.iter().chain(&empirical).map(|&(_, y)| y);
    let mut y_min = ys.clone().fold(f64::MAX, f64::min);
    let mut y_max = ys.fold(f64::MIN, f64::max);

    let degenerate_range = y_min == y_max;
    if degenerate_range {
        let pad = if log_y {
            0.5
        } else {
            y_min.abs().max(1e-12) * 0.1
        };
        y_min -= pad;
        y_max += pad;
    }
    let x_span = if x_max > x_min { x_max - x_min } else { 1.0 };
    let y_span = y_max - y_min;

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let px = |x: f64| MARGIN_LEFT + (x - x_min) / x_span * plot_w;
    let py = |y: f64| MARGIN_TOP + (1.0 - (y - y_min) / y_span) * plot_h;

    let mut svg = String::new();
    let _ = write!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = write!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // Frame
    let _ = write!(
        svg,
        r##"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="#444" stroke-width="1"/>"##
    );

    // Ticks and grid
    const TICKS: usize = 5;
    for i in 0..=TICKS {
        let f = i as f64 / TICKS as f64;
        let x = x_min + f * x_span;
        let y = y_min + f * y_span;
        let xp = px(x);
        let yp = py(y);
        let _ = write!(
            svg,
            r##"<line x1="{xp:.2}" y1="{:.2}" x2="{xp:.2}" y2="{:.2}" stroke="#444"/>"##,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 5.0
        );
        let _ = write!(
            svg,
            r#"<text x="{xp:.2}" y="{:.2}" font-size="12" text-anchor="middle" font-family="sans-serif">{}</text>"#,
            MARGIN_TOP + plot_h + 20.0,
            fmt_tick(x)
        );
        let _ = write!(
            svg,
            r##"<line x1="{:.2}" y1="{yp:.2}" x2="{MARGIN_LEFT}" y2="{yp:.2}" stroke="#444"/>"##,
            MARGIN_LEFT - 5.0
        );
        let label = if log_y {
            format!("1e{}", fmt_tick(y))
        } else {
            fmt_tick(y)
        };
        let _ = write!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-size="12" text-anchor="end" font-family="sans-serif">{label}</text>"#,
            MARGIN_LEFT - 9.0,
            yp + 4.0
        );
    }

    // Axis titles
    let _ = write!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-size="14" text-anchor="middle" font-family="sans-serif">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 12.0,
        sweep.variable
    );
    let y_title_x = 18.0;
    let y_title_y = MARGIN_TOP + plot_h / 2.0;
    let _ = write!(
        svg,
        r#"<text x="{y_title_x:.2}" y="{y_title_y:.2}" font-size="14" text-anchor="middle" font-family="sans-serif" transform="rotate(-90 {y_title_x:.2} {y_title_y:.2})">outage probability{}</text>"#,
        if log_y { " (log10)" } else { "" }
    );

    // Analytic curve
    if analytic.len() >= 2 {
        let points: Vec<String> = analytic
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", px(x), py(y)))
            .collect();
        let _ = write!(
            svg,
            r##"<polyline points="{}" fill="none" stroke="#2b6cb0" stroke-width="1.8"/>"##,
            points.join(" ")
        );
    }

    // Monte Carlo markers
    for &(x, y) in &empirical {
        let _ = write!(
            svg,
            r##"<circle cx="{:.2}" cy="{:.2}" r="3.2" fill="none" stroke="#c53030" stroke-width="1.5"/>"##,
            px(x),
            py(y)
        );
    }

    svg.push_str("</svg>\n");
    Ok(Chart {
        svg,
        degenerate_range,
    })
}
