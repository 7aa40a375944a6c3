//! CSV emission. One schema for everything: `x,analytic,montecarlo,stderr`,
//! numbers in full-precision scientific notation (they round-trip through
//! `str::parse::<f64>` bit-exactly), absent columns left empty, final row
//! newline-terminated.

use swipt_outage::{OutageEstimate, SweepResult};

pub const CSV_HEADER: &str = "x,analytic,montecarlo,stderr";

/// Full-precision scientific notation; 17 significant digits are enough to
/// reproduce any f64 exactly.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

fn cell(v: Option<f64>) -> String {
    v.map(format_number).unwrap_or_default()
}

/// Renders a sweep as CSV.
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * (sweep.rows.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in &sweep.rows {
        out.push_str(&format_number(row.x));
        out.push(',');
        out.push_str(&cell(row.analytic));
        out.push(',');
        out.push_str(&cell(row.empirical));
        out.push(',');
        out.push_str(&cell(row.stderr));
        out.push('\n');
    }
    out
}

/// Renders a single evaluated point; `x` carries whatever the command swept
/// or fixed (theta or SNR).
pub fn point_csv(x: f64, analytic: f64, estimate: Option<&OutageEstimate>) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    out.push_str(&format_number(x));
    out.push(',');
    out.push_str(&format_number(analytic));
    out.push(',');
    out.push_str(&cell(estimate.map(|e| e.p_hat)));
    out.push(',');
    out.push_str(&cell(estimate.map(|e| e.stderr)));
    out.push('\n');
    out
}
