//! Static CSV and SVG emission for learning curves and replay metrics.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::replay::{MetricsReport, ReplayError, Side};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN_L: f64 = 56.0;
const MARGIN_R: f64 = 16.0;
const MARGIN_T: f64 = 32.0;
const MARGIN_B: f64 = 44.0;
const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurveSummary {
    pub episodes: usize,
    pub first10: f64,
    pub final10: f64,
    pub mean: f64,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn summarize(returns: &[f64]) -> CurveSummary {
    let k = returns.len().min(10);
    CurveSummary {
        episodes: returns.len(),
        first10: mean(&returns[..k]),
        final10: mean(&returns[returns.len() - k..]),
        mean: mean(returns),
    }
}

/// Reads the `episode,return,...` CSV written by training; `#` lines are skipped.
pub fn read_curve_csv(text: &str) -> Result<Vec<f64>, ReplayError> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| fmt_err(0, e))?.clone();
    let col = headers.iter().position(|h| h == "return").ok_or(ReplayError::Format {
        line: 1,
        message: "missing `return` column".into(),
    })?;
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| fmt_err(i + 2, e))?;
        let v = rec.get(col).unwrap_or("");
        out.push(v.parse::<f64>().map_err(|_| ReplayError::Format {
            line: rec.position().map_or(i + 2, |p| p.line() as usize),
            message: format!("bad return value `{v}`"),
        })?);
    }
    Ok(out)
}

fn fmt_err(line: usize, e: csv::Error) -> ReplayError {
    ReplayError::Format {
        line: e.position().map_or(line, |p| p.line() as usize),
        message: e.to_string(),
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Rounds the axis maximum up to 1, 2 or 5 times a power of ten.
fn nice_ceiling(v: f64) -> f64 {
    if v <= 0.0 {
        return 1.0;
    }
    let p = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0].iter().map(|m| m * p).find(|&c| c >= v).unwrap_or(10.0 * p)
}

/// Line plot of per-episode returns, one polyline per series. `manifest` is embedded
/// in a `<desc>` element.
pub fn curves_svg(title: &str, series: &[(String, Vec<f64>)], manifest: &str) -> String {
    let n_max = series.iter().map(|(_, v)| v.len()).max().unwrap_or(0).max(2);
    let y_max = nice_ceiling(series.iter().flat_map(|(_, v)| v.iter().copied()).fold(0.0, f64::max));
    let pw = WIDTH - MARGIN_L - MARGIN_R;
    let ph = HEIGHT - MARGIN_T - MARGIN_B;
    let sx = |i: usize| MARGIN_L + pw * i as f64 / (n_max - 1) as f64;
    let sy = |v: f64| MARGIN_T + ph * (1.0 - v / y_max);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<desc>{}</desc>", escape_xml(manifest));
    let _ = writeln!(s, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape_xml(title)
    );
    for k in 0..=5 {
        let v = y_max * k as f64 / 5.0;
        let y = sy(v);
        let _ = writeln!(
            s,
            r##"<line x1="{MARGIN_L}" y1="{y:.1}" x2="{:.1}" y2="{y:.1}" stroke="#ddd"/><text x="{:.1}" y="{:.1}" text-anchor="end">{}</text>"##,
            WIDTH - MARGIN_R,
            MARGIN_L - 6.0,
            y + 4.0,
            fmt_tick(v)
        );
    }
    for k in 0..=4 {
        let i = (n_max - 1) * k / 4;
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            sx(i),
            HEIGHT - MARGIN_B + 16.0,
            i
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">episode</text>"#,
        MARGIN_L + pw / 2.0,
        HEIGHT - 8.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{:.1}" text-anchor="middle" transform="rotate(-90 14 {:.1})">return</text>"#,
        MARGIN_T + ph / 2.0,
        MARGIN_T + ph / 2.0
    );
    let _ = writeln!(
        s,
        r#"<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#
    );
    for (k, (name, values)) in series.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        if !values.is_empty() {
            let pts: Vec<String> = values.iter().enumerate().map(|(i, v)| format!("{:.1},{:.1}", sx(i), sy(*v))).collect();
            let _ = writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, pts.join(" "));
        }
        let ly = MARGIN_T + 14.0 + 16.0 * k as f64;
        let lx = MARGIN_L + 10.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{:.1}" x2="{:.1}" y2="{:.1}" stroke="{color}" stroke-width="2"/><text x="{:.1}" y="{ly:.1}">{}</text>"#,
            ly - 4.0,
            lx + 18.0,
            ly - 4.0,
            lx + 24.0,
            escape_xml(name)
        );
    }
    s.push_str("</svg>\n");
    s
}

fn fmt_tick(v: f64) -> String {
    if v.fract() == 0.0 {
        format!("{v:.0}")
    } else {
        format!("{v:.1}")
    }
}

/// One CSV row per (report, side).
pub fn metrics_csv(reports: &[MetricsReport], manifest: &str) -> String {
    let mut out = String::new();
    for line in manifest.lines() {
        let _ = writeln!(out, "# {line}");
    }
    out.push_str("label,side,apm,epm,co,ao,ncr,nc_epm\n");
    for r in reports {
        for side in Side::ALL {
            if let Some(m) = r.side(side) {
                let _ = writeln!(
                    out,
                    "{},{},{:.4},{:.4},{},{},{:.4},{:.4}",
                    r.label,
                    side.name(),
                    m.apm,
                    m.epm,
                    m.co,
                    m.ao,
                    m.ncr,
                    m.nc_epm
                );
            }
        }
    }
    out
}
