use std::collections::BTreeMap;
use std::fmt::Write;

use super::CliError;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 20.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf",
];

#[derive(Debug, serde::Deserialize)]
struct Row {
    metric: String,
    seed: u64,
    n: u64,
    value: f64,
}

/// Rows grouped by `(metric, seed)`, each sorted by `n`.
type Groups = BTreeMap<(String, u64), Vec<(u64, f64)>>;

fn parse(csv_text: &str) -> Result<Groups, CliError> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(csv_text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::SchemaMismatch(e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["metric", "seed", "n", "value"] {
        return Err(CliError::SchemaMismatch(format!(
            "header must be metric,seed,n,value, got {:?}",
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut groups = Groups::new();
    for (i, rec) in rdr.deserialize::<Row>().enumerate() {
        let row = rec.map_err(|e| CliError::SchemaMismatch(format!("row {}: {e}", i + 1)))?;
        if row.n == 0 || !row.value.is_finite() {
            return Err(CliError::SchemaMismatch(format!("row {}: n must be positive and value finite", i + 1)));
        }
        groups.entry((row.metric, row.seed)).or_default().push((row.n, row.value));
    }
    if groups.is_empty() {
        return Err(CliError::SchemaMismatch("no data rows".into()));
    }
    for pts in groups.values_mut() {
        pts.sort_by_key(|p| p.0);
    }
    Ok(groups)
}

/// Log-log SVG of a trajectory CSV: one polyline per `(metric, seed)`.
///
/// Nonpositive values are drawn on the bottom edge of the plot.
pub fn render_svg(csv_text: &str) -> Result<String, CliError> {
    let groups = parse(csv_text)?;
    let all = || groups.values().flatten();
    let x_lo = all().map(|p| (p.0 as f64).log10()).fold(f64::INFINITY, f64::min).floor();
    let mut x_hi = all().map(|p| (p.0 as f64).log10()).fold(f64::NEG_INFINITY, f64::max).ceil();
    if x_hi <= x_lo {
        x_hi = x_lo + 1.0;
    }
    let positive: Vec<f64> = all().map(|p| p.1).filter(|v| *v > 0.0).collect();
    let (mut y_lo, mut y_hi) = if positive.is_empty() {
        (-1.0, 0.0)
    } else {
        (
            positive.iter().map(|v| v.log10()).fold(f64::INFINITY, f64::min).floor(),
            positive.iter().map(|v| v.log10()).fold(f64::NEG_INFINITY, f64::max).ceil(),
        )
    };
    if y_hi <= y_lo {
        y_hi = y_lo + 1.0;
    }
    if all().any(|p| p.1 <= 0.0) {
        y_lo -= 1.0;
    }
    let px = |n: u64| LEFT + ((n as f64).log10() - x_lo) / (x_hi - x_lo) * (WIDTH - LEFT - RIGHT);
    let py = |v: f64| {
        let l = if v > 0.0 { v.log10().max(y_lo) } else { y_lo };
        HEIGHT - BOTTOM - (l - y_lo) / (y_hi - y_lo) * (HEIGHT - TOP - BOTTOM)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 800 500" width="800" height="500" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect x="0" y="0" width="800" height="500" fill="white"/>"#);
    let (x0, x1, y0, y1) = (LEFT, WIDTH - RIGHT, HEIGHT - BOTTOM, TOP);
    let _ = writeln!(
        s,
        r#"<path d="M{x0:.2} {y1:.2} L{x0:.2} {y0:.2} L{x1:.2} {y0:.2}" fill="none" stroke="black"/>"#
    );
    let mut k = x_lo as i64;
    while k <= x_hi as i64 {
        let x = px(10u64.saturating_pow(k.max(0) as u32));
        let _ = writeln!(s, r##"<line x1="{x:.2}" y1="{y0:.2}" x2="{x:.2}" y2="{:.2}" stroke="#999"/>"##, y0 + 5.0);
        let _ = writeln!(s, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">1e{k}</text>"#, y0 + 20.0);
        k += 1;
    }
    let mut k = y_lo as i64;
    while k <= y_hi as i64 {
        let y = py(10f64.powi(k as i32));
        let _ = writeln!(s, r##"<line x1="{:.2}" y1="{y:.2}" x2="{x0:.2}" y2="{y:.2}" stroke="#999"/>"##, x0 - 5.0);
        let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">1e{k}</text>"#, x0 - 8.0, y + 4.0);
        k += 1;
    }
    let _ = writeln!(s, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">n</text>"#, (x0 + x1) / 2.0, HEIGHT - 8.0);
    let metrics: Vec<&str> = {
        let mut m: Vec<&str> = groups.keys().map(|k| k.0.as_str()).collect();
        m.dedup();
        m
    };
    let _ = writeln!(s, r#"<text x="{x0:.2}" y="18">{}</text>"#, metrics.join(", "));
    for (i, ((metric, seed), pts)) in groups.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let _ = writeln!(s, r#"<g data-metric="{metric}" data-seed="{seed}">"#);
        if pts.len() == 1 {
            let (n, v) = pts[0];
            let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="4" fill="{color}"/>"#, px(n), py(v));
        } else {
            let coords: Vec<String> = pts.iter().map(|(n, v)| format!("{:.2},{:.2}", px(*n), py(*v))).collect();
            let _ = writeln!(
                s,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.2"/>"#,
                coords.join(" ")
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    Ok(s)
}
