//! Bare-bones SVG scatter plots and heatmaps. CSV stays the canonical
//! output; these are for a quick look.

use std::fmt::Write as _;

const W: f64 = 640.0;
const H: f64 = 480.0;
const MARGIN: f64 = 60.0;
const PALETTE: [&str; 6] = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let (lo, hi) = values
        .filter(|v| v.is_finite())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 * lo.abs().max(1.0) {
        return (lo - 0.5, hi + 0.5);
    }
    let pad = 0.05 * (hi - lo);
    (lo - pad, hi + pad)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn frame(out: &mut String, title: &str, x_label: &str, y_label: &str, x: (f64, f64), y: (f64, f64)) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<rect x="{MARGIN}" y="{MARGIN}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * MARGIN,
        H - 2.0 * MARGIN
    );
    let _ = writeln!(out, r#"<text x="{}" y="30" text-anchor="middle" font-size="14">{}</text>"#, W / 2.0, escape(title));
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        W / 2.0,
        H - 15.0,
        escape(x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="15" y="{}" text-anchor="middle" transform="rotate(-90 15 {})">{}</text>"#,
        H / 2.0,
        H / 2.0,
        escape(y_label)
    );
    for (v, px) in [(x.0, MARGIN), (x.1, W - MARGIN)] {
        let _ = writeln!(out, r#"<text x="{px}" y="{}" text-anchor="middle">{v:.4}</text>"#, H - MARGIN + 16.0);
    }
    for (v, py) in [(y.0, H - MARGIN), (y.1, MARGIN)] {
        let _ = writeln!(out, r#"<text x="{}" y="{py}" text-anchor="end">{v:.4}</text>"#, MARGIN - 4.0);
    }
}

/// Scatter plot of named point series.
pub fn scatter(title: &str, x_label: &str, y_label: &str, series: &[(String, Vec<(f64, f64)>)]) -> String {
    let x = bounds(series.iter().flat_map(|s| s.1.iter().map(|p| p.0)));
    let y = bounds(series.iter().flat_map(|s| s.1.iter().map(|p| p.1)));
    let mut out = String::new();
    frame(&mut out, title, x_label, y_label, x, y);
    let sx = |v: f64| MARGIN + (v - x.0) / (x.1 - x.0) * (W - 2.0 * MARGIN);
    let sy = |v: f64| H - MARGIN - (v - y.0) / (y.1 - y.0) * (H - 2.0 * MARGIN);
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        for &(a, b) in pts.iter().filter(|p| p.0.is_finite() && p.1.is_finite()) {
            let _ = writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(a), sy(b));
        }
        let ly = MARGIN + 14.0 + 16.0 * i as f64;
        let _ = writeln!(out, r#"<circle cx="{}" cy="{}" r="4" fill="{color}"/>"#, W - MARGIN - 110.0, ly - 4.0);
        let _ = writeln!(out, r#"<text x="{}" y="{ly}">{}</text>"#, W - MARGIN - 100.0, escape(name));
    }
    out.push_str("</svg>\n");
    out
}

/// Heatmap of a row-major `rows x cols` matrix, `x` along columns.
pub fn heatmap(title: &str, x_label: &str, y_label: &str, x: &[f64], y: &[f64], values: &[f64]) -> String {
    let (rows, cols) = (y.len(), x.len());
    let mut out = String::new();
    frame(
        &mut out,
        title,
        x_label,
        y_label,
        (x.first().copied().unwrap_or(0.0), x.last().copied().unwrap_or(1.0)),
        (y.first().copied().unwrap_or(0.0), y.last().copied().unwrap_or(1.0)),
    );
    let peak = values.iter().copied().fold(0.0f64, f64::max);
    let cw = (W - 2.0 * MARGIN) / cols.max(1) as f64;
    let ch = (H - 2.0 * MARGIN) / rows.max(1) as f64;
    for i in 0..rows {
        for j in 0..cols {
            let v = if peak > 0.0 { (values[i * cols + j] / peak).clamp(0.0, 1.0) } else { 0.0 };
            let shade = (255.0 * (1.0 - v)).round() as u8;
            let _ = writeln!(
                out,
                r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="rgb(255,{shade},{shade})"/>"#,
                MARGIN + j as f64 * cw,
                H - MARGIN - (i + 1) as f64 * ch,
                cw + 0.05,
                ch + 0.05
            );
        }
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scatter_is_well_formed() {
        let s = scatter("t<1>", "x", "y", &[("a".into(), vec![(0.0, 1.0), (1.0, f64::NAN)])]);
        assert!(s.starts_with("<svg") && s.trim_end().ends_with("</svg>"));
        assert!(s.contains("t&lt;1&gt;"));
        assert_eq!(s.matches("<circle").count(), 2);
    }

    #[test]
    fn heatmap_has_one_cell_per_value() {
        let s = heatmap("h", "r1", "r2", &[1.0, 2.0, 3.0], &[1.0, 2.0], &[0.0; 6]);
        assert_eq!(s.matches("fill=\"rgb(").count(), 6);
    }
}
