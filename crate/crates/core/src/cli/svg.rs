//! SVG heatmap of a square matrix on a diverging scale over [-1, 1].

use std::fmt::Write as _;

use crate::matrix::Matrix;

const CELL: usize = 14;
const MARGIN: usize = 44;
const LEGEND_GAP: usize = 24;
const LEGEND_WIDTH: usize = 18;
const LEGEND_LABELS: usize = 36;

const NEGATIVE: (f64, f64, f64) = (33.0, 102.0, 172.0);
const MIDDLE: (f64, f64, f64) = (247.0, 247.0, 247.0);
const POSITIVE: (f64, f64, f64) = (178.0, 24.0, 43.0);

/// Blue at -1, near-white at 0, red at +1. Values outside the range clamp.
pub fn diverging_color(value: f64) -> String {
    let v = if value.is_nan() { 0.0 } else { value.clamp(-1.0, 1.0) };
    let (end, t) = if v < 0.0 { (NEGATIVE, -v) } else { (POSITIVE, v) };
    let mix = |a: f64, b: f64| (a + (b - a) * t).round() as u8;
    format!(
        "#{:02x}{:02x}{:02x}",
        mix(MIDDLE.0, end.0),
        mix(MIDDLE.1, end.1),
        mix(MIDDLE.2, end.2)
    )
}

/// Renders `m` with 1-based node ids on both axes and a value legend.
pub fn render_heatmap(m: &Matrix, title: &str) -> String {
    let n = m.dim();
    let grid = n * CELL;
    let width = MARGIN + grid + LEGEND_GAP + LEGEND_WIDTH + LEGEND_LABELS;
    let height = MARGIN + grid + MARGIN / 2;
    let label_every = n.div_ceil(40).max(1);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="9">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);

    let _ = writeln!(s, r#"<g id="cells" shape-rendering="crispEdges">"#);
    for i in 0..n {
        for j in 0..n {
            let v = m[(i, j)];
            let _ = writeln!(
                s,
                r#"<rect x="{}" y="{}" width="{CELL}" height="{CELL}" fill="{}"><title>({}, {}): {}</title></rect>"#,
                MARGIN + j * CELL,
                MARGIN + i * CELL,
                diverging_color(v),
                i + 1,
                j + 1,
                super::output::fmt_sig12(v)
            );
        }
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r#"<g id="axes" fill="black">"#);
    for k in (0..n).filter(|k| k % label_every == 0 || *k == n - 1) {
        let center = MARGIN + k * CELL + CELL / 2;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end" dominant-baseline="middle">{}</text>"#,
            MARGIN - 4,
            center,
            k + 1
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            center,
            MARGIN - 6,
            k + 1
        );
    }
    let _ = writeln!(s, "</g>");

    let lx = MARGIN + grid + LEGEND_GAP;
    let _ = writeln!(s, "<defs>");
    let _ = writeln!(s, r#"<linearGradient id="legend-scale" x1="0" y1="1" x2="0" y2="0">"#);
    for (offset, v) in [(0.0, -1.0), (0.25, -0.5), (0.5, 0.0), (0.75, 0.5), (1.0, 1.0)] {
        let _ = writeln!(s, r#"<stop offset="{offset}" stop-color="{}"/>"#, diverging_color(v));
    }
    let _ = writeln!(s, "</linearGradient>");
    let _ = writeln!(s, "</defs>");
    let _ = writeln!(s, r#"<g id="legend">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{lx}" y="{MARGIN}" width="{LEGEND_WIDTH}" height="{grid}" fill="url(#legend-scale)" stroke="black" stroke-width="0.5"/>"#
    );
    for (label, frac) in [("1", 0.0), ("0.5", 0.25), ("0", 0.5), ("-0.5", 0.75), ("-1", 1.0)] {
        let y = MARGIN as f64 + frac * grid as f64;
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{y}" dominant-baseline="middle">{label}</text>"#,
            lx + LEGEND_WIDTH + 4
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
