//! Scatter plot of a diagram as a standalone SVG document.

use std::fmt::Write;

use crate::types::PersistenceDiagram;

const SIZE: f64 = 400.0;
const PAD: f64 = 40.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// Essential pairs are drawn on a dashed line above the largest finite value.
pub fn diagram_svg(dgm: &PersistenceDiagram) -> String {
    let finite = dgm.pairs().iter().filter(|p| !p.is_essential());
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for p in dgm.pairs() {
        lo = lo.min(p.birth);
        hi = hi.max(p.birth);
    }
    for p in finite {
        hi = hi.max(p.death);
    }
    if !lo.is_finite() {
        (lo, hi) = (0.0, 1.0);
    }
    if hi <= lo {
        hi = lo + 1.0;
    }
    let top = hi + 0.1 * (hi - lo);
    let plot = SIZE - 2.0 * PAD;
    let sx = |v: f64| PAD + (v - lo) / (top - lo) * plot;
    let sy = |v: f64| SIZE - PAD - (v - lo) / (top - lo) * plot;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let _ = writeln!(
        out,
        r##"<line class="diagonal" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" stroke="#888888"/>"##,
        sx(lo),
        sy(lo),
        sx(top),
        sy(top)
    );
    if dgm.pairs().iter().any(|p| p.is_essential()) {
        let _ = writeln!(
            out,
            r##"<line class="infinity" x1="{:.3}" y1="{y:.3}" x2="{:.3}" y2="{y:.3}" stroke="#888888" stroke-dasharray="4 4"/>"##,
            sx(lo),
            sx(top),
            y = sy(top)
        );
    }
    for p in dgm.pairs() {
        let death = if p.is_essential() { top } else { p.death };
        let _ = writeln!(
            out,
            r#"<circle class="h{}" cx="{:.3}" cy="{:.3}" r="3" fill="{}"/>"#,
            p.dim,
            sx(p.birth),
            sy(death),
            COLORS[p.dim % COLORS.len()]
        );
    }
    let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="12">birth</text>"#, SIZE / 2.0, SIZE - 10.0);
    let _ = writeln!(out, r#"<text x="10" y="{}" font-size="12">death</text>"#, SIZE / 2.0);
    out.push_str("</svg>\n");
    out
}
