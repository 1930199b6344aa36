//! Hand-written SVG rendering of persistence diagrams.

use std::fmt::Write;

use cdpers::persistence::PersistenceDiagram;

const SIZE: f64 = 600.0;
const LEFT: f64 = 60.0;
const RIGHT: f64 = 20.0;
const BOTTOM: f64 = 50.0;
/// Band above the plot area holding intervals that never die.
const TOP: f64 = 50.0;
const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

/// A distinct diagram point and how many intervals land on it.
#[derive(Debug, Clone, PartialEq)]
pub struct Marker {
    pub degree: usize,
    pub birth: f64,
    pub death: f64,
    pub multiplicity: usize,
}

/// Groups identical `(degree, birth, death)` triples.
pub fn markers(diagram: &PersistenceDiagram) -> Vec<Marker> {
    let mut out: Vec<Marker> = Vec::new();
    for (p, list) in diagram.degrees().iter().enumerate() {
        // Lists are sorted, so equal intervals are adjacent.
        for i in list {
            match out.last_mut() {
                Some(m) if m.degree == p && m.birth == i.birth && m.death == i.death => {
                    m.multiplicity += 1
                }
                _ => out.push(Marker {
                    degree: p,
                    birth: i.birth,
                    death: i.death,
                    multiplicity: 1,
                }),
            }
        }
    }
    out
}

/// Renders a 600×600 birth/death scatter plot.
pub fn render_svg(diagram: &PersistenceDiagram, title: &str) -> String {
    let points = markers(diagram);
    let finite = points
        .iter()
        .flat_map(|m| [m.birth, m.death])
        .filter(|v| v.is_finite());
    let (lo, hi) = finite.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
        (lo.min(v), hi.max(v))
    });
    let (lo, hi) = if lo.is_finite() { (lo, hi) } else { (0.0, 1.0) };
    let span = if hi > lo { hi - lo } else { 1.0 };
    let (lo, hi) = (lo - 0.1 * span, hi + 0.1 * span);

    let plot_w = SIZE - LEFT - RIGHT;
    let plot_h = SIZE - TOP - BOTTOM;
    let sx = |v: f64| LEFT + (v - lo) / (hi - lo) * plot_w;
    let sy = |v: f64| SIZE - BOTTOM - (v - lo) / (hi - lo) * plot_h;
    let inf_y = TOP / 2.0;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<text x="{}" y="14" text-anchor="middle" font-size="13">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
    // Frame, infinity band and diagonal.
    let _ = writeln!(
        s,
        r#"<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{inf_y}" x2="{}" y2="{inf_y}" stroke="#999" stroke-dasharray="4 3"/>"##,
        SIZE - RIGHT
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="end">∞</text>"#,
        LEFT - 6.0,
        inf_y + 4.0
    );
    let _ = writeln!(
        s,
        r#"<line class="diagonal" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="0.8"/>"#,
        sx(lo),
        sy(lo),
        sx(hi),
        sy(hi)
    );
    for k in 0..=4 {
        let v = lo + (hi - lo) * k as f64 / 4.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{}" text-anchor="middle">{}</text>"#,
            sx(v),
            SIZE - BOTTOM + 16.0,
            tick(v)
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            sy(v) + 4.0,
            tick(v)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">birth</text>"#,
        LEFT + plot_w / 2.0,
        SIZE - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="14" y="{}" text-anchor="middle" transform="rotate(-90 14 {})">death</text>"#,
        TOP + plot_h / 2.0,
        TOP + plot_h / 2.0
    );

    for m in &points {
        let color = COLORS[m.degree % COLORS.len()];
        let x = sx(m.birth);
        if m.death.is_finite() {
            let y = sy(m.death);
            let _ = writeln!(
                s,
                r#"<circle class="finite" cx="{x:.2}" cy="{y:.2}" r="4" fill="{color}"/>"#
            );
            label(&mut s, m.multiplicity, x, y);
        } else {
            let _ = writeln!(
                s,
                r#"<polygon class="infinite" points="{:.2},{:.2} {:.2},{:.2} {:.2},{:.2}" fill="{color}"/>"#,
                x,
                inf_y - 5.0,
                x - 5.0,
                inf_y + 4.0,
                x + 5.0,
                inf_y + 4.0
            );
            label(&mut s, m.multiplicity, x, inf_y);
        }
    }
    for p in 0..diagram.degrees().len() {
        let y = SIZE - BOTTOM - 12.0 - 16.0 * p as f64;
        let x = SIZE - RIGHT - 50.0;
        let _ = writeln!(
            s,
            r#"<circle cx="{x}" cy="{y}" r="4" fill="{}"/><text x="{}" y="{}">H{p}</text>"#,
            COLORS[p % COLORS.len()],
            x + 8.0,
            y + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

fn label(s: &mut String, multiplicity: usize, x: f64, y: f64) {
    if multiplicity > 1 {
        let _ = writeln!(
            s,
            r#"<text class="multiplicity" x="{:.2}" y="{:.2}">{multiplicity}</text>"#,
            x + 6.0,
            y - 6.0
        );
    }
}

fn tick(v: f64) -> String {
    let t = format!("{v:.3}");
    if t == "-0.000" {
        "0.000".into()
    } else {
        t
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
