//! SVG rendering: one `rect` per element with its size printed in the middle.

use std::fmt::Write;

use crate::geometry::Dissection;

pub fn to_svg(d: &Dissection, cell_px: u32) -> String {
    let px = cell_px.max(1);
    let side = d.n() * px;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{side}" height="{side}" viewBox="0 0 {side} {side}">"#
    );
    let _ = writeln!(out, r#"  <g fill="none" stroke="black" stroke-width="1">"#);
    for e in d.elements() {
        let (x, y, w) = (e.x * px, (d.n() - e.top()) * px, e.s * px);
        let _ = writeln!(out, r#"    <rect x="{x}" y="{y}" width="{w}" height="{w}"/>"#);
    }
    let _ = writeln!(out, "  </g>");
    let font = (px * 3 / 5).max(1);
    let _ = writeln!(
        out,
        r#"  <g font-family="sans-serif" font-size="{font}" text-anchor="middle" dominant-baseline="central">"#
    );
    for e in d.elements() {
        // doubled coordinates keep the centre integral
        let cx = (2 * e.x + e.s) * px;
        let cy = (2 * (d.n() - e.top()) + e.s) * px;
        let (cx, cy) = (f64::from(cx) / 2.0, f64::from(cy) / 2.0);
        let _ = writeln!(out, r#"    <text x="{cx}" y="{cy}">{}</text>"#, e.s);
    }
    let _ = writeln!(out, "  </g>");
    out.push_str("</svg>\n");
    out
}
