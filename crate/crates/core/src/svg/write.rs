use std::fmt::Write as _;

use super::{FillRule, LayeredSvg, Shape};
use crate::geom::{Segment, Subpath};

/// Writes a document that `parse_svg` reads back to the same layer structure.
///
/// A single-shape layer becomes one `<path>`; a merged layer becomes a
/// `<g data-layer>` group with one `<path>` per shape.
pub fn serialize_svg(svg: &LayeredSvg) -> String {
    let mut out = String::new();
    let (w, h) = (num(svg.width), num(svg.height));
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    for layer in &svg.layers {
        let fill = layer.fill.hex();
        if let [shape] = layer.shapes.as_slice() {
            let _ = writeln!(out, r#"  <path fill="{fill}"{}/>"#, path_attrs(shape));
        } else {
            let _ = writeln!(out, r#"  <g data-layer="{}" fill="{fill}">"#, layer.index);
            for shape in &layer.shapes {
                let _ = writeln!(out, "    <path{}/>", path_attrs(shape));
            }
            out.push_str("  </g>\n");
        }
    }
    out.push_str("</svg>\n");
    out
}

fn path_attrs(shape: &Shape) -> String {
    let rule = match shape.fill_rule {
        FillRule::NonZero => "",
        FillRule::EvenOdd => r#" fill-rule="evenodd""#,
    };
    format!(r#"{rule} d="{}""#, path_data(&shape.subpaths))
}

pub(crate) fn path_data(subpaths: &[Subpath]) -> String {
    let mut d = String::new();
    for sp in subpaths {
        if !d.is_empty() {
            d.push(' ');
        }
        let _ = write!(d, "M{} {}", num(sp.start.x), num(sp.start.y));
        for seg in &sp.segments {
            match *seg {
                Segment::Line(p) => {
                    let _ = write!(d, "L{} {}", num(p.x), num(p.y));
                }
                Segment::Cubic(a, b, p) => {
                    let _ = write!(d, "C{} {} {} {} {} {}", num(a.x), num(a.y), num(b.x), num(b.y), num(p.x), num(p.y));
                }
            }
        }
        d.push('Z');
    }
    d
}

/// Shortest decimal form that parses back to the same `f64`.
fn num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    format!("{v}")
}
