//! Converts a stroked polyline into fill outlines: one quad per segment and a
//! round join at every interior vertex, all wound the same way so the nonzero
//! rule paints their union. Ends are butt-capped.

use crate::geom::{ellipse, polygon_area, Point, Subpath};

pub(super) fn stroke_outline(pts: &[Point], closed: bool, half_width: f64) -> Vec<Subpath> {
    let mut out = Vec::new();
    if pts.len() < 2 || half_width <= 0.0 {
        return out;
    }
    let n = pts.len();
    let seg_count = if closed { n } else { n - 1 };
    for i in 0..seg_count {
        let a = pts[i];
        let b = pts[(i + 1) % n];
        let len = a.dist(b);
        if len == 0.0 {
            continue;
        }
        let nx = -(b.y - a.y) / len * half_width;
        let ny = (b.x - a.x) / len * half_width;
        let off = Point::new(nx, ny);
        let mut quad = vec![a + off, b + off, b - off, a - off];
        if polygon_area(&quad) < 0.0 {
            quad.reverse();
        }
        out.extend(Subpath::from_polygon(&quad));
    }
    let joins = if closed { 0..n } else { 1..n - 1 };
    for i in joins {
        out.push(ellipse(pts[i].x, pts[i].y, half_width, half_width));
    }
    out
}
