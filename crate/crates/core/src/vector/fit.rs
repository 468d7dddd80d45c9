//! Least-squares cubic fitting through polygon vertices, split recursively at
//! the worst-fitting vertex.

use crate::geom::{cubic_point, Point, Segment};

/// Turning angle above which a vertex is kept as a sharp corner (cosine).
const CORNER_COS: f64 = 0.5;
const MAX_DEPTH: u32 = 16;

fn dot(a: Point, b: Point) -> f64 {
    a.x * b.x + a.y * b.y
}

fn unit(p: Point) -> Option<Point> {
    let len = p.x.hypot(p.y);
    (len > 1e-12).then(|| p.scale(1.0 / len))
}

fn round3(p: Point) -> Point {
    Point::new((p.x * 1000.0).round() / 1000.0, (p.y * 1000.0).round() / 1000.0)
}

fn is_corner(prev: Point, p: Point, next: Point) -> bool {
    match (unit(p - prev), unit(next - p)) {
        (Some(a), Some(b)) => dot(a, b) < CORNER_COS,
        _ => true,
    }
}

/// Indices of vertices whose turning angle makes them sharp corners.
pub fn sharp_vertices(ring: &[Point]) -> Vec<usize> {
    let n = ring.len();
    if n < 3 {
        return (0..n).collect();
    }
    (0..n).filter(|&i| is_corner(ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n])).collect()
}

/// Segments of a closed ring through cubics fitted within `tolerance`, kept
/// sharp at the `corners` (ascending vertex indices). The outline starts at
/// the first corner, or at vertex 0 when there is none. Control points are
/// rounded to three decimals.
pub fn fit_ring(ring: &[Point], corners: &[usize], tolerance: f64) -> (Point, Vec<Segment>) {
    let n = ring.len();
    if n < 3 {
        return (ring[0], ring[1..].iter().map(|&p| Segment::Line(p)).collect());
    }
    let mut segs = Vec::new();
    if corners.is_empty() {
        let mut chain: Vec<Point> = ring.to_vec();
        chain.push(ring[0]);
        let chain = densify(&chain);
        let t = unit(ring[1] - ring[n - 1]).unwrap_or(Point::new(1.0, 0.0));
        fit_cubic(&chain, t, t.scale(-1.0), tolerance, &mut segs, 0);
        return (ring[0], segs);
    }
    for (k, &c) in corners.iter().enumerate() {
        let next = corners[(k + 1) % corners.len()];
        let len = (next + n - c - 1) % n + 1;
        let chain: Vec<Point> = (0..=len).map(|j| ring[(c + j) % n]).collect();
        fit_chain(&chain, tolerance, &mut segs);
    }
    (ring[corners[0]], segs)
}

/// Inserts points so no gap exceeds one pixel; the fit error is only
/// measured at points.
fn densify(chain: &[Point]) -> Vec<Point> {
    let mut out = vec![chain[0]];
    for w in chain.windows(2) {
        let steps = w[0].dist(w[1]).ceil().max(1.0) as usize;
        for k in 1..=steps {
            out.push(w[0].lerp(w[1], k as f64 / steps as f64));
        }
    }
    out
}

fn fit_chain(chain: &[Point], tolerance: f64, out: &mut Vec<Segment>) {
    let m = chain.len() - 1;
    if m < 2 {
        out.push(Segment::Line(chain[m]));
        return;
    }
    let tangents = (unit(chain[1] - chain[0]), unit(chain[m - 1] - chain[m]));
    let chain = densify(chain);
    match tangents {
        (Some(tl), Some(tr)) => fit_cubic(&chain, tl, tr, tolerance, out, 0),
        _ => out.extend(chain[1..].iter().map(|&p| Segment::Line(p))),
    }
}

fn chord_params(pts: &[Point]) -> Vec<f64> {
    let mut u = vec![0.0; pts.len()];
    for i in 1..pts.len() {
        u[i] = u[i - 1] + pts[i].dist(pts[i - 1]);
    }
    let total = u[pts.len() - 1];
    if total > 0.0 {
        u.iter_mut().for_each(|v| *v /= total);
    }
    u
}

fn bernstein(t: f64) -> [f64; 4] {
    let s = 1.0 - t;
    [s * s * s, 3.0 * s * s * t, 3.0 * s * t * t, t * t * t]
}

fn generate(pts: &[Point], u: &[f64], tl: Point, tr: Point) -> [Point; 4] {
    let (p0, p3) = (pts[0], pts[pts.len() - 1]);
    let mut c = [[0.0; 2]; 2];
    let mut x = [0.0; 2];
    for (p, &t) in pts.iter().zip(u) {
        let b = bernstein(t);
        let a1 = tl.scale(b[1]);
        let a2 = tr.scale(b[2]);
        c[0][0] += dot(a1, a1);
        c[0][1] += dot(a1, a2);
        c[1][1] += dot(a2, a2);
        let base = p0.scale(b[0] + b[1]) + p3.scale(b[2] + b[3]);
        let tmp = *p - base;
        x[0] += dot(a1, tmp);
        x[1] += dot(a2, tmp);
    }
    c[1][0] = c[0][1];
    let det = c[0][0] * c[1][1] - c[0][1] * c[1][0];
    let chord = p0.dist(p3);
    let fallback = chord / 3.0;
    let (mut al, mut ar) = if det.abs() > 1e-12 {
        ((x[0] * c[1][1] - x[1] * c[0][1]) / det, (c[0][0] * x[1] - c[1][0] * x[0]) / det)
    } else {
        (fallback, fallback)
    };
    if al < 1e-6 * chord || ar < 1e-6 * chord {
        al = fallback;
        ar = fallback;
    }
    [p0, p0 + tl.scale(al), p3 + tr.scale(ar), p3]
}

fn max_error(pts: &[Point], u: &[f64], bez: &[Point; 4]) -> (f64, usize) {
    let mut worst = (0.0, pts.len() / 2);
    for i in 1..pts.len() - 1 {
        let q = cubic_point(bez[0], bez[1], bez[2], bez[3], u[i]);
        let d = (q.x - pts[i].x).powi(2) + (q.y - pts[i].y).powi(2);
        if d > worst.0 {
            worst = (d, i);
        }
    }
    worst
}

/// One Newton step per parameter toward the closest curve point.
fn reparameterize(pts: &[Point], u: &[f64], b: &[Point; 4]) -> Vec<f64> {
    pts.iter()
        .zip(u)
        .map(|(p, &t)| {
            let q = cubic_point(b[0], b[1], b[2], b[3], t);
            let d1 = [(b[1] - b[0]).scale(3.0), (b[2] - b[1]).scale(3.0), (b[3] - b[2]).scale(3.0)];
            let d2 = [(d1[1] - d1[0]).scale(2.0), (d1[2] - d1[1]).scale(2.0)];
            let s = 1.0 - t;
            let q1 = d1[0].scale(s * s) + d1[1].scale(2.0 * s * t) + d1[2].scale(t * t);
            let q2 = d2[0].scale(s) + d2[1].scale(t);
            let diff = q - *p;
            let num = dot(diff, q1);
            let den = dot(q1, q1) + dot(diff, q2);
            if den.abs() < 1e-12 {
                t
            } else {
                (t - num / den).clamp(0.0, 1.0)
            }
        })
        .collect()
}

fn push_cubic(b: &[Point; 4], out: &mut Vec<Segment>) {
    out.push(Segment::Cubic(round3(b[1]), round3(b[2]), b[3]));
}

fn fit_cubic(pts: &[Point], tl: Point, tr: Point, tol: f64, out: &mut Vec<Segment>, depth: u32) {
    let last = pts.len() - 1;
    if last == 1 {
        let d = pts[0].dist(pts[1]) / 3.0;
        push_cubic(&[pts[0], pts[0] + tl.scale(d), pts[1] + tr.scale(d), pts[1]], out);
        return;
    }
    let tol2 = tol * tol;
    let mut u = chord_params(pts);
    let mut bez = generate(pts, &u, tl, tr);
    let (mut err, mut split) = max_error(pts, &u, &bez);
    if err <= tol2 {
        push_cubic(&bez, out);
        return;
    }
    if err <= 4.0 * tol2 {
        for _ in 0..4 {
            u = reparameterize(pts, &u, &bez);
            bez = generate(pts, &u, tl, tr);
            (err, split) = max_error(pts, &u, &bez);
            if err <= tol2 {
                push_cubic(&bez, out);
                return;
            }
        }
    }
    if depth >= MAX_DEPTH || last == 2 {
        out.extend(pts[1..].iter().map(|&p| Segment::Line(p)));
        return;
    }
    let tc = unit(pts[split - 1] - pts[split + 1]).or_else(|| unit(pts[split - 1] - pts[split])).unwrap_or(tl);
    fit_cubic(&pts[..=split], tl, tc, tol, out, depth + 1);
    fit_cubic(&pts[split..], tc.scale(-1.0), tr, tol, out, depth + 1);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_stays_polygonal() {
        let sq = [Point::new(0.0, 0.0), Point::new(10.0, 0.0), Point::new(10.0, 10.0), Point::new(0.0, 10.0)];
        let (start, segs) = fit_ring(&sq, &sharp_vertices(&sq), 1.0);
        assert_eq!(start, sq[0]);
        assert_eq!(segs.len(), 4);
        assert!(segs.iter().all(|s| matches!(s, Segment::Line(_))));
        assert_eq!(segs[3].end(), sq[0]);
    }

    #[test]
    fn smooth_ring_becomes_curves_through_vertices() {
        let ring: Vec<Point> = (0..24)
            .map(|i| {
                let a = f64::from(i) * std::f64::consts::TAU / 24.0;
                Point::new(50.0 + 30.0 * a.cos(), 50.0 + 30.0 * a.sin())
            })
            .collect();
        assert!(sharp_vertices(&ring).is_empty());
        let (start, segs) = fit_ring(&ring, &[], 0.5);
        assert_eq!(start, ring[0]);
        assert!(segs.len() < 24);
        assert!(segs.iter().all(|s| matches!(s, Segment::Cubic(..))));
        assert_eq!(segs.last().unwrap().end(), ring[0]);
        // Midpoints of the fitted curves stay near the circle.
        let mut cur = start;
        for s in &segs {
            if let Segment::Cubic(a, b, p) = *s {
                let m = cubic_point(cur, a, b, p, 0.5);
                assert!(((m.x - 50.0).hypot(m.y - 50.0) - 30.0).abs() < 1.0);
            }
            cur = s.end();
        }
    }
}
