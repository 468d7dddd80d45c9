use crate::error::{Error, Result};
use crate::geom::{Point, Segment, Subpath};

use super::fit::{fit_ring, sharp_vertices};

const E: u8 = 0;
const S: u8 = 1;
const W: u8 = 2;
const N: u8 = 3;

#[inline]
fn step(d: u8) -> (i64, i64) {
    match d {
        E => (1, 0),
        S => (0, 1),
        W => (-1, 0),
        _ => (0, -1),
    }
}

/// Closed pixel-edge loops around the 4-connected components of `mask`.
///
/// Loops run along pixel boundaries with the foreground on the right as seen
/// on screen (y down). Outer boundaries therefore have positive shoelace area,
/// counter-clockwise in the y-up reading, and holes negative.
/// Collinear vertices are dropped; coordinates are integer corners.
pub fn boundary_loops(mask: &[bool], w: u32, h: u32) -> Vec<Vec<Point>> {
    let (w, h) = (w as usize, h as usize);
    let vw = w + 1;
    let inside =
        |x: i64, y: i64| x >= 0 && y >= 0 && (x as usize) < w && (y as usize) < h && mask[y as usize * w + x as usize];
    // Outgoing crack edges per corner, one bit per direction.
    let mut out = vec![0u8; vw * (h + 1)];
    for y in 0..h {
        for x in 0..w {
            if !mask[y * w + x] {
                continue;
            }
            let (xi, yi) = (x as i64, y as i64);
            if !inside(xi, yi - 1) {
                out[y * vw + x] |= 1 << E;
            }
            if !inside(xi + 1, yi) {
                out[y * vw + x + 1] |= 1 << S;
            }
            if !inside(xi, yi + 1) {
                out[(y + 1) * vw + x + 1] |= 1 << W;
            }
            if !inside(xi - 1, yi) {
                out[(y + 1) * vw + x] |= 1 << N;
            }
        }
    }
    let mut loops = Vec::new();
    for v0 in 0..out.len() {
        while out[v0] != 0 {
            let d0 = out[v0].trailing_zeros() as u8;
            let (mut vx, mut vy) = ((v0 % vw) as i64, (v0 / vw) as i64);
            let mut pts = vec![Point::new(vx as f64, vy as f64)];
            let mut d = d0;
            loop {
                let v = vy as usize * vw + vx as usize;
                out[v] &= !(1 << d);
                let (dx, dy) = step(d);
                vx += dx;
                vy += dy;
                let v = vy as usize * vw + vx as usize;
                // Right turn first keeps diagonal-only neighbors apart.
                let next = [(d + 1) % 4, d, (d + 3) % 4]
                    .into_iter()
                    .find(|&nd| out[v] & (1 << nd) != 0 || (v == v0 && nd == d0))
                    .expect("crack edges form closed loops");
                if v == v0 && next == d0 && out[v] & (1 << d0) == 0 {
                    break;
                }
                if next != d {
                    pts.push(Point::new(vx as f64, vy as f64));
                }
                d = next;
            }
            // The start corner is redundant when the loop enters and leaves it straight.
            if pts.len() > 2 && d == d0 {
                pts.remove(0);
            }
            loops.push(pts);
        }
    }
    loops
}

/// Cuts the staircase corners of a pixel-edge loop: a corner between two
/// runs of at least two pixels is kept, any other corner is replaced by the
/// midpoints of its two unit edges, so diagonal staircases become straight
/// lines. Filling the result covers exactly the pixels of the loop, since the
/// cut triangles contain no pixel center.
pub fn midpoint_ring(corners: &[Point]) -> Vec<Point> {
    let n = corners.len();
    let mut pts: Vec<Point> = Vec::with_capacity(2 * n);
    for i in 0..n {
        let (prev, cur, next) = (corners[(i + n - 1) % n], corners[i], corners[(i + 1) % n]);
        let (lin, lout) = (prev.dist(cur), cur.dist(next));
        if lin >= 2.0 && lout >= 2.0 {
            if pts.last() != Some(&cur) {
                pts.push(cur);
            }
            continue;
        }
        let din = unit_axis(cur - prev);
        let dout = unit_axis(next - cur);
        for p in [cur - din.scale(0.5), cur + dout.scale(0.5)] {
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        }
    }
    if pts.len() > 1 && pts.first() == pts.last() {
        pts.pop();
    }
    drop_collinear(pts)
}

fn unit_axis(d: Point) -> Point {
    Point::new(d.x.signum() * f64::from(u8::from(d.x != 0.0)), d.y.signum() * f64::from(u8::from(d.y != 0.0)))
}

fn drop_collinear(mut pts: Vec<Point>) -> Vec<Point> {
    loop {
        let n = pts.len();
        if n <= 3 {
            return pts;
        }
        let keep: Vec<bool> = (0..n)
            .map(|i| {
                let (a, b, c) = (pts[(i + n - 1) % n], pts[i], pts[(i + 1) % n]);
                let (u, v) = (b - a, c - b);
                u.x * v.y - u.y * v.x != 0.0 || u.x * v.x + u.y * v.y < 0.0
            })
            .collect();
        if keep.iter().all(|&k| k) {
            return pts;
        }
        pts = pts.into_iter().zip(keep).filter(|(_, k)| *k).map(|(p, _)| p).collect();
    }
}

fn perp_dist(p: Point, a: Point, b: Point) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len = dx.hypot(dy);
    if len == 0.0 {
        return p.dist(a);
    }
    ((p.x - a.x) * dy - (p.y - a.y) * dx).abs() / len
}

fn dp_open(pts: &[Point], eps: f64, keep: &mut [bool]) {
    let mut stack = vec![(0usize, pts.len() - 1)];
    while let Some((a, b)) = stack.pop() {
        if b <= a + 1 {
            continue;
        }
        let (mut best, mut far) = (0.0, a);
        for i in a + 1..b {
            let d = perp_dist(pts[i], pts[a], pts[b]);
            if d > best {
                best = d;
                far = i;
            }
        }
        if best > eps {
            keep[far] = true;
            stack.push((a, far));
            stack.push((far, b));
        }
    }
}

/// Douglas-Peucker on a closed ring, anchored at vertex 0 and the vertex
/// farthest from it. Returns the indices of the kept vertices in order; rings
/// that would collapse below three vertices are kept whole.
pub fn simplify_ring_indices(ring: &[Point], eps: f64) -> Vec<usize> {
    let n = ring.len();
    if eps <= 0.0 || n <= 3 {
        return (0..n).collect();
    }
    let far = (1..n).max_by(|&a, &b| ring[0].dist(ring[a]).total_cmp(&ring[0].dist(ring[b])).then(b.cmp(&a))).unwrap();
    let mut keep = vec![false; n];
    keep[0] = true;
    keep[far] = true;
    dp_open(&ring[..=far], eps, &mut keep[..=far]);
    let mut tail: Vec<Point> = ring[far..].to_vec();
    tail.push(ring[0]);
    let mut keep_tail = vec![false; tail.len()];
    dp_open(&tail, eps, &mut keep_tail);
    for (i, k) in keep_tail.iter().enumerate().take(tail.len() - 1).skip(1) {
        keep[far + i] |= *k;
    }
    let out: Vec<usize> = (0..n).filter(|&i| keep[i]).collect();
    if out.len() < 3 {
        (0..n).collect()
    } else {
        out
    }
}

pub fn simplify_ring(ring: &[Point], eps: f64) -> Vec<Point> {
    simplify_ring_indices(ring, eps).into_iter().map(|i| ring[i]).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceOptions {
    /// Douglas-Peucker tolerance in pixels; `0` keeps the staircase outline.
    pub epsilon: f64,
    /// Fit cubic segments through the simplified outline.
    pub curve_fit: bool,
    /// Maximum distance of the fitted curve from the simplified outline.
    pub fit_tolerance: f64,
}

impl Default for TraceOptions {
    fn default() -> Self {
        TraceOptions { epsilon: 1.0, curve_fit: false, fit_tolerance: 0.5 }
    }
}

/// Closed subpaths outlining `mask`, to be filled with the nonzero rule.
pub fn trace_mask(mask: &[bool], w: u32, h: u32, opts: &TraceOptions) -> Result<Vec<Subpath>> {
    if mask.len() != w as usize * h as usize {
        return Err(Error::InvalidConfig(format!("mask of {} pixels for {w}x{h}", mask.len())));
    }
    if !mask.iter().any(|&b| b) {
        return Err(Error::EmptyMask);
    }
    Ok(boundary_loops(mask, w, h)
        .into_iter()
        .filter_map(|ring| {
            let dense = midpoint_ring(&ring);
            let kept = simplify_ring_indices(&dense, opts.epsilon);
            if opts.curve_fit {
                // Corners come from the simplified outline; curves follow the dense one.
                let simple: Vec<Point> = kept.iter().map(|&i| dense[i]).collect();
                let corners: Vec<usize> = sharp_vertices(&simple).into_iter().map(|k| kept[k]).collect();
                let (start, segs) = fit_ring(&dense, &corners, opts.fit_tolerance);
                Subpath::closed(start, segs)
            } else {
                let first = dense[kept[0]];
                Subpath::closed(first, kept[1..].iter().map(|&i| Segment::Line(dense[i])).collect())
            }
        })
        .collect())
}
