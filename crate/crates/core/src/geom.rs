//! Points, affine maps, and closed outlines made of line and cubic segments.

use serde::{Deserialize, Serialize};

/// Maximum chord error, in pixels, when flattening cubic segments.
pub const FLATTEN_TOLERANCE: f64 = 0.1;

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn lerp(self, other: Point, t: f64) -> Point {
        Point::new(self.x + (other.x - self.x) * t, self.y + (other.y - self.y) * t)
    }

    pub fn dist(self, other: Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl std::ops::Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

/// Row-vector affine map `(x, y) -> (a x + c y + e, b x + d y + f)`, the SVG `matrix()` layout.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Affine {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl Default for Affine {
    fn default() -> Self {
        Affine::IDENTITY
    }
}

impl Affine {
    pub const IDENTITY: Affine = Affine { a: 1.0, b: 0.0, c: 0.0, d: 1.0, e: 0.0, f: 0.0 };

    pub fn translate(tx: f64, ty: f64) -> Affine {
        Affine { e: tx, f: ty, ..Affine::IDENTITY }
    }

    pub fn scale(sx: f64, sy: f64) -> Affine {
        Affine { a: sx, d: sy, ..Affine::IDENTITY }
    }

    /// `self` applied after `inner`.
    pub fn then_after(self, inner: Affine) -> Affine {
        Affine {
            a: self.a * inner.a + self.c * inner.b,
            b: self.b * inner.a + self.d * inner.b,
            c: self.a * inner.c + self.c * inner.d,
            d: self.b * inner.c + self.d * inner.d,
            e: self.a * inner.e + self.c * inner.f + self.e,
            f: self.b * inner.e + self.d * inner.f + self.f,
        }
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(self.a * p.x + self.c * p.y + self.e, self.b * p.x + self.d * p.y + self.f)
    }

    pub fn is_identity(&self) -> bool {
        *self == Affine::IDENTITY
    }

    /// Geometric mean of the axis scale factors.
    pub fn mean_scale(&self) -> f64 {
        (self.a * self.d - self.b * self.c).abs().sqrt()
    }
}

/// One segment of an outline; the start point is the end of the previous segment.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Segment {
    Line(Point),
    Cubic(Point, Point, Point),
}

impl Segment {
    pub fn end(&self) -> Point {
        match *self {
            Segment::Line(p) | Segment::Cubic(_, _, p) => p,
        }
    }

    fn transform(&self, m: &Affine) -> Segment {
        match *self {
            Segment::Line(p) => Segment::Line(m.apply(p)),
            Segment::Cubic(a, b, p) => Segment::Cubic(m.apply(a), m.apply(b), m.apply(p)),
        }
    }
}

/// A closed outline. The last segment always ends at `start`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subpath {
    pub start: Point,
    pub segments: Vec<Segment>,
}

impl Subpath {
    /// Builds a subpath, appending a closing line when the segments do not return to `start`.
    /// Returns `None` when there are no segments.
    pub fn closed(start: Point, mut segments: Vec<Segment>) -> Option<Subpath> {
        let last = segments.last()?.end();
        if last != start {
            segments.push(Segment::Line(start));
        }
        Some(Subpath { start, segments })
    }

    pub fn from_polygon(points: &[Point]) -> Option<Subpath> {
        let (&first, rest) = points.split_first()?;
        Subpath::closed(first, rest.iter().map(|&p| Segment::Line(p)).collect())
    }

    pub fn transform(&self, m: &Affine) -> Subpath {
        Subpath { start: m.apply(self.start), segments: self.segments.iter().map(|s| s.transform(m)).collect() }
    }

    /// Polygon approximation with at most `tolerance` chord error; the closing vertex is not repeated.
    pub fn flatten(&self, tolerance: f64) -> Vec<Point> {
        let mut out = vec![self.start];
        let mut cur = self.start;
        for seg in &self.segments {
            match *seg {
                Segment::Line(p) => out.push(p),
                Segment::Cubic(c1, c2, p) => flatten_cubic(cur, c1, c2, p, tolerance, &mut out),
            }
            cur = seg.end();
        }
        if out.len() > 1 && out.last() == out.first() {
            out.pop();
        }
        out
    }

    /// Shoelace area of the flattened outline; positive when the outline runs
    /// clockwise on screen (y pointing down).
    pub fn signed_area(&self) -> f64 {
        polygon_area(&self.flatten(FLATTEN_TOLERANCE))
    }

    pub fn bounds(&self) -> (Point, Point) {
        let mut lo = self.start;
        let mut hi = self.start;
        let mut grow = |p: Point| {
            lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
            hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
        };
        for seg in &self.segments {
            match *seg {
                Segment::Line(p) => grow(p),
                Segment::Cubic(a, b, p) => {
                    grow(a);
                    grow(b);
                    grow(p);
                }
            }
        }
        (lo, hi)
    }
}

pub fn polygon_area(pts: &[Point]) -> f64 {
    let n = pts.len();
    let mut acc = 0.0;
    for i in 0..n {
        let p = pts[i];
        let q = pts[(i + 1) % n];
        acc += p.x * q.y - q.x * p.y;
    }
    acc * 0.5
}

/// Uniform subdivision whose segment count comes from Wang's bound for cubics,
/// which guarantees the chord error stays below `tolerance`.
fn flatten_cubic(p0: Point, p1: Point, p2: Point, p3: Point, tolerance: f64, out: &mut Vec<Point>) {
    let dd1 = (p0 - p1.scale(2.0) + p2).x.hypot((p0 - p1.scale(2.0) + p2).y);
    let dd2 = (p1 - p2.scale(2.0) + p3).x.hypot((p1 - p2.scale(2.0) + p3).y);
    let m = dd1.max(dd2);
    let n = ((0.75 * m / tolerance).sqrt().ceil() as usize).clamp(1, 4096);
    for i in 1..=n {
        let t = i as f64 / n as f64;
        out.push(cubic_point(p0, p1, p2, p3, t));
    }
}

pub fn cubic_point(p0: Point, p1: Point, p2: Point, p3: Point, t: f64) -> Point {
    let mt = 1.0 - t;
    let a = mt * mt * mt;
    let b = 3.0 * mt * mt * t;
    let c = 3.0 * mt * t * t;
    let d = t * t * t;
    Point::new(a * p0.x + b * p1.x + c * p2.x + d * p3.x, a * p0.y + b * p1.y + c * p2.y + d * p3.y)
}

/// Control-point offset for approximating a quarter circle with one cubic.
pub const KAPPA: f64 = 0.552_284_749_830_793_4;

/// Axis-aligned ellipse as four cubic arcs, starting at the rightmost point.
pub fn ellipse(cx: f64, cy: f64, rx: f64, ry: f64) -> Subpath {
    let kx = rx * KAPPA;
    let ky = ry * KAPPA;
    let p = Point::new;
    let start = p(cx + rx, cy);
    let segments = vec![
        Segment::Cubic(p(cx + rx, cy + ky), p(cx + kx, cy + ry), p(cx, cy + ry)),
        Segment::Cubic(p(cx - kx, cy + ry), p(cx - rx, cy + ky), p(cx - rx, cy)),
        Segment::Cubic(p(cx - rx, cy - ky), p(cx - kx, cy - ry), p(cx, cy - ry)),
        Segment::Cubic(p(cx + kx, cy - ry), p(cx + rx, cy - ky), start),
    ];
    Subpath { start, segments }
}

/// Rectangle with optional rounded corners, running clockwise on screen.
pub fn rect(x: f64, y: f64, w: f64, h: f64, rx: f64, ry: f64) -> Subpath {
    let p = Point::new;
    if rx <= 0.0 || ry <= 0.0 {
        return Subpath::from_polygon(&[p(x, y), p(x + w, y), p(x + w, y + h), p(x, y + h)]).expect("four points");
    }
    let (kx, ky) = (rx * KAPPA, ry * KAPPA);
    let start = p(x + rx, y);
    let segments = vec![
        Segment::Line(p(x + w - rx, y)),
        Segment::Cubic(p(x + w - rx + kx, y), p(x + w, y + ry - ky), p(x + w, y + ry)),
        Segment::Line(p(x + w, y + h - ry)),
        Segment::Cubic(p(x + w, y + h - ry + ky), p(x + w - rx + kx, y + h), p(x + w - rx, y + h)),
        Segment::Line(p(x + rx, y + h)),
        Segment::Cubic(p(x + rx - kx, y + h), p(x, y + h - ry + ky), p(x, y + h - ry)),
        Segment::Line(p(x, y + ry)),
        Segment::Cubic(p(x, y + ry - ky), p(x + rx - kx, y), start),
    ];
    Subpath { start, segments }
}
