use roxmltree::{Document, Node};
use svgtypes::{Paint, SimplePathSegment, SimplifyingPathParser};

use super::stroke::stroke_outline;
use super::{FillRule, Layer, LayeredSvg, Shape};
use crate::color::Rgb;
use crate::error::{Error, Result};
use crate::geom::{ellipse, rect, Affine, Point, Segment, Subpath};

/// Elements whose presence makes a document unusable as layered flat fills.
const FORBIDDEN: &[&str] = &[
    "linearGradient",
    "radialGradient",
    "meshgradient",
    "pattern",
    "image",
    "filter",
    "text",
    "tspan",
    "textPath",
    "mask",
    "clipPath",
    "use",
    "symbol",
    "marker",
    "foreignObject",
    "switch",
    "style",
    "animate",
    "animateTransform",
    "animateMotion",
    "set",
];

const IGNORED: &[&str] = &["defs", "title", "desc", "metadata"];

const LAYER_ATTR: &str = "data-layer";

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ParseOptions {
    /// Reject strokes and translucency instead of converting or ignoring them.
    pub strict: bool,
}

/// Parses a document with lenient stroke handling.
pub fn parse_svg(text: &str) -> Result<LayeredSvg> {
    parse_svg_with(text, ParseOptions::default())
}

pub fn parse_svg_with(text: &str, opts: ParseOptions) -> Result<LayeredSvg> {
    let doc = Document::parse(text).map_err(|e| Error::MalformedDocument(e.to_string()))?;
    let root = doc.root_element();
    if root.tag_name().name() != "svg" {
        return Err(Error::MalformedDocument(format!("root element is <{}>", root.tag_name().name())));
    }
    for node in root.descendants().filter(Node::is_element) {
        let name = node.tag_name().name();
        if is_svg_ns(&node) && FORBIDDEN.contains(&name) {
            return Err(Error::UnsupportedFeature(format!("<{name}>")));
        }
        for attr in ["filter", "mask", "clip-path"] {
            if let Some(v) = prop(&node, attr) {
                if v.trim() != "none" {
                    return Err(Error::UnsupportedFeature(format!("{attr} attribute")));
                }
            }
        }
    }

    let (width, height, base) = canvas(&root)?;
    let mut parser = Parser { opts, layers: Vec::new() };
    let style = Style::default().inherit(&root)?;
    let ctm = base.then_after(node_transform(&root)?);
    for child in root.children().filter(Node::is_element) {
        parser.walk(&child, &style, &ctm)?;
    }
    let mut svg = LayeredSvg { width, height, layers: parser.layers };
    svg.reindex();
    Ok(svg)
}

fn is_svg_ns(node: &Node) -> bool {
    matches!(node.tag_name().namespace(), None | Some("http://www.w3.org/2000/svg"))
}

/// Canvas size and the map from user space to canvas pixels.
fn canvas(root: &Node) -> Result<(f64, f64, Affine)> {
    let vb = match root.attribute("viewBox") {
        Some(v) => {
            let vb: svgtypes::ViewBox = v.parse().map_err(|e| Error::MalformedDocument(format!("viewBox: {e}")))?;
            if vb.w <= 0.0 || vb.h <= 0.0 {
                return Err(Error::MalformedDocument("viewBox has non-positive size".into()));
            }
            Some(vb)
        }
        None => None,
    };
    let w = length_attr(root, "width")?;
    let h = length_attr(root, "height")?;
    match (vb, w, h) {
        (None, Some(w), Some(h)) => Ok((w, h, Affine::IDENTITY)),
        (None, _, _) => Err(Error::MalformedDocument("need viewBox or width and height".into())),
        (Some(vb), w, h) => {
            let (w, h) = match (w, h) {
                (Some(w), Some(h)) => (w, h),
                (Some(w), None) => (w, w * vb.h / vb.w),
                (None, Some(h)) => (h * vb.w / vb.h, h),
                (None, None) => (vb.w, vb.h),
            };
            // preserveAspectRatio="xMidYMid meet"
            let s = (w / vb.w).min(h / vb.h);
            let tx = (w - vb.w * s) * 0.5 - vb.x * s;
            let ty = (h - vb.h * s) * 0.5 - vb.y * s;
            Ok((w, h, Affine::translate(tx, ty).then_after(Affine::scale(s, s))))
        }
    }
}

fn length_attr(node: &Node, name: &str) -> Result<Option<f64>> {
    let Some(v) = node.attribute(name) else { return Ok(None) };
    let len: svgtypes::Length = v.parse().map_err(|e| Error::MalformedDocument(format!("{name}={v:?}: {e}")))?;
    use svgtypes::LengthUnit as U;
    let scale = match len.unit {
        U::None | U::Px => 1.0,
        U::Pt => 4.0 / 3.0,
        U::In => 96.0,
        U::Cm => 96.0 / 2.54,
        U::Mm => 96.0 / 25.4,
        U::Pc => 16.0,
        // Relative units carry no absolute size.
        _ => return Ok(None),
    };
    let px = len.number * scale;
    if px <= 0.0 {
        return Err(Error::DegenerateGeometry(format!("{name} is {px}")));
    }
    Ok(Some(px))
}

/// Looks up a presentation property, giving the inline `style` precedence.
fn prop<'a>(node: &Node<'a, 'a>, name: &str) -> Option<&'a str> {
    if let Some(style) = node.attribute("style") {
        for decl in style.split(';') {
            if let Some((k, v)) = decl.split_once(':') {
                if k.trim() == name {
                    return Some(v.trim());
                }
            }
        }
    }
    node.attribute(name)
}

fn number(node: &Node, name: &str) -> Result<f64> {
    match node.attribute(name) {
        None => Ok(0.0),
        Some(v) => {
            let len: svgtypes::Length =
                v.parse().map_err(|e| Error::MalformedDocument(format!("{name}={v:?}: {e}")))?;
            Ok(len.number)
        }
    }
}

fn node_transform(node: &Node) -> Result<Affine> {
    match node.attribute("transform") {
        None => Ok(Affine::IDENTITY),
        Some(v) => {
            let t: svgtypes::Transform = v.parse().map_err(|e| Error::MalformedDocument(format!("transform: {e}")))?;
            Ok(Affine { a: t.a, b: t.b, c: t.c, d: t.d, e: t.e, f: t.f })
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum PaintValue {
    None,
    Color([u8; 4]),
    CurrentColor,
}

#[derive(Clone, Debug)]
struct Style {
    fill: PaintValue,
    stroke: PaintValue,
    color: [u8; 4],
    fill_rule: FillRule,
    stroke_width: f64,
    fill_opacity: f64,
    stroke_opacity: f64,
    /// Product of `opacity` over the ancestor chain.
    opacity: f64,
}

impl Default for Style {
    fn default() -> Self {
        Style {
            fill: PaintValue::Color([0, 0, 0, 255]),
            stroke: PaintValue::None,
            color: [0, 0, 0, 255],
            fill_rule: FillRule::NonZero,
            stroke_width: 1.0,
            fill_opacity: 1.0,
            stroke_opacity: 1.0,
            opacity: 1.0,
        }
    }
}

fn parse_paint(v: &str, inherited: PaintValue) -> Result<PaintValue> {
    let paint = Paint::from_str(v).map_err(|e| Error::MalformedDocument(format!("paint {v:?}: {e}")))?;
    Ok(match paint {
        Paint::None => PaintValue::None,
        Paint::Inherit => inherited,
        Paint::CurrentColor => PaintValue::CurrentColor,
        Paint::Color(c) => PaintValue::Color([c.red, c.green, c.blue, c.alpha]),
        Paint::FuncIRI(..) => return Err(Error::UnsupportedFeature("paint server reference".into())),
        _ => return Err(Error::UnsupportedFeature(format!("paint {v:?}"))),
    })
}

fn parse_opacity(v: &str) -> Result<f64> {
    let v = v.trim();
    let (num, pct) = match v.strip_suffix('%') {
        Some(n) => (n, true),
        None => (v, false),
    };
    let x: f64 = num.trim().parse().map_err(|_| Error::MalformedDocument(format!("opacity {v:?}")))?;
    Ok(if pct { x / 100.0 } else { x }.clamp(0.0, 1.0))
}

impl Style {
    fn inherit(&self, node: &Node) -> Result<Style> {
        let mut s = self.clone();
        if let Some(v) = prop(node, "color") {
            if v != "inherit" {
                let c: svgtypes::Color =
                    v.parse().map_err(|e| Error::MalformedDocument(format!("color {v:?}: {e}")))?;
                s.color = [c.red, c.green, c.blue, c.alpha];
            }
        }
        if let Some(v) = prop(node, "fill") {
            s.fill = parse_paint(v, self.fill)?;
        }
        if let Some(v) = prop(node, "stroke") {
            s.stroke = parse_paint(v, self.stroke)?;
        }
        if let Some(v) = prop(node, "fill-rule") {
            s.fill_rule = match v.trim() {
                "evenodd" => FillRule::EvenOdd,
                "nonzero" => FillRule::NonZero,
                "inherit" => self.fill_rule,
                other => return Err(Error::MalformedDocument(format!("fill-rule {other:?}"))),
            };
        }
        if let Some(v) = prop(node, "stroke-width") {
            let len: svgtypes::Length =
                v.parse().map_err(|e| Error::MalformedDocument(format!("stroke-width {v:?}: {e}")))?;
            s.stroke_width = len.number;
        }
        if let Some(v) = prop(node, "fill-opacity") {
            s.fill_opacity = parse_opacity(v)?;
        }
        if let Some(v) = prop(node, "stroke-opacity") {
            s.stroke_opacity = parse_opacity(v)?;
        }
        if let Some(v) = prop(node, "opacity") {
            s.opacity *= parse_opacity(v)?;
        }
        Ok(s)
    }

    fn resolve(&self, p: PaintValue) -> Option<[u8; 4]> {
        match p {
            PaintValue::None => None,
            PaintValue::Color(c) => Some(c),
            PaintValue::CurrentColor => Some(self.color),
        }
    }
}

/// One outline as written, before closing for fill.
struct RawSubpath {
    start: Point,
    segments: Vec<Segment>,
    closed: bool,
}

struct Parser {
    opts: ParseOptions,
    layers: Vec<Layer>,
}

impl Parser {
    fn walk(&mut self, node: &Node, parent: &Style, parent_ctm: &Affine) -> Result<()> {
        if !is_svg_ns(node) {
            return Ok(());
        }
        let name = node.tag_name().name();
        if IGNORED.contains(&name) {
            return Ok(());
        }
        if prop(node, "display").map(str::trim) == Some("none") {
            return Ok(());
        }
        let style = parent.inherit(node)?;
        let ctm = parent_ctm.then_after(node_transform(node)?);
        match name {
            "g" | "svg" | "a" => {
                let first = self.layers.len();
                for child in node.children().filter(Node::is_element) {
                    self.walk(&child, &style, &ctm)?;
                }
                if node.attribute(LAYER_ATTR).is_some() {
                    self.regroup(first);
                }
                Ok(())
            }
            "path" | "rect" | "circle" | "ellipse" | "polygon" | "polyline" | "line" => {
                let raw = shape_geometry(node)?;
                self.emit(&raw, &style, &ctm)
            }
            other => Err(Error::UnsupportedFeature(format!("<{other}>"))),
        }
    }

    /// Collapses the layers produced inside a serialized layer group back into one layer.
    fn regroup(&mut self, first: usize) {
        let group = &self.layers[first..];
        if group.len() < 2 || group.iter().any(|l| l.fill != group[0].fill) {
            return;
        }
        let tail = self.layers.split_off(first);
        let fill = tail[0].fill;
        let shapes = tail.into_iter().flat_map(|l| l.shapes).collect();
        self.layers.push(Layer { index: first, fill, shapes });
    }

    fn emit(&mut self, raw: &[RawSubpath], style: &Style, ctm: &Affine) -> Result<()> {
        if let Some(fill) = style.resolve(style.fill) {
            let alpha = f64::from(fill[3]) / 255.0 * style.fill_opacity * style.opacity;
            if alpha < 1.0 && self.opts.strict {
                return Err(Error::UnsupportedFeature("translucent fill".into()));
            }
            if alpha > 0.0 {
                let subpaths: Vec<Subpath> = raw
                    .iter()
                    .filter_map(|r| Subpath::closed(r.start, r.segments.clone()))
                    .map(|s| s.transform(ctm))
                    .collect();
                self.push(Rgb([fill[0], fill[1], fill[2]]), Shape::new(subpaths, style.fill_rule));
            }
        }
        if let Some(stroke) = style.resolve(style.stroke) {
            if style.stroke_width > 0.0 {
                if self.opts.strict {
                    return Err(Error::UnsupportedFeature("stroke".into()));
                }
                let alpha = f64::from(stroke[3]) / 255.0 * style.stroke_opacity * style.opacity;
                if alpha > 0.0 {
                    let half = 0.5 * style.stroke_width * ctm.mean_scale();
                    let subpaths = raw
                        .iter()
                        .flat_map(|r| {
                            let pts = Subpath { start: r.start, segments: r.segments.clone() }
                                .transform(ctm)
                                .flatten(crate::geom::FLATTEN_TOLERANCE);
                            stroke_outline(&pts, r.closed, half)
                        })
                        .collect();
                    self.push(Rgb([stroke[0], stroke[1], stroke[2]]), Shape::new(subpaths, FillRule::NonZero));
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, fill: Rgb, shape: Shape) {
        if shape.subpaths.is_empty() {
            return;
        }
        let index = self.layers.len();
        self.layers.push(Layer { index, fill, shapes: vec![shape] });
    }
}

fn shape_geometry(node: &Node) -> Result<Vec<RawSubpath>> {
    let closed = |s: Subpath| vec![RawSubpath { start: s.start, segments: s.segments, closed: true }];
    Ok(match node.tag_name().name() {
        "path" => path_data(node.attribute("d").unwrap_or(""))?,
        "rect" => {
            let (w, h) = (number(node, "width")?, number(node, "height")?);
            if w <= 0.0 || h <= 0.0 {
                return Ok(Vec::new());
            }
            let mut rx = node.attribute("rx").map(|_| number(node, "rx")).transpose()?;
            let mut ry = node.attribute("ry").map(|_| number(node, "ry")).transpose()?;
            if rx.is_none() {
                rx = ry;
            }
            if ry.is_none() {
                ry = rx;
            }
            let rx = rx.unwrap_or(0.0).clamp(0.0, w / 2.0);
            let ry = ry.unwrap_or(0.0).clamp(0.0, h / 2.0);
            closed(rect(number(node, "x")?, number(node, "y")?, w, h, rx, ry))
        }
        "circle" => {
            let r = number(node, "r")?;
            if r <= 0.0 {
                return Ok(Vec::new());
            }
            closed(ellipse(number(node, "cx")?, number(node, "cy")?, r, r))
        }
        "ellipse" => {
            let (rx, ry) = (number(node, "rx")?, number(node, "ry")?);
            if rx <= 0.0 || ry <= 0.0 {
                return Ok(Vec::new());
            }
            closed(ellipse(number(node, "cx")?, number(node, "cy")?, rx, ry))
        }
        "polygon" | "polyline" => {
            let pts: Vec<Point> = svgtypes::PointsParser::from(node.attribute("points").unwrap_or(""))
                .map(|(x, y)| Point::new(x, y))
                .collect();
            match pts.split_first() {
                Some((&start, rest)) if !rest.is_empty() => vec![RawSubpath {
                    start,
                    segments: rest.iter().map(|&p| Segment::Line(p)).collect(),
                    closed: node.tag_name().name() == "polygon",
                }],
                _ => Vec::new(),
            }
        }
        "line" => {
            let a = Point::new(number(node, "x1")?, number(node, "y1")?);
            let b = Point::new(number(node, "x2")?, number(node, "y2")?);
            vec![RawSubpath { start: a, segments: vec![Segment::Line(b)], closed: false }]
        }
        _ => unreachable!("caller filters element names"),
    })
}

fn path_data(d: &str) -> Result<Vec<RawSubpath>> {
    let mut out = Vec::new();
    let mut cur: Option<RawSubpath> = None;
    let mut pen = Point::default();
    let flush = |cur: &mut Option<RawSubpath>, out: &mut Vec<RawSubpath>| {
        if let Some(sp) = cur.take() {
            if !sp.segments.is_empty() {
                out.push(sp);
            }
        }
    };
    for seg in SimplifyingPathParser::from(d) {
        let seg = seg.map_err(|e| Error::MalformedDocument(format!("path data: {e}")))?;
        match seg {
            SimplePathSegment::MoveTo { x, y } => {
                flush(&mut cur, &mut out);
                pen = Point::new(x, y);
                cur = Some(RawSubpath { start: pen, segments: Vec::new(), closed: false });
            }
            SimplePathSegment::LineTo { x, y } => {
                pen = Point::new(x, y);
                current(&mut cur, pen)?.segments.push(Segment::Line(pen));
            }
            SimplePathSegment::CurveTo { x1, y1, x2, y2, x, y } => {
                let seg = Segment::Cubic(Point::new(x1, y1), Point::new(x2, y2), Point::new(x, y));
                current(&mut cur, pen)?.segments.push(seg);
                pen = Point::new(x, y);
            }
            SimplePathSegment::Quadratic { x1, y1, x, y } => {
                let q = Point::new(x1, y1);
                let end = Point::new(x, y);
                let c1 = pen.lerp(q, 2.0 / 3.0);
                let c2 = end.lerp(q, 2.0 / 3.0);
                current(&mut cur, pen)?.segments.push(Segment::Cubic(c1, c2, end));
                pen = end;
            }
            SimplePathSegment::ClosePath => {
                if let Some(sp) = cur.as_mut() {
                    sp.closed = true;
                    pen = sp.start;
                }
                flush(&mut cur, &mut out);
            }
        }
    }
    flush(&mut cur, &mut out);
    Ok(out)
}

fn current(cur: &mut Option<RawSubpath>, pen: Point) -> Result<&mut RawSubpath> {
    // A drawing command right after `Z` starts from the closed subpath's start.
    Ok(cur.get_or_insert_with(|| RawSubpath { start: pen, segments: Vec::new(), closed: false }))
}
