//! Scanline rasterization of layered documents.
//!
//! Coverage is decided by sampling at pixel centers: pixel `(x, y)` is inside a
//! shape when `(x + 0.5, y + 0.5)` is inside under the shape's fill rule.
//! Layers are painted back to front.

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::error::{Error, Result};
use crate::geom::{Affine, Point, FLATTEN_TOLERANCE};
use crate::index::{encode_layer_index, IndexRaster, MAX_INDEX};
use crate::svg::{FillRule, Layer, LayeredSvg, Shape};

/// 8-bit RGB image, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RasterImage {
    pub width: u32,
    pub height: u32,
    pub pixels: Vec<Rgb>,
}

impl RasterImage {
    pub fn new(width: u32, height: u32, fill: Rgb) -> Self {
        RasterImage { width, height, pixels: vec![fill; width as usize * height as usize] }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> Rgb) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        RasterImage { width, height, pixels }
    }

    pub fn get(&self, x: u32, y: u32) -> Rgb {
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RasterMode {
    Color,
    Index,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Raster {
    Color(RasterImage),
    Index(IndexRaster),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RasterOptions {
    /// Output size; the document is scaled uniformly to fit, anchored top-left.
    pub size: Option<(u32, u32)>,
    /// Color of uncovered pixels in color mode.
    pub background: Rgb,
    /// Supersampling factor per axis for color mode; 1 disables anti-aliasing.
    /// Index mode always samples once per pixel.
    pub antialias: u8,
}

impl Default for RasterOptions {
    fn default() -> Self {
        RasterOptions { size: None, background: Rgb::WHITE, antialias: 1 }
    }
}

pub fn rasterize(svg: &LayeredSvg, mode: RasterMode, opts: &RasterOptions) -> Result<Raster> {
    Ok(match mode {
        RasterMode::Color => Raster::Color(rasterize_color(svg, opts)?),
        RasterMode::Index => Raster::Index(rasterize_index(svg, opts.size)?),
    })
}

fn placement(svg: &LayeredSvg, size: Option<(u32, u32)>) -> Result<(u32, u32, Affine)> {
    let (w, h, m) = match size {
        None => {
            let (w, h) = svg.pixel_size();
            (w, h, Affine::IDENTITY)
        }
        Some((w, h)) => {
            if svg.width <= 0.0 || svg.height <= 0.0 {
                return Err(Error::DegenerateGeometry("document has zero area".into()));
            }
            let s = (f64::from(w) / svg.width).min(f64::from(h) / svg.height);
            (w, h, Affine::scale(s, s))
        }
    };
    if w == 0 || h == 0 {
        return Err(Error::DegenerateGeometry(format!("canvas is {w}x{h}")));
    }
    Ok((w, h, m))
}

/// Renders each layer with its own fill color.
pub fn rasterize_color(svg: &LayeredSvg, opts: &RasterOptions) -> Result<RasterImage> {
    let (w, h, m) = placement(svg, opts.size)?;
    let mut img = RasterImage::new(w, h, opts.background);
    let ss = u32::from(opts.antialias.max(1));
    if ss == 1 {
        for layer in &svg.layers {
            let fill = layer.fill;
            for_each_layer_span(layer, &m, w, h, |y, x0, x1| {
                let row = y as usize * w as usize;
                img.pixels[row + x0 as usize..row + x1 as usize].fill(fill);
            });
        }
        return Ok(img);
    }
    let sm = Affine::scale(f64::from(ss), f64::from(ss)).then_after(m);
    let (sw, sh) = (w * ss, h * ss);
    let total = f64::from(ss * ss);
    let mut cover = vec![0u16; w as usize * h as usize];
    for layer in &svg.layers {
        cover.fill(0);
        // Rows of the supersampled grid are deduplicated per shape union.
        let mut row_mask = vec![false; sw as usize];
        let mut current_row = u32::MAX;
        let flush = |row: u32, mask: &mut Vec<bool>, cover: &mut Vec<u16>| {
            if row == u32::MAX {
                return;
            }
            let py = (row / ss) as usize;
            for (sx, hit) in mask.iter_mut().enumerate() {
                if *hit {
                    cover[py * w as usize + sx / ss as usize] += 1;
                    *hit = false;
                }
            }
        };
        let polys = layer_polygons(layer, &sm);
        let mut spans: Vec<(u32, u32, u32)> = Vec::new();
        for (poly, rule) in &polys {
            fill_spans(poly, *rule, sw, sh, |y, x0, x1| spans.push((y, x0, x1)));
        }
        spans.sort_unstable();
        for (y, x0, x1) in spans {
            if y != current_row {
                flush(current_row, &mut row_mask, &mut cover);
                current_row = y;
            }
            row_mask[x0 as usize..x1 as usize].fill(true);
        }
        flush(current_row, &mut row_mask, &mut cover);
        let src = layer.fill.to_unit();
        for (px, &c) in img.pixels.iter_mut().zip(&cover) {
            if c == 0 {
                continue;
            }
            let a = f64::from(c) / total;
            let dst = px.to_unit();
            *px = Rgb::from_unit([0, 1, 2].map(|k| dst[k] * (1.0 - a) + src[k] * a));
        }
    }
    Ok(img)
}

/// Renders layer `i` (0-based) as index `i + 1`; uncovered pixels stay 0. No anti-aliasing.
pub fn rasterize_index(svg: &LayeredSvg, size: Option<(u32, u32)>) -> Result<IndexRaster> {
    let (w, h, m) = placement(svg, size)?;
    let mut out = IndexRaster::new(w, h);
    for layer in &svg.layers {
        let value = layer.index as u64 + 1;
        if value >= u64::from(MAX_INDEX) {
            return Err(Error::IndexOverflow(value));
        }
        let value = value as u32;
        for_each_layer_span(layer, &m, w, h, |y, x0, x1| {
            let row = y as usize * w as usize;
            out.indices[row + x0 as usize..row + x1 as usize].fill(value);
        });
    }
    Ok(out)
}

/// False-color rendering: each layer painted with its encoded 1-based index.
pub fn rasterize_false_color(svg: &LayeredSvg, size: Option<(u32, u32)>) -> Result<RasterImage> {
    let idx = rasterize_index(svg, size)?;
    for &i in &idx.indices {
        encode_layer_index(i)?;
    }
    Ok(RasterImage { width: idx.width, height: idx.height, pixels: idx.to_false_color() })
}

/// Per-pixel coverage mask of one layer.
pub fn layer_mask(layer: &Layer, m: &Affine, w: u32, h: u32) -> Vec<bool> {
    let mut mask = vec![false; w as usize * h as usize];
    for_each_layer_span(layer, m, w, h, |y, x0, x1| {
        let row = y as usize * w as usize;
        mask[row + x0 as usize..row + x1 as usize].fill(true);
    });
    mask
}

/// Coverage mask of a shape list in pixel coordinates.
pub fn shapes_mask(shapes: &[Shape], w: u32, h: u32) -> Vec<bool> {
    let mut mask = vec![false; w as usize * h as usize];
    for shape in shapes {
        let poly = shape_polygons(shape, &Affine::IDENTITY);
        fill_spans(&poly, shape.fill_rule, w, h, |y, x0, x1| {
            let row = y as usize * w as usize;
            mask[row + x0 as usize..row + x1 as usize].fill(true);
        });
    }
    mask
}

fn for_each_layer_span(layer: &Layer, m: &Affine, w: u32, h: u32, mut f: impl FnMut(u32, u32, u32)) {
    for (poly, rule) in layer_polygons(layer, m) {
        fill_spans(&poly, rule, w, h, &mut f);
    }
}

fn shape_polygons(shape: &Shape, m: &Affine) -> Vec<Vec<Point>> {
    shape
        .subpaths
        .iter()
        .map(
            |sp| {
                if m.is_identity() {
                    sp.flatten(FLATTEN_TOLERANCE)
                } else {
                    sp.transform(m).flatten(FLATTEN_TOLERANCE)
                }
            },
        )
        .collect()
}

fn layer_polygons(layer: &Layer, m: &Affine) -> Vec<(Vec<Vec<Point>>, FillRule)> {
    layer.shapes.iter().map(|s| (shape_polygons(s, m), s.fill_rule)).collect()
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    x0: f64,
    y0: f64,
    y1: f64,
    dxdy: f64,
    dir: i32,
}

/// Calls `emit(y, x_start, x_end)` for every maximal run of covered pixels
/// (`x_end` exclusive) of the polygon set under `rule`.
pub(crate) fn fill_spans(polys: &[Vec<Point>], rule: FillRule, w: u32, h: u32, mut emit: impl FnMut(u32, u32, u32)) {
    let mut edges: Vec<Edge> = Vec::new();
    for poly in polys {
        let n = poly.len();
        for i in 0..n {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            if a.y == b.y || !(a.y.is_finite() && b.y.is_finite() && a.x.is_finite() && b.x.is_finite()) {
                continue;
            }
            let (top, bot, dir) = if a.y < b.y { (a, b, 1) } else { (b, a, -1) };
            edges.push(Edge { x0: top.x, y0: top.y, y1: bot.y, dxdy: (bot.x - top.x) / (bot.y - top.y), dir });
        }
    }
    if edges.is_empty() {
        return;
    }
    edges.sort_by(|a, b| a.y0.total_cmp(&b.y0));
    let mut next = 0;
    let mut active: Vec<Edge> = Vec::new();
    let mut xs: Vec<(f64, i32)> = Vec::new();
    let first_row = (edges[0].y0 - 0.5).ceil().max(0.0) as u32;
    for y in first_row..h {
        let yc = f64::from(y) + 0.5;
        while next < edges.len() && edges[next].y0 <= yc {
            active.push(edges[next]);
            next += 1;
        }
        active.retain(|e| e.y1 > yc);
        if active.is_empty() {
            if next == edges.len() {
                break;
            }
            continue;
        }
        xs.clear();
        xs.extend(active.iter().filter(|e| e.y0 <= yc).map(|e| (e.x0 + (yc - e.y0) * e.dxdy, e.dir)));
        xs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut winding = 0;
        for pair in xs.windows(2) {
            winding += pair[0].1;
            let inside = match rule {
                FillRule::NonZero => winding != 0,
                FillRule::EvenOdd => winding % 2 != 0,
            };
            if !inside {
                continue;
            }
            let x0 = (pair[0].0 - 0.5).ceil().clamp(0.0, f64::from(w)) as u32;
            let x1 = (pair[1].0 - 0.5).ceil().clamp(0.0, f64::from(w)) as u32;
            if x1 > x0 {
                emit(y, x0, x1);
            }
        }
    }
}
