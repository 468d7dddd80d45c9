//! Layered fill-only vector documents: the model, a parser for a small SVG
//! subset, and a serializer that round-trips through it.

mod parse;
mod stroke;
mod write;

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::geom::{Affine, Subpath};

pub use parse::{parse_svg, parse_svg_with, ParseOptions};
pub use write::serialize_svg;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FillRule {
    #[default]
    NonZero,
    EvenOdd,
}

/// A set of closed outlines filled together under one fill rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Shape {
    pub subpaths: Vec<Subpath>,
    pub fill_rule: FillRule,
}

impl Shape {
    pub fn new(subpaths: Vec<Subpath>, fill_rule: FillRule) -> Self {
        Shape { subpaths, fill_rule }
    }
}

/// One paint layer. A layer covers the union of its shapes; merged layers keep
/// each source shape separate so that overlapping outlines never cancel under
/// the nonzero rule.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    /// 0-based paint position; 0 is the backmost layer.
    pub index: usize,
    pub fill: Rgb,
    pub shapes: Vec<Shape>,
}

impl Layer {
    pub fn subpath_count(&self) -> usize {
        self.shapes.iter().map(|s| s.subpaths.len()).sum()
    }

    pub fn subpaths(&self) -> impl Iterator<Item = &Subpath> {
        self.shapes.iter().flat_map(|s| s.subpaths.iter())
    }
}

/// Ordered fill layers on a `width` x `height` pixel canvas, back to front.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayeredSvg {
    pub width: f64,
    pub height: f64,
    pub layers: Vec<Layer>,
}

impl LayeredSvg {
    pub fn new(width: f64, height: f64) -> Self {
        LayeredSvg { width, height, layers: Vec::new() }
    }

    /// Appends a layer on top, assigning its index.
    pub fn push(&mut self, fill: Rgb, shapes: Vec<Shape>) {
        let index = self.layers.len();
        self.layers.push(Layer { index, fill, shapes });
    }

    /// Rewrites every layer index to its list position.
    /// Number of filled outlines as a document would write them: one per shape.
    pub fn path_count(&self) -> usize {
        self.layers.iter().map(|l| l.shapes.len()).sum()
    }

    pub fn reindex(&mut self) {
        for (i, l) in self.layers.iter_mut().enumerate() {
            l.index = i;
        }
    }

    pub fn transform(&self, m: &Affine, width: f64, height: f64) -> LayeredSvg {
        LayeredSvg {
            width,
            height,
            layers: self
                .layers
                .iter()
                .map(|l| Layer {
                    index: l.index,
                    fill: l.fill,
                    shapes: l
                        .shapes
                        .iter()
                        .map(|s| Shape::new(s.subpaths.iter().map(|p| p.transform(m)).collect(), s.fill_rule))
                        .collect(),
                })
                .collect(),
        }
    }

    /// Raster dimensions at native resolution.
    pub fn pixel_size(&self) -> (u32, u32) {
        (self.width.round().max(0.0) as u32, self.height.round().max(0.0) as u32)
    }
}
