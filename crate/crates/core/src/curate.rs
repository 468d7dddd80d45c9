//! Dataset curation: collapse runs of same-colored layers and reject documents
//! whose layering is ambiguous.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use crate::color::Rgb;
use crate::geom::Affine;
use crate::raster::layer_mask;
use crate::svg::{Layer, LayeredSvg};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RejectReason {
    /// Two non-consecutive layers of the same color, where the upper one
    /// directly covers pixels the lower one would otherwise show.
    AmbiguousSameColorOverlap { lower: usize, upper: usize, color: Rgb },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::AmbiguousSameColorOverlap { lower, upper, color } => {
                write!(f, "ambiguous same-color overlap (layers {lower} and {upper}, {color})")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurationResult {
    Curated {
        svg: LayeredSvg,
        /// Number of layers removed by merging.
        merged_layers: usize,
    },
    Rejected {
        reason: RejectReason,
        merged_layers: usize,
    },
}

impl CurationResult {
    pub fn curated(&self) -> Option<&LayeredSvg> {
        match self {
            CurationResult::Curated { svg, .. } => Some(svg),
            CurationResult::Rejected { .. } => None,
        }
    }

    pub fn merged_layers(&self) -> usize {
        match *self {
            CurationResult::Curated { merged_layers, .. } | CurationResult::Rejected { merged_layers, .. } => {
                merged_layers
            }
        }
    }
}

/// Curates at the document's native pixel size.
pub fn curate(svg: &LayeredSvg) -> CurationResult {
    curate_at(svg, None)
}

/// Curates, running the overlap test on a raster of `size` (native when `None`).
pub fn curate_at(svg: &LayeredSvg, size: Option<(u32, u32)>) -> CurationResult {
    let merged = merge_consecutive(svg);
    let merged_layers = svg.layers.len() - merged.layers.len();
    match find_ambiguity(&merged, size) {
        Some(reason) => CurationResult::Rejected { reason, merged_layers },
        None => CurationResult::Curated { svg: merged, merged_layers },
    }
}

/// Joins every run of consecutive layers sharing a fill color into one layer.
pub fn merge_consecutive(svg: &LayeredSvg) -> LayeredSvg {
    let mut layers: Vec<Layer> = Vec::with_capacity(svg.layers.len());
    for layer in &svg.layers {
        match layers.last_mut() {
            Some(prev) if prev.fill == layer.fill => prev.shapes.extend(layer.shapes.iter().cloned()),
            _ => layers.push(layer.clone()),
        }
    }
    let mut out = LayeredSvg { width: svg.width, height: svg.height, layers };
    out.reindex();
    out
}

fn find_ambiguity(svg: &LayeredSvg, size: Option<(u32, u32)>) -> Option<RejectReason> {
    let mut by_color: BTreeMap<Rgb, Vec<usize>> = BTreeMap::new();
    for (i, l) in svg.layers.iter().enumerate() {
        by_color.entry(l.fill).or_default().push(i);
    }
    if by_color.values().all(|v| v.len() < 2) {
        return None;
    }
    let (w, h, m) = match size {
        Some((w, h)) if svg.width > 0.0 && svg.height > 0.0 => {
            let s = (f64::from(w) / svg.width).min(f64::from(h) / svg.height);
            (w, h, Affine::scale(s, s))
        }
        _ => {
            let (w, h) = svg.pixel_size();
            (w, h, Affine::IDENTITY)
        }
    };
    if w == 0 || h == 0 {
        return None;
    }
    // Topmost and second-topmost covering layer per pixel, 1-based, 0 = none.
    let n = w as usize * h as usize;
    let mut top = vec![0u32; n];
    let mut below = vec![0u32; n];
    for (i, layer) in svg.layers.iter().enumerate() {
        let mask = layer_mask(layer, &m, w, h);
        for p in 0..n {
            if mask[p] {
                below[p] = top[p];
                top[p] = i as u32 + 1;
            }
        }
    }
    let mut visible = vec![false; svg.layers.len() + 1];
    for &t in &top {
        visible[t as usize] = true;
    }
    // Pixels where `upper` is on top and `lower` would show without it.
    let mut direct_cover: HashSet<(u32, u32)> = HashSet::new();
    for p in 0..n {
        if below[p] != 0 {
            direct_cover.insert((below[p], top[p]));
        }
    }
    for (&color, group) in &by_color {
        for (k, &lower) in group.iter().enumerate() {
            for &upper in &group[k + 1..] {
                if upper == lower + 1 || !visible[lower + 1] {
                    continue;
                }
                if direct_cover.contains(&(lower as u32 + 1, upper as u32 + 1)) {
                    return Some(RejectReason::AmbiguousSameColorOverlap { lower, upper, color });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::rect;
    use crate::svg::{FillRule, Shape};

    const RED: Rgb = Rgb::new(255, 0, 0);
    const BLUE: Rgb = Rgb::new(0, 0, 255);

    fn sq(x: f64, y: f64, s: f64) -> Vec<Shape> {
        vec![Shape::new(vec![rect(x, y, s, s, 0.0, 0.0)], FillRule::NonZero)]
    }

    #[test]
    fn consecutive_same_color_merges() {
        let mut svg = LayeredSvg::new(20.0, 20.0);
        svg.push(RED, sq(0.0, 0.0, 5.0));
        svg.push(RED, sq(10.0, 10.0, 5.0));
        svg.push(BLUE, sq(2.0, 2.0, 5.0));
        let r = curate(&svg);
        let out = r.curated().unwrap();
        assert_eq!(out.layers.len(), 2);
        assert_eq!(out.layers[0].shapes.len(), 2);
        assert_eq!(out.layers[1].index, 1);
        assert_eq!(r.merged_layers(), 1);
    }

    #[test]
    fn disjoint_same_color_is_accepted() {
        let mut svg = LayeredSvg::new(20.0, 20.0);
        svg.push(RED, sq(0.0, 0.0, 5.0));
        svg.push(BLUE, sq(2.0, 2.0, 5.0));
        svg.push(RED, sq(12.0, 12.0, 5.0));
        assert_eq!(curate(&svg).curated().unwrap().layers.len(), 3);
    }

    #[test]
    fn overlapping_same_color_is_rejected() {
        let mut svg = LayeredSvg::new(20.0, 20.0);
        svg.push(RED, sq(0.0, 0.0, 10.0));
        svg.push(BLUE, sq(12.0, 12.0, 5.0));
        svg.push(RED, sq(5.0, 5.0, 10.0));
        match curate(&svg) {
            CurationResult::Rejected { reason, .. } => {
                assert!(reason.to_string().starts_with("ambiguous same-color overlap"));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn overlap_hidden_by_middle_layer_is_accepted() {
        // The upper red only covers a region where blue already hides the lower red.
        let mut svg = LayeredSvg::new(20.0, 20.0);
        svg.push(RED, sq(0.0, 0.0, 10.0));
        svg.push(BLUE, sq(4.0, 4.0, 6.0));
        svg.push(RED, sq(5.0, 5.0, 5.0));
        assert!(curate(&svg).curated().is_some());
    }
}
