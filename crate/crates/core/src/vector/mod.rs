//! Depth-ordered vectorization: cluster an image into flat-color regions,
//! order them by depth, complete each layer's occluded extent, and trace it.

mod cluster;
mod fit;
mod holes;
mod layers;
mod trace;

pub use cluster::{cluster_colors, ClusterInfo, ClusterMap};
pub use fit::{fit_ring, sharp_vertices};
pub use holes::fill_holes;
pub use layers::{merge_similar_layers, order_by_depth};
pub use trace::{boundary_loops, midpoint_ring, simplify_ring, simplify_ring_indices, trace_mask, TraceOptions};

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::depth::DepthMap;
use crate::error::{check_dims, Error, Result};
use crate::raster::RasterImage;
use crate::svg::{FillRule, Layer, LayeredSvg, Shape};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    /// Regions with fewer pixels are absorbed into a neighbor.
    pub filter_speckle: usize,
    /// Bits kept per channel before connected-component labelling.
    pub color_precision: u8,
    /// Adjacent regions with mean colors closer than this merge (RGB in `[0, 1]`).
    pub layer_difference: f64,
    /// Rank-adjacent layers with mean colors closer than this merge.
    pub merge_tau: f64,
    /// Outline simplification tolerance in pixels.
    pub trace_epsilon: f64,
    pub curve_fit: bool,
    pub fit_tolerance: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            filter_speckle: 4,
            color_precision: 6,
            layer_difference: 16.0 / 255.0,
            merge_tau: 0.05,
            trace_epsilon: 0.45,
            curve_fit: false,
            fit_tolerance: 0.5,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=8).contains(&self.color_precision) {
            return Err(Error::InvalidConfig(format!("color_precision {} not in 1..=8", self.color_precision)));
        }
        for (name, v) in [
            ("layer_difference", self.layer_difference),
            ("merge_tau", self.merge_tau),
            ("trace_epsilon", self.trace_epsilon),
            ("fit_tolerance", self.fit_tolerance),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be a finite non-negative number")));
            }
        }
        Ok(())
    }

    pub fn trace_options(&self) -> TraceOptions {
        TraceOptions { epsilon: self.trace_epsilon, curve_fit: self.curve_fit, fit_tolerance: self.fit_tolerance }
    }
}

/// Vectorized document together with the ordered clusters it was built from.
#[derive(Clone, Debug)]
pub struct Vectorization {
    pub svg: LayeredSvg,
    pub clusters: ClusterMap,
}

/// Vectorizes `img`, painting layers back to front in the order given by `depth`.
pub fn vectorize(img: &RasterImage, depth: &DepthMap, cfg: &PipelineConfig) -> Result<LayeredSvg> {
    Ok(vectorize_detailed(img, depth, cfg)?.svg)
}

pub fn vectorize_detailed(img: &RasterImage, depth: &DepthMap, cfg: &PipelineConfig) -> Result<Vectorization> {
    cfg.validate()?;
    check_dims(img.width, img.height, depth.width, depth.height)?;
    if img.is_empty() {
        return Err(Error::EmptyMap);
    }
    let clusters = cluster_colors(img, cfg);
    let clusters = order_by_depth(&clusters, depth)?;
    let clusters = merge_similar_layers(&clusters, cfg.merge_tau)?;
    let opts = cfg.trace_options();
    let build = |rank: usize| -> Result<Layer> {
        let mask = fill_holes(&clusters, rank)?;
        let subpaths = trace_mask(&mask, img.width, img.height, &opts)?;
        Ok(Layer {
            index: rank - 1,
            fill: Rgb::from_unit(clusters.clusters[rank - 1].mean_color),
            shapes: vec![Shape::new(subpaths, FillRule::NonZero)],
        })
    };
    #[cfg(feature = "parallel")]
    let layers = {
        use rayon::prelude::*;
        (1..=clusters.len()).into_par_iter().map(build).collect::<Result<Vec<_>>>()?
    };
    #[cfg(not(feature = "parallel"))]
    let layers = (1..=clusters.len()).map(build).collect::<Result<Vec<_>>>()?;
    let svg = LayeredSvg { width: f64::from(img.width), height: f64::from(img.height), layers };
    Ok(Vectorization { svg, clusters })
}
