//! Browser-independent state behind the demo, so it can be tested natively.

use layerdepth::depth::{bin_depth, DepthMap};
use layerdepth::fidelity::{rgb_mse, ssim, SSIM_WINDOW};
use layerdepth::order::{order_consistency, OrderMetricConfig};
use layerdepth::raster::{rasterize_color, rasterize_index};
use layerdepth::synth::random_scene;
use layerdepth::{
    parse_svg, serialize_svg, vectorize, IndexRaster, LayeredSvg, PipelineConfig, RasterImage, RasterOptions, Rgb,
};
use serde::Serialize;

pub const MAX_SIZE: u32 = 1024;

/// Tints for the bin view, cycled when there are more bins.
const PALETTE: [[u8; 3]; 8] = [
    [68, 1, 84],
    [59, 82, 139],
    [33, 145, 140],
    [94, 201, 98],
    [253, 231, 37],
    [240, 120, 50],
    [200, 40, 90],
    [120, 120, 120],
];

pub struct Scene {
    pub svg: LayeredSvg,
    pub image: RasterImage,
    pub depth: IndexRaster,
}

#[derive(Debug, Serialize)]
pub struct VectorOutput {
    pub svg: String,
    pub layers: usize,
    pub paths: usize,
    pub rgb_mse: f64,
    pub ssim: Option<f64>,
    pub order: f64,
}

impl Scene {
    pub fn synthetic(seed: u64, size: u32, layers: usize) -> Result<Scene, String> {
        if !(16..=MAX_SIZE).contains(&size) {
            return Err(format!("size must be in 16..={MAX_SIZE}"));
        }
        if !(1..=32).contains(&layers) {
            return Err("layers must be in 1..=32".into());
        }
        Scene::from_doc(random_scene(seed, size, layers))
    }

    pub fn from_svg(text: &str) -> Result<Scene, String> {
        Scene::from_doc(parse_svg(text).map_err(|e| e.to_string())?)
    }

    fn from_doc(svg: LayeredSvg) -> Result<Scene, String> {
        let (w, h) = svg.pixel_size();
        let size = (w.max(h) > MAX_SIZE).then(|| {
            let k = f64::from(MAX_SIZE) / f64::from(w.max(h));
            (((f64::from(w) * k) as u32).max(1), ((f64::from(h) * k) as u32).max(1))
        });
        let image = rasterize_color(&svg, &RasterOptions { size, ..Default::default() }).map_err(|e| e.to_string())?;
        let depth = rasterize_index(&svg, size).map_err(|e| e.to_string())?;
        Ok(Scene { svg, image, depth })
    }

    pub fn width(&self) -> u32 {
        self.image.width
    }

    pub fn height(&self) -> u32 {
        self.image.height
    }

    pub fn layer_count(&self) -> usize {
        self.svg.layers.len()
    }

    pub fn image_rgba(&self) -> Vec<u8> {
        self.image.pixels.iter().flat_map(|p| [p.0[0], p.0[1], p.0[2], 255]).collect()
    }

    /// Depth as gray, nearest layer brightest.
    pub fn depth_rgba(&self) -> Vec<u8> {
        let top = self.depth.max_index().max(1) as f64;
        self.depth
            .indices
            .iter()
            .flat_map(|&i| {
                let g = (255.0 * f64::from(i) / top).round() as u8;
                [g, g, g, 255]
            })
            .collect()
    }

    /// Pixels in front of `t` (or behind it, when `front` is false); the rest
    /// are transparent.
    pub fn split_rgba(&self, t: f64, front: bool) -> Vec<u8> {
        self.image
            .pixels
            .iter()
            .zip(&self.depth.indices)
            .flat_map(|(p, &i)| {
                let keep = (f64::from(i) > t) == front;
                [p.0[0], p.0[1], p.0[2], if keep { 255 } else { 0 }]
            })
            .collect()
    }

    /// Image blended half-and-half with one tint per depth bin.
    pub fn bins_rgba(&self, edges: &[f64]) -> Result<Vec<u8>, String> {
        let bins = bin_depth(&DepthMap::from(&self.depth), edges).map_err(|e| e.to_string())?;
        Ok(self
            .image
            .pixels
            .iter()
            .zip(&bins.indices)
            .flat_map(|(p, &b)| {
                let t = PALETTE[(b as usize - 1) % PALETTE.len()];
                let mix = |k: usize| ((u16::from(p.0[k]) + u16::from(t[k])) / 2) as u8;
                [mix(0), mix(1), mix(2), 255]
            })
            .collect())
    }

    /// Vectorizes the rendered image against its own layer-index depth and
    /// scores the result.
    pub fn vectorize(&self, trace_epsilon: f64, curve_fit: bool) -> Result<VectorOutput, String> {
        let cfg = PipelineConfig { trace_epsilon, curve_fit, ..Default::default() };
        let gt = DepthMap::from(&self.depth);
        let out = vectorize(&self.image, &gt, &cfg).map_err(|e| e.to_string())?;
        let size = Some((self.width(), self.height()));
        let err = |e: layerdepth::Error| e.to_string();
        let back = rasterize_color(&out, &RasterOptions { size, background: Rgb::WHITE, antialias: 1 }).map_err(err)?;
        let pred = DepthMap::from(&rasterize_index(&out, size).map_err(err)?);
        let big = self.width() as usize >= SSIM_WINDOW && self.height() as usize >= SSIM_WINDOW;
        Ok(VectorOutput {
            svg: serialize_svg(&out),
            layers: out.layers.len(),
            paths: out.path_count(),
            rgb_mse: rgb_mse(&self.image, &back).map_err(err)?,
            ssim: if big { Some(ssim(&self.image, &back).map_err(err)?) } else { None },
            order: order_consistency(&gt, &pred, &OrderMetricConfig::default()).map_err(err)?,
        })
    }
}
