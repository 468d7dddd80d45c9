use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use layerdepth::bundle::BundleDocument;
use layerdepth::curate::{curate_at, CurationResult};
use layerdepth::depth::{mae_normalized, mse_normalized, DepthMap};
use layerdepth::fidelity::{path_count_error, rgb_mse, ssim, SSIM_WINDOW};
use layerdepth::io::{load_depth_auto, load_rgb, save_index, save_rgb, DepthFormat};
use layerdepth::metrics::MetricsReport;
use layerdepth::order::{order_consistency, OrderMetricConfig};
use layerdepth::raster::{rasterize_color, rasterize_index, RasterOptions};
use layerdepth::relief::{depth_to_mesh_with, ReliefOptions};
use layerdepth::svg::{parse_svg_with, serialize_svg, ParseOptions};
use layerdepth::vector::{cluster_colors, order_by_depth, vectorize_detailed, PipelineConfig};
use layerdepth::LayeredSvg;
use log::{info, warn};
use serde_json::json;

fn read_svg(path: &Path, strict: bool) -> Result<LayeredSvg> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_svg_with(&text, ParseOptions { strict }).with_context(|| format!("parsing {}", path.display()))
}

fn load_depth(path: &Path) -> Result<DepthMap> {
    load_depth_auto(path).with_context(|| format!("loading depth {}", path.display()))
}

pub fn curate(in_dir: &Path, out_dir: &Path, size: Option<(u32, u32)>, strict: bool) -> Result<String> {
    let mut files: Vec<_> = fs::read_dir(in_dir)
        .with_context(|| format!("listing {}", in_dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("svg")))
        .collect();
    files.sort();
    fs::create_dir_all(out_dir).with_context(|| format!("creating {}", out_dir.display()))?;
    let (mut accepted, mut rejected, mut failed, mut merged) = (0usize, 0usize, 0usize, 0usize);
    for path in &files {
        let name = path.file_name().expect("listed files have names");
        let svg = match read_svg(path, strict) {
            Ok(svg) => svg,
            Err(e) => {
                warn!("{}: {e:#}", name.to_string_lossy());
                failed += 1;
                continue;
            }
        };
        match curate_at(&svg, size) {
            CurationResult::Curated { svg, merged_layers } => {
                fs::write(out_dir.join(name), serialize_svg(&svg))?;
                accepted += 1;
                merged += merged_layers;
            }
            CurationResult::Rejected { reason, merged_layers } => {
                info!("{}: rejected: {reason}", name.to_string_lossy());
                rejected += 1;
                merged += merged_layers;
            }
        }
    }
    Ok(json!({ "accepted": accepted, "merged_layers": merged, "rejected": rejected, "failed": failed }).to_string())
}

pub fn rasterize(
    svg: &Path,
    out_color: &Path,
    out_index: &Path,
    size: Option<(u32, u32)>,
    format: DepthFormat,
    antialias: u8,
    strict: bool,
) -> Result<String> {
    let doc = read_svg(svg, strict)?;
    let color = rasterize_color(&doc, &RasterOptions { size, antialias: antialias.max(1), ..Default::default() })?;
    let index = rasterize_index(&doc, size)?;
    save_rgb(&color, out_color).with_context(|| format!("writing {}", out_color.display()))?;
    save_index(&index, format, out_index).with_context(|| format!("writing {}", out_index.display()))?;
    Ok(json!({ "width": index.width, "height": index.height, "layers": doc.layers.len() }).to_string())
}

pub fn eval_depth(gt: &Path, pred: &Path, seed: u64, pairs: Option<usize>) -> Result<String> {
    let (gt, pred) = (load_depth(gt)?, load_depth(pred)?);
    let cfg = OrderMetricConfig { pair_count: pairs, seed, ..Default::default() };
    let report = MetricsReport {
        order: Some(order_consistency(&gt, &pred, &cfg)?),
        mae: Some(mae_normalized(&gt, &pred)?),
        mse: Some(mse_normalized(&gt, &pred)?),
        ..Default::default()
    };
    Ok(report.to_json())
}

/// Pipeline settings given on the command line; `None` keeps the file or default value.
#[derive(Default)]
pub struct ConfigOverrides {
    pub filter_speckle: Option<usize>,
    pub color_precision: Option<u8>,
    pub layer_difference: Option<f64>,
    pub merge_tau: Option<f64>,
    pub trace_epsilon: Option<f64>,
    pub curve_fit: Option<bool>,
    pub fit_tolerance: Option<f64>,
}

pub fn load_config(path: Option<&Path>, o: &ConfigOverrides) -> Result<PipelineConfig> {
    let mut cfg = match path {
        None => PipelineConfig::default(),
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            if p.extension().is_some_and(|e| e.eq_ignore_ascii_case("json")) {
                serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            } else {
                toml::from_str(&text).with_context(|| format!("parsing {}", p.display()))?
            }
        }
    };
    macro_rules! apply {
        ($($f:ident),*) => { $(if let Some(v) = o.$f { cfg.$f = v; })* };
    }
    apply!(filter_speckle, color_precision, layer_difference, merge_tau, trace_epsilon, curve_fit, fit_tolerance);
    cfg.validate()?;
    Ok(cfg)
}

pub fn vectorize(
    image: &Path,
    depth: &Path,
    cfg: &PipelineConfig,
    out: &Path,
    gt_depth: Option<&Path>,
    gt_svg: Option<&Path>,
    seed: u64,
) -> Result<String> {
    let img = load_rgb(image).with_context(|| format!("loading {}", image.display()))?;
    let depth = load_depth(depth)?;
    let result = vectorize_detailed(&img, &depth, cfg)?;
    let svg = result.svg;
    fs::write(out, serialize_svg(&svg)).with_context(|| format!("writing {}", out.display()))?;
    info!("{} layers from {} clusters", svg.layers.len(), result.clusters.len());

    let size = Some((img.width, img.height));
    let back = rasterize_color(&svg, &RasterOptions { size, ..Default::default() })?;
    let mut report = MetricsReport { rgb_mse: Some(rgb_mse(&img, &back)?), ..Default::default() };
    if img.width as usize >= SSIM_WINDOW && img.height as usize >= SSIM_WINDOW {
        report.ssim = Some(ssim(&img, &back)?);
    }
    if let Some(p) = gt_depth {
        let gt = load_depth(p)?;
        let pred = DepthMap::from(&rasterize_index(&svg, size)?);
        report.order = Some(order_consistency(&gt, &pred, &OrderMetricConfig { seed, ..Default::default() })?);
        report.mae = Some(mae_normalized(&gt, &pred)?);
        report.mse = Some(mse_normalized(&gt, &pred)?);
    }
    if let Some(p) = gt_svg {
        let gt = read_svg(p, false)?;
        report.path_count_error = Some(path_count_error(gt.path_count(), svg.path_count())?);
    }
    Ok(report.to_json())
}

pub fn relief(depth: &Path, out: &Path, scale: Option<f64>, stride: u32, bins: Option<Vec<f64>>) -> Result<String> {
    if stride == 0 {
        bail!("stride must be at least 1");
    }
    let d = load_depth(depth)?;
    let mesh = depth_to_mesh_with(&d, &ReliefOptions { height_scale: scale, stride, bins })?;
    mesh.save_obj(out).with_context(|| format!("writing {}", out.display()))?;
    Ok(json!({
        "vertices": mesh.vertices.len(),
        "triangles": mesh.triangles.len(),
        "height_scale": mesh.height_scale,
    })
    .to_string())
}

pub fn bundle(image: &Path, depth: &Path, out: &Path, with_clusters: bool) -> Result<String> {
    let img = load_rgb(image).with_context(|| format!("loading {}", image.display()))?;
    let d = load_depth(depth)?;
    let clusters =
        if with_clusters { Some(order_by_depth(&cluster_colors(&img, &PipelineConfig::default()), &d)?) } else { None };
    let doc = BundleDocument::build(&img, &d, clusters.as_ref())?;
    fs::write(out, doc.to_json()).with_context(|| format!("writing {}", out.display()))?;
    Ok(json!({
        "width": doc.width,
        "height": doc.height,
        "depth_format": doc.depth_format,
        "suggested_bins": doc.suggested_bins,
    })
    .to_string())
}
