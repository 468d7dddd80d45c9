//! Layer-index ("illustrator's") depth for layered illustrations.
//!
//! Pixels are assigned the paint position of the layer that shows through at
//! that point. This crate turns layered SVGs into image/depth pairs, scores
//! predicted depth against ground truth, uses depth to order and assemble
//! vectorized layers, and turns depth into relief meshes.

pub mod bundle;
pub mod color;
pub mod curate;
pub mod depth;
pub mod error;
pub mod fidelity;
pub mod geom;
pub mod index;
pub mod io;
pub mod metrics;
pub mod order;
pub mod raster;
pub mod relief;
pub mod svg;
pub mod synth;
pub mod vector;

pub use color::Rgb;
pub use error::{Error, Result};
pub use index::{decode_layer_index, encode_layer_index, IndexRaster};
pub use raster::{rasterize, RasterImage, RasterMode, RasterOptions};
pub use svg::{parse_svg, serialize_svg, FillRule, Layer, LayeredSvg, Shape};
pub use vector::{vectorize, PipelineConfig};
