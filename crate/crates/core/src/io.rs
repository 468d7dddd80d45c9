//! PNG encoding and decoding for color images, index rasters, depth maps and masks.

use std::fmt;
use std::io::Cursor;
use std::path::Path;
use std::str::FromStr;

use image::{DynamicImage, ImageBuffer, ImageFormat, Luma, Rgb as ImgRgb};

use crate::color::Rgb;
use crate::depth::DepthMap;
use crate::error::{Error, Result};
use crate::index::{decode_layer_index, IndexRaster};
use crate::raster::RasterImage;

/// Pixel layout of a depth PNG.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DepthFormat {
    /// 8-bit RGB, value = R + 256·G + 256²·B.
    FalseColor24,
    Gray16,
    Gray8,
}

impl DepthFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            DepthFormat::FalseColor24 => "false_color_24",
            DepthFormat::Gray16 => "gray_16",
            DepthFormat::Gray8 => "gray_8",
        }
    }
}

impl fmt::Display for DepthFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DepthFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.replace('-', "_").as_str() {
            "false_color_24" | "false_color" => Ok(DepthFormat::FalseColor24),
            "gray_16" | "gray16" => Ok(DepthFormat::Gray16),
            "gray_8" | "gray8" => Ok(DepthFormat::Gray8),
            _ => Err(Error::UnsupportedFormat(s.to_string())),
        }
    }
}

fn decode_png(bytes: &[u8]) -> Result<DynamicImage> {
    image::load_from_memory_with_format(bytes, ImageFormat::Png).map_err(|e| Error::Decode(e.to_string()))
}

fn encode(img: DynamicImage) -> Vec<u8> {
    let mut buf = Cursor::new(Vec::new());
    img.write_to(&mut buf, ImageFormat::Png).expect("in-memory PNG encoding");
    buf.into_inner()
}

/// Layout a depth PNG was stored with, if it is one of the supported ones.
pub fn detect_depth_format(bytes: &[u8]) -> Result<DepthFormat> {
    match decode_png(bytes)? {
        DynamicImage::ImageRgb8(_) => Ok(DepthFormat::FalseColor24),
        DynamicImage::ImageLuma16(_) => Ok(DepthFormat::Gray16),
        DynamicImage::ImageLuma8(_) => Ok(DepthFormat::Gray8),
        other => Err(Error::UnsupportedFormat(format!("{:?}", other.color()))),
    }
}

/// Decodes a depth PNG whose pixel layout must match `format` exactly.
pub fn decode_depth(bytes: &[u8], format: DepthFormat) -> Result<DepthMap> {
    let img = decode_png(bytes)?;
    let (w, h) = (img.width(), img.height());
    if w == 0 || h == 0 {
        return Err(Error::Decode("empty image".into()));
    }
    let values: Vec<f64> = match (format, img) {
        (DepthFormat::FalseColor24, DynamicImage::ImageRgb8(b)) => {
            b.pixels().map(|p| f64::from(decode_layer_index(Rgb(p.0)))).collect()
        }
        (DepthFormat::Gray16, DynamicImage::ImageLuma16(b)) => b.pixels().map(|p| f64::from(p.0[0])).collect(),
        (DepthFormat::Gray8, DynamicImage::ImageLuma8(b)) => b.pixels().map(|p| f64::from(p.0[0])).collect(),
        (f, img) => {
            return Err(Error::Decode(format!("declared {f} but file holds {:?}", img.color())));
        }
    };
    DepthMap::new(w, h, values)
}

pub fn load_depth(path: impl AsRef<Path>, format: DepthFormat) -> Result<DepthMap> {
    decode_depth(&std::fs::read(path)?, format)
}

/// Loads a depth PNG in whichever supported layout it was written.
pub fn load_depth_auto(path: impl AsRef<Path>) -> Result<DepthMap> {
    let bytes = std::fs::read(path)?;
    let format = detect_depth_format(&bytes)?;
    decode_depth(&bytes, format)
}

/// Any PNG as opaque RGB; alpha is dropped.
pub fn decode_rgb(bytes: &[u8]) -> Result<RasterImage> {
    let img = decode_png(bytes)?.to_rgb8();
    let (w, h) = img.dimensions();
    Ok(RasterImage { width: w, height: h, pixels: img.pixels().map(|p| Rgb(p.0)).collect() })
}

pub fn load_rgb(path: impl AsRef<Path>) -> Result<RasterImage> {
    decode_rgb(&std::fs::read(path)?)
}

pub fn encode_rgb(img: &RasterImage) -> Vec<u8> {
    let raw: Vec<u8> = img.pixels.iter().flat_map(|p| p.0).collect();
    let buf = ImageBuffer::<ImgRgb<u8>, _>::from_raw(img.width, img.height, raw).expect("buffer length matches");
    encode(DynamicImage::ImageRgb8(buf))
}

pub fn save_rgb(img: &RasterImage, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_rgb(img))?;
    Ok(())
}

/// Encodes integer indices. `Gray16` and `Gray8` fail when a value does not fit.
pub fn encode_index(idx: &IndexRaster, format: DepthFormat) -> Result<Vec<u8>> {
    let (w, h) = (idx.width, idx.height);
    let max = idx.max_index();
    Ok(match format {
        DepthFormat::FalseColor24 => {
            let img = RasterImage { width: w, height: h, pixels: idx.to_false_color() };
            encode_rgb(&img)
        }
        DepthFormat::Gray16 => {
            if max > u32::from(u16::MAX) {
                return Err(Error::UnsupportedFormat(format!("max index {max} needs more than 16 bits")));
            }
            let raw: Vec<u16> = idx.indices.iter().map(|&i| i as u16).collect();
            let buf = ImageBuffer::<Luma<u16>, _>::from_raw(w, h, raw).expect("buffer length matches");
            encode(DynamicImage::ImageLuma16(buf))
        }
        DepthFormat::Gray8 => {
            if max > u32::from(u8::MAX) {
                return Err(Error::UnsupportedFormat(format!("max index {max} needs more than 8 bits")));
            }
            let raw: Vec<u8> = idx.indices.iter().map(|&i| i as u8).collect();
            let buf = ImageBuffer::<Luma<u8>, _>::from_raw(w, h, raw).expect("buffer length matches");
            encode(DynamicImage::ImageLuma8(buf))
        }
    })
}

pub fn save_index(idx: &IndexRaster, format: DepthFormat, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_index(idx, format)?)?;
    Ok(())
}

/// 1-bit grayscale mask PNG: covered pixels white.
pub fn encode_mask(mask: &[bool], width: u32, height: u32) -> Vec<u8> {
    let stride = (width as usize).div_ceil(8);
    let mut packed = vec![0u8; stride * height as usize];
    for (i, _) in mask.iter().enumerate().filter(|(_, &b)| b) {
        let (x, y) = (i % width as usize, i / width as usize);
        packed[y * stride + x / 8] |= 0x80 >> (x % 8);
    }
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, width, height);
        enc.set_color(png::ColorType::Grayscale);
        enc.set_depth(png::BitDepth::One);
        let mut writer = enc.write_header().expect("in-memory PNG encoding");
        writer.write_image_data(&packed).expect("in-memory PNG encoding");
    }
    out
}

/// Any PNG as a mask: a pixel is set when its luma is nonzero.
pub fn decode_mask(bytes: &[u8]) -> Result<(u32, u32, Vec<bool>)> {
    let img = decode_png(bytes)?.to_luma8();
    let (w, h) = img.dimensions();
    Ok((w, h, img.pixels().map(|p| p.0[0] != 0).collect()))
}
