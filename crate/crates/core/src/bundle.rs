//! Self-contained JSON document carrying an image, its depth and summary data
//! for the interactive layer explorer.

use base64::engine::general_purpose::STANDARD as B64;
use base64::Engine;
use serde::{Deserialize, Serialize};

use crate::depth::{normalization_stats, DepthMap};
use crate::error::{check_dims, Error, Result};
use crate::index::MAX_INDEX;
use crate::io::{decode_depth, decode_rgb, detect_depth_format, encode_index, encode_rgb, DepthFormat};
use crate::raster::RasterImage;
use crate::vector::ClusterMap;

pub const BUNDLE_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthStats {
    pub min: f64,
    pub max: f64,
    pub median: f64,
    /// Mean absolute deviation about the median.
    pub mad: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleCluster {
    pub rank: usize,
    /// `#rrggbb`.
    pub color: String,
    pub pixel_count: usize,
    pub median_depth: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BundleDocument {
    pub version: u32,
    pub width: u32,
    pub height: u32,
    /// Base64 RGB PNG.
    pub image: String,
    /// Base64 PNG; 16-bit gray when every value fits, 24-bit false color otherwise.
    pub depth: String,
    pub depth_format: String,
    pub depth_stats: DepthStats,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<BundleCluster>>,
    pub suggested_bins: Vec<f64>,
}

pub fn depth_stats(d: &DepthMap) -> Result<DepthStats> {
    let (min, max) = d.min_max().ok_or(Error::EmptyMap)?;
    let s = normalization_stats(d)?;
    Ok(DepthStats { min, max, median: s.median, mad: s.mad })
}

/// Thresholds splitting a depth map into layers. For integer depth: every
/// distinct value except the smallest, minus 0.5, so each value gets its own
/// bin. Otherwise three evenly spaced thresholds strictly inside the range.
pub fn suggested_bins(d: &DepthMap) -> Vec<f64> {
    if d.values.iter().all(|v| v.fract() == 0.0) {
        let mut vals: Vec<f64> = d.values.clone();
        vals.sort_by(f64::total_cmp);
        vals.dedup();
        return vals.iter().skip(1).map(|v| v - 0.5).collect();
    }
    match d.min_max() {
        Some((lo, hi)) if hi > lo => (1..=3).map(|k| lo + (hi - lo) * f64::from(k) / 4.0).collect(),
        _ => Vec::new(),
    }
}

impl BundleDocument {
    /// Builds a bundle from an image and an integer depth map in `[0, 2^24)`.
    pub fn build(img: &RasterImage, depth: &DepthMap, clusters: Option<&ClusterMap>) -> Result<BundleDocument> {
        check_dims(img.width, img.height, depth.width, depth.height)?;
        let idx = depth
            .to_indices()
            .filter(|r| r.max_index() < MAX_INDEX)
            .ok_or_else(|| Error::UnsupportedFormat("bundle depth must be integers in [0, 2^24)".into()))?;
        let format =
            if idx.max_index() <= u32::from(u16::MAX) { DepthFormat::Gray16 } else { DepthFormat::FalseColor24 };
        let clusters = clusters.map(|cm| {
            cm.clusters
                .iter()
                .enumerate()
                .map(|(k, c)| BundleCluster {
                    rank: k + 1,
                    color: crate::color::Rgb::from_unit(c.mean_color).hex(),
                    pixel_count: c.pixel_count,
                    median_depth: c.median_depth.unwrap_or(f64::NAN),
                })
                .collect()
        });
        Ok(BundleDocument {
            version: BUNDLE_VERSION,
            width: img.width,
            height: img.height,
            image: B64.encode(encode_rgb(img)),
            depth: B64.encode(encode_index(&idx, format)?),
            depth_format: format.as_str().to_string(),
            depth_stats: depth_stats(depth)?,
            clusters,
            suggested_bins: suggested_bins(depth),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("bundle serializes")
    }

    pub fn from_json(s: &str) -> Result<BundleDocument> {
        let doc: BundleDocument = serde_json::from_str(s).map_err(|e| Error::Decode(e.to_string()))?;
        if doc.version != BUNDLE_VERSION {
            return Err(Error::UnsupportedFormat(format!("bundle version {}", doc.version)));
        }
        if doc.suggested_bins.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::UnsortedEdges);
        }
        Ok(doc)
    }

    /// Decodes both embedded rasters, checking them against the declared size.
    pub fn decode(&self) -> Result<(RasterImage, DepthMap)> {
        let img_bytes = B64.decode(&self.image).map_err(|e| Error::Decode(e.to_string()))?;
        let depth_bytes = B64.decode(&self.depth).map_err(|e| Error::Decode(e.to_string()))?;
        let img = decode_rgb(&img_bytes)?;
        let format: DepthFormat = self.depth_format.parse()?;
        if detect_depth_format(&depth_bytes)? != format {
            return Err(Error::Decode(format!("embedded depth is not {format}")));
        }
        let depth = decode_depth(&depth_bytes, format)?;
        check_dims(self.width, self.height, img.width, img.height)?;
        check_dims(self.width, self.height, depth.width, depth.height)?;
        Ok((img, depth))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Rgb;

    fn fixture() -> (RasterImage, DepthMap) {
        let img = RasterImage::from_fn(6, 4, |x, y| Rgb::new((x * 40) as u8, (y * 60) as u8, 9));
        let depth = DepthMap::from_fn(6, 4, |x, y| f64::from(1 + (x / 2 + y / 2) % 3));
        (img, depth)
    }

    #[test]
    fn round_trip() {
        let (img, depth) = fixture();
        let doc = BundleDocument::build(&img, &depth, None).unwrap();
        assert_eq!(doc.depth_format, "gray_16");
        let back = BundleDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        let (i2, d2) = back.decode().unwrap();
        assert_eq!(i2, img);
        assert_eq!(d2, depth);
    }

    #[test]
    fn large_indices_use_false_color() {
        let (img, _) = fixture();
        let depth = DepthMap::from_fn(6, 4, |x, _| f64::from(70_000 + x));
        let doc = BundleDocument::build(&img, &depth, None).unwrap();
        assert_eq!(doc.depth_format, "false_color_24");
        assert_eq!(doc.decode().unwrap().1, depth);
    }

    #[test]
    fn bins_for_integer_depth() {
        let (_, depth) = fixture();
        assert_eq!(suggested_bins(&depth), vec![1.5, 2.5]);
        let flat = DepthMap::from_fn(3, 3, |_, _| 4.0);
        assert!(suggested_bins(&flat).is_empty());
        let real = DepthMap::new(3, 1, vec![0.0, 0.5, 2.0]).unwrap();
        assert_eq!(suggested_bins(&real), vec![0.5, 1.0, 1.5]);
    }

    #[test]
    fn stats() {
        let d = DepthMap::new(4, 1, vec![1.0, 2.0, 3.0, 10.0]).unwrap();
        let s = depth_stats(&d).unwrap();
        assert_eq!((s.min, s.max, s.median), (1.0, 10.0, 2.0));
        assert_eq!(s.mad, (1.0 + 0.0 + 1.0 + 8.0) / 4.0);
    }

    #[test]
    fn rejects_real_depth_and_bad_version() {
        let (img, _) = fixture();
        let real = DepthMap::from_fn(6, 4, |x, _| f64::from(x) + 0.25);
        assert!(BundleDocument::build(&img, &real, None).is_err());
        let (img, depth) = fixture();
        let mut doc = BundleDocument::build(&img, &depth, None).unwrap();
        doc.version = 2;
        assert!(BundleDocument::from_json(&doc.to_json()).is_err());
    }
}
