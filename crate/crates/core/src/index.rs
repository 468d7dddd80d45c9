//! Base-256 false-color encoding of layer indices and the integer index raster.

use serde::{Deserialize, Serialize};

use crate::color::Rgb;
use crate::error::{Error, Result};

/// Exclusive upper bound of an index that fits in three 8-bit channels.
pub const MAX_INDEX: u32 = 1 << 24;

/// `(i mod 256, ⌊i/256⌋ mod 256, ⌊i/256²⌋ mod 256)`.
pub fn encode_layer_index(i: u32) -> Result<Rgb> {
    if i >= MAX_INDEX {
        return Err(Error::IndexOverflow(u64::from(i)));
    }
    Ok(Rgb([(i & 0xff) as u8, ((i >> 8) & 0xff) as u8, ((i >> 16) & 0xff) as u8]))
}

/// `R + 256·G + 256²·B`.
pub fn decode_layer_index(rgb: Rgb) -> u32 {
    let [r, g, b] = rgb.0;
    u32::from(r) + 256 * u32::from(g) + 65536 * u32::from(b)
}

/// Per-pixel layer indices, row-major. Index 0 is uncovered canvas; painted
/// layers are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexRaster {
    pub width: u32,
    pub height: u32,
    pub indices: Vec<u32>,
}

impl IndexRaster {
    pub fn new(width: u32, height: u32) -> Self {
        IndexRaster { width, height, indices: vec![0; width as usize * height as usize] }
    }

    pub fn get(&self, x: u32, y: u32) -> u32 {
        self.indices[y as usize * self.width as usize + x as usize]
    }

    pub fn max_index(&self) -> u32 {
        self.indices.iter().copied().max().unwrap_or(0)
    }

    /// False-color pixels, one encoded triple per index.
    pub fn to_false_color(&self) -> Vec<Rgb> {
        self.indices.iter().map(|&i| encode_layer_index(i).expect("indices are kept below 2^24")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encode_examples() {
        assert_eq!(encode_layer_index(0).unwrap(), Rgb([0, 0, 0]));
        assert_eq!(encode_layer_index(255).unwrap(), Rgb([255, 0, 0]));
        assert_eq!(encode_layer_index(257).unwrap(), Rgb([1, 1, 0]));
        assert!(matches!(encode_layer_index(MAX_INDEX), Err(Error::IndexOverflow(_))));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(decode_layer_index(Rgb([0, 0, 0])), 0);
        assert_eq!(decode_layer_index(Rgb([1, 1, 0])), 257);
        assert_eq!(decode_layer_index(Rgb([255, 255, 255])), 16_777_215);
    }

    proptest::proptest! {
        #[test]
        fn roundtrip(i in 0u32..MAX_INDEX) {
            proptest::prop_assert_eq!(decode_layer_index(encode_layer_index(i).unwrap()), i);
        }
    }
}
