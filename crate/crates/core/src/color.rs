use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// An opaque 8-bit sRGB color.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const BLACK: Rgb = Rgb([0, 0, 0]);
    pub const WHITE: Rgb = Rgb([255, 255, 255]);

    pub const fn new(r: u8, g: u8, b: u8) -> Self {
        Rgb([r, g, b])
    }

    /// Channels scaled to `[0, 1]`.
    pub fn to_unit(self) -> [f64; 3] {
        self.0.map(|c| f64::from(c) / 255.0)
    }

    /// Rounds a `[0, 1]` color to the nearest 8-bit value, clamping out-of-range channels.
    pub fn from_unit(c: [f64; 3]) -> Self {
        Rgb(c.map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8))
    }

    pub fn hex(self) -> String {
        format!("#{:02x}{:02x}{:02x}", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.hex())
    }
}

impl FromStr for Rgb {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let c: svgtypes::Color = s.trim().parse().map_err(|e| Error::InvalidConfig(format!("bad color {s:?}: {e}")))?;
        Ok(Rgb([c.red, c.green, c.blue]))
    }
}

/// Euclidean distance between two colors given in `[0, 1]` channels.
pub fn unit_distance(a: [f64; 3], b: [f64; 3]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}
