//! Real-valued layer-index depth maps and scale-invariant comparison.

use serde::{Deserialize, Serialize};

use crate::error::{check_dims, Error, Result};
use crate::index::IndexRaster;

/// Per-pixel depth on the layer-index scale; larger values are nearer (painted later).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DepthMap {
    pub width: u32,
    pub height: u32,
    pub values: Vec<f64>,
}

impl DepthMap {
    pub fn new(width: u32, height: u32, values: Vec<f64>) -> Result<Self> {
        if values.len() != width as usize * height as usize {
            return Err(Error::InvalidConfig(format!("{} values for a {width}x{height} map", values.len())));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidConfig(format!("non-finite depth value {v}")));
        }
        Ok(DepthMap { width, height, values })
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> f64) -> Self {
        let mut values = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                values.push(f(x, y));
            }
        }
        DepthMap { width, height, values }
    }

    pub fn get(&self, x: u32, y: u32) -> f64 {
        self.values[y as usize * self.width as usize + x as usize]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> DepthMap {
        DepthMap { width: self.width, height: self.height, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn min_max(&self) -> Option<(f64, f64)> {
        let mut it = self.values.iter().copied();
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// Integer values, if every value is a non-negative integer that fits in `u32`.
    pub fn to_indices(&self) -> Option<IndexRaster> {
        let indices = self
            .values
            .iter()
            .map(|&v| (v >= 0.0 && v.fract() == 0.0 && v <= f64::from(u32::MAX)).then_some(v as u32))
            .collect::<Option<Vec<u32>>>()?;
        Some(IndexRaster { width: self.width, height: self.height, indices })
    }
}

impl From<&IndexRaster> for DepthMap {
    fn from(r: &IndexRaster) -> Self {
        DepthMap { width: r.width, height: r.height, values: r.indices.iter().map(|&i| f64::from(i)).collect() }
    }
}

/// Lower middle element for even-sized samples, so the median of a discrete
/// map is always one of its values. Returns `None` for an empty slice.
pub fn median(values: &[f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    let mut buf = values.to_vec();
    let k = (buf.len() - 1) / 2;
    let (_, m, _) = buf.select_nth_unstable_by(k, f64::total_cmp);
    Some(*m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizationStats {
    pub median: f64,
    /// Mean absolute deviation about the median.
    pub mad: f64,
    /// `mad == 0`; values were only centered.
    pub degenerate: bool,
}

pub fn normalization_stats(d: &DepthMap) -> Result<NormalizationStats> {
    let m = median(&d.values).ok_or(Error::EmptyMap)?;
    let s = d.values.iter().map(|v| (v - m).abs()).sum::<f64>() / d.values.len() as f64;
    Ok(NormalizationStats { median: m, mad: s, degenerate: s == 0.0 })
}

/// `(d - median) / mad`; a constant map is only centered.
pub fn normalize(d: &DepthMap) -> Result<(DepthMap, NormalizationStats)> {
    let stats = normalization_stats(d)?;
    let out = if stats.degenerate { d.map(|v| v - stats.median) } else { d.map(|v| (v - stats.median) / stats.mad) };
    Ok((out, stats))
}

fn normalized_pair(gt: &DepthMap, pred: &DepthMap) -> Result<(DepthMap, DepthMap)> {
    check_dims(gt.width, gt.height, pred.width, pred.height)?;
    Ok((normalize(gt)?.0, normalize(pred)?.0))
}

/// Mean absolute error between the normalized maps; invariant to positive
/// affine rescaling of either argument.
pub fn mae_normalized(gt: &DepthMap, pred: &DepthMap) -> Result<f64> {
    let (a, b) = normalized_pair(gt, pred)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x - y).abs()).sum::<f64>() / a.len() as f64)
}

pub fn mse_normalized(gt: &DepthMap, pred: &DepthMap) -> Result<f64> {
    let (a, b) = normalized_pair(gt, pred)?;
    Ok(a.values.iter().zip(&b.values).map(|(x, y)| (x - y) * (x - y)).sum::<f64>() / a.len() as f64)
}

/// Assigns bin `k` (1-based) where `edges[k-2] < d <= edges[k-1]`; values above
/// the last edge fall in bin `edges.len() + 1`.
pub fn bin_depth(d: &DepthMap, edges: &[f64]) -> Result<IndexRaster> {
    if edges.windows(2).any(|w| !(w[0] < w[1])) || edges.iter().any(|e| e.is_nan()) {
        return Err(Error::UnsortedEdges);
    }
    let indices = d.values.iter().map(|&v| edges.partition_point(|&e| e < v) as u32 + 1).collect();
    Ok(IndexRaster { width: d.width, height: d.height, indices })
}

/// Foreground mask `{d > t}`.
pub fn threshold_mask(d: &DepthMap, t: f64) -> Vec<bool> {
    d.values.iter().map(|&v| v > t).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(v: &[f64]) -> DepthMap {
        DepthMap::new(v.len() as u32, 1, v.to_vec()).unwrap()
    }

    #[test]
    fn normalize_hand_example() {
        let (n, s) = normalize(&row(&[1.0, 2.0, 3.0])).unwrap();
        assert_eq!(s.median, 2.0);
        assert!((s.mad - 2.0 / 3.0).abs() < 1e-15);
        for (a, b) in n.values.iter().zip([-1.5, 0.0, 1.5]) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_map_is_degenerate() {
        let (n, s) = normalize(&DepthMap::new(2, 2, vec![5.0; 4]).unwrap()).unwrap();
        assert!(s.degenerate);
        assert!(n.values.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn empty_map_errors() {
        let d = DepthMap::new(0, 0, vec![]).unwrap();
        assert!(matches!(normalize(&d), Err(Error::EmptyMap)));
    }

    #[test]
    fn median_takes_lower_middle() {
        assert_eq!(median(&[4.0, 1.0, 3.0, 2.0]), Some(2.0));
        assert_eq!(median(&[]), None);
    }

    #[test]
    fn loss_identity_and_affine() {
        let gt = row(&[1.0, 2.0, 3.0, 7.0, 2.0]);
        assert_eq!(mae_normalized(&gt, &gt).unwrap(), 0.0);
        let pred = gt.map(|v| 3.0 * v + 7.0);
        assert!(mae_normalized(&gt, &pred).unwrap() < 1e-12);
        assert!(mse_normalized(&gt, &pred).unwrap() < 1e-24);
    }

    #[test]
    fn dimension_mismatch() {
        let a = row(&[1.0, 2.0]);
        let b = row(&[1.0, 2.0, 3.0]);
        assert!(matches!(mae_normalized(&a, &b), Err(Error::DimensionMismatch(..))));
    }

    #[test]
    fn binning() {
        let d = row(&[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(bin_depth(&d, &[]).unwrap().indices, vec![1; 4]);
        assert_eq!(bin_depth(&d, &[1.5]).unwrap().indices, vec![1, 1, 2, 2]);
        // Values equal to an edge stay in the lower bin.
        assert_eq!(bin_depth(&d, &[1.0, 2.0]).unwrap().indices, vec![1, 1, 2, 3]);
        assert!(matches!(bin_depth(&d, &[2.0, 1.0]), Err(Error::UnsortedEdges)));
        assert!(matches!(bin_depth(&d, &[1.0, 1.0]), Err(Error::UnsortedEdges)));
    }

    #[test]
    fn threshold_matches_second_bin() {
        let d = row(&[0.5, 1.5, 1.6, 3.0, 1.0]);
        let bins = bin_depth(&d, &[1.5]).unwrap();
        let fg = threshold_mask(&d, 1.5);
        for (b, f) in bins.indices.iter().zip(fg) {
            assert_eq!(*b == 2, f);
        }
    }
}
