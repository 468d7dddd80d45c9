use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use serde::{Deserialize, Serialize};

use super::PipelineConfig;
use crate::color::unit_distance;
use crate::raster::RasterImage;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterInfo {
    /// Mean of the member pixels' original colors, channels in `[0, 1]`.
    pub mean_color: [f64; 3],
    pub pixel_count: usize,
    /// Set once clusters are ordered by depth.
    pub median_depth: Option<f64>,
}

/// A partition of the image into clusters with dense ids `0..K`.
///
/// Once ordered, id `k` holds the cluster of depth rank `k + 1`, rank 1 being
/// the backmost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterMap {
    pub width: u32,
    pub height: u32,
    pub labels: Vec<u32>,
    pub clusters: Vec<ClusterInfo>,
    pub ordered: bool,
}

impl ClusterMap {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// Ranks as a 1-based index raster.
    pub fn rank_raster(&self) -> crate::index::IndexRaster {
        crate::index::IndexRaster {
            width: self.width,
            height: self.height,
            indices: self.labels.iter().map(|&l| l + 1).collect(),
        }
    }
}

struct Region {
    sum: [f64; 3],
    count: usize,
    nbrs: BTreeSet<u32>,
    alive: bool,
}

impl Region {
    fn mean(&self) -> [f64; 3] {
        self.sum.map(|s| s / self.count as f64)
    }
}

struct RegionGraph {
    regions: Vec<Region>,
    /// Union-find parent over region ids.
    parent: Vec<u32>,
}

impl RegionGraph {
    fn find(&mut self, mut r: u32) -> u32 {
        while self.parent[r as usize] != r {
            let gp = self.parent[self.parent[r as usize] as usize];
            self.parent[r as usize] = gp;
            r = gp;
        }
        r
    }

    /// Absorbs region `from` into `into`.
    fn merge(&mut self, from: u32, into: u32) {
        debug_assert_ne!(from, into);
        let src = std::mem::take(&mut self.regions[from as usize].nbrs);
        let (sum, count) = {
            let f = &mut self.regions[from as usize];
            f.alive = false;
            (f.sum, f.count)
        };
        self.parent[from as usize] = into;
        for &n in &src {
            if n == into {
                continue;
            }
            let nb = &mut self.regions[n as usize].nbrs;
            nb.remove(&from);
            nb.insert(into);
        }
        let dst = &mut self.regions[into as usize];
        for k in 0..3 {
            dst.sum[k] += sum[k];
        }
        dst.count += count;
        dst.nbrs.extend(src.into_iter().filter(|&n| n != into));
        dst.nbrs.remove(&from);
        dst.nbrs.remove(&into);
    }

    fn nearest_neighbor(&self, r: u32) -> Option<u32> {
        let mean = self.regions[r as usize].mean();
        self.regions[r as usize]
            .nbrs
            .iter()
            .copied()
            .map(|n| (unit_distance(mean, self.regions[n as usize].mean()), n))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, n)| n)
    }
}

fn find_px(parent: &mut [u32], mut i: u32) -> u32 {
    while parent[i as usize] != i {
        let gp = parent[parent[i as usize] as usize];
        parent[i as usize] = gp;
        i = gp;
    }
    i
}

/// Color-constant clusters: quantize, label 4-connected components of equal
/// quantized color, absorb components smaller than `filter_speckle` into the
/// neighbor with the nearest mean color, then merge adjacent clusters closer
/// than `layer_difference`.
pub fn cluster_colors(img: &RasterImage, cfg: &PipelineConfig) -> ClusterMap {
    let (w, h) = (img.width as usize, img.height as usize);
    let n = w * h;
    let shift = 8 - u32::from(cfg.color_precision.clamp(1, 8));
    let quant: Vec<u32> = img
        .pixels
        .iter()
        .map(|p| (u32::from(p.0[0] >> shift) << 16) | (u32::from(p.0[1] >> shift) << 8) | u32::from(p.0[2] >> shift))
        .collect();

    let mut parent: Vec<u32> = (0..n as u32).collect();
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            for j in [(x > 0).then(|| i - 1), (y > 0).then(|| i - w)].into_iter().flatten() {
                if quant[i] == quant[j] {
                    let (a, b) = (find_px(&mut parent, i as u32), find_px(&mut parent, j as u32));
                    if a != b {
                        // Keep the earlier pixel as root so ids follow scan order.
                        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                        parent[hi as usize] = lo;
                    }
                }
            }
        }
    }
    let mut comp = vec![u32::MAX; n];
    let mut region_of = vec![0u32; n];
    let mut regions: Vec<Region> = Vec::new();
    for i in 0..n {
        let root = find_px(&mut parent, i as u32) as usize;
        if comp[root] == u32::MAX {
            comp[root] = regions.len() as u32;
            regions.push(Region { sum: [0.0; 3], count: 0, nbrs: BTreeSet::new(), alive: true });
        }
        let r = comp[root];
        region_of[i] = r;
        let c = img.pixels[i].to_unit();
        let reg = &mut regions[r as usize];
        for k in 0..3 {
            reg.sum[k] += c[k];
        }
        reg.count += 1;
    }
    for y in 0..h {
        for x in 0..w {
            let i = y * w + x;
            for j in [(x + 1 < w).then(|| i + 1), (y + 1 < h).then(|| i + w)].into_iter().flatten() {
                let (a, b) = (region_of[i], region_of[j]);
                if a != b {
                    regions[a as usize].nbrs.insert(b);
                    regions[b as usize].nbrs.insert(a);
                }
            }
        }
    }
    let count = regions.len() as u32;
    let mut g = RegionGraph { regions, parent: (0..count).collect() };

    // Smallest speckles first; stale heap entries are skipped.
    let min_area = cfg.filter_speckle;
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = g
        .regions
        .iter()
        .enumerate()
        .filter(|(_, r)| r.count < min_area)
        .map(|(i, r)| Reverse((r.count, i as u32)))
        .collect();
    while let Some(Reverse((cnt, r))) = heap.pop() {
        let reg = &g.regions[r as usize];
        if !reg.alive || reg.count != cnt || reg.count >= min_area {
            continue;
        }
        let Some(target) = g.nearest_neighbor(r) else { continue };
        g.merge(r, target);
        let t = &g.regions[target as usize];
        if t.count < min_area {
            heap.push(Reverse((t.count, target)));
        }
    }

    if cfg.layer_difference > 0.0 {
        loop {
            let mut changed = false;
            for r in 0..count {
                if !g.regions[r as usize].alive {
                    continue;
                }
                loop {
                    let mean = g.regions[r as usize].mean();
                    let close = g.regions[r as usize]
                        .nbrs
                        .iter()
                        .copied()
                        .find(|&nb| unit_distance(mean, g.regions[nb as usize].mean()) < cfg.layer_difference);
                    let Some(nb) = close else { break };
                    // The larger region survives; ties keep the lower id.
                    let (a, b) = (&g.regions[r as usize], &g.regions[nb as usize]);
                    let keep_r = a.count > b.count || (a.count == b.count && r < nb);
                    if keep_r {
                        g.merge(nb, r);
                    } else {
                        g.merge(r, nb);
                        changed = true;
                        break;
                    }
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }

    // Dense ids in order of each cluster's first pixel.
    let mut dense = vec![u32::MAX; count as usize];
    let mut clusters: Vec<ClusterInfo> = Vec::new();
    let mut labels = vec![0u32; n];
    for i in 0..n {
        let root = g.find(region_of[i]);
        if dense[root as usize] == u32::MAX {
            dense[root as usize] = clusters.len() as u32;
            let reg = &g.regions[root as usize];
            clusters.push(ClusterInfo { mean_color: reg.mean(), pixel_count: reg.count, median_depth: None });
        }
        labels[i] = dense[root as usize];
    }
    ClusterMap { width: img.width, height: img.height, labels, clusters, ordered: false }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Rgb;

    const RED: Rgb = Rgb::new(220, 20, 20);
    const BLUE: Rgb = Rgb::new(20, 20, 220);

    #[test]
    fn solid_image_is_one_cluster() {
        let img = RasterImage::new(16, 9, RED);
        let cm = cluster_colors(&img, &PipelineConfig::default());
        assert_eq!(cm.len(), 1);
        assert_eq!(cm.clusters[0].pixel_count, 144);
        assert!(cm.labels.iter().all(|&l| l == 0));
    }

    #[test]
    fn halves_are_two_equal_clusters() {
        let img = RasterImage::from_fn(10, 6, |x, _| if x < 5 { RED } else { BLUE });
        let cm = cluster_colors(&img, &PipelineConfig::default());
        assert_eq!(cm.len(), 2);
        assert_eq!(cm.clusters[0].pixel_count, 30);
        assert_eq!(cm.clusters[1].pixel_count, 30);
    }

    #[test]
    fn small_speck_is_absorbed() {
        let img = RasterImage::from_fn(10, 10, |x, y| if y == 4 && (3..6).contains(&x) { BLUE } else { RED });
        let cfg = PipelineConfig { filter_speckle: 4, ..Default::default() };
        let cm = cluster_colors(&img, &cfg);
        assert_eq!(cm.len(), 1);
        let cfg = PipelineConfig { filter_speckle: 3, ..Default::default() };
        assert_eq!(cluster_colors(&img, &cfg).len(), 2);
    }

    #[test]
    fn diagonal_touching_regions_stay_separate() {
        // 4-connectivity: the two red pixels only touch at a corner.
        let img = RasterImage::from_fn(2, 2, |x, y| if x == y { RED } else { BLUE });
        let cfg = PipelineConfig { filter_speckle: 0, layer_difference: 0.0, ..Default::default() };
        assert_eq!(cluster_colors(&img, &cfg).len(), 4);
    }

    #[test]
    fn near_colors_merge_by_layer_difference() {
        let img = RasterImage::from_fn(10, 6, |x, _| if x < 5 { RED } else { Rgb::new(224, 20, 20) });
        let cm = cluster_colors(&img, &PipelineConfig { color_precision: 8, ..Default::default() });
        assert_eq!(cm.len(), 1);
        let sum: usize = cm.clusters.iter().map(|c| c.pixel_count).sum();
        assert_eq!(sum, 60);
    }
}
