//! Heightfield meshes from depth maps, with Wavefront OBJ output.

use std::fmt::Write as _;
use std::io::Write;

use crate::depth::{bin_depth, DepthMap};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct ReliefMesh {
    /// `(x, y, z)` with x and y in pixels.
    pub vertices: Vec<[f64; 3]>,
    /// Zero-based vertex indices, counter-clockwise seen from +z.
    pub triangles: Vec<[u32; 3]>,
    pub height_scale: f64,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct ReliefOptions {
    /// Defaults to `0.1 · max(H, W)`.
    pub height_scale: Option<f64>,
    /// Sample every `stride`-th pixel; `0` is treated as 1.
    pub stride: u32,
    /// Bin edges; when set, depth is replaced by its bin before extrusion,
    /// giving a stepped relief.
    pub bins: Option<Vec<f64>>,
}

pub fn default_height_scale(width: u32, height: u32) -> f64 {
    0.1 * f64::from(width.max(height))
}

/// Z values snap to the grid OBJ coordinates are written on, so a written
/// mesh reads back identically.
fn snap(z: f64) -> f64 {
    (z * 1e6).round() / 1e6
}

pub fn depth_to_mesh(d: &DepthMap, height_scale: f64, stride: u32) -> Result<ReliefMesh> {
    depth_to_mesh_with(d, &ReliefOptions { height_scale: Some(height_scale), stride, bins: None })
}

/// One vertex per sampled pixel at `(x, y, height_scale · t)` where `t` is depth
/// rescaled to `[0, 1]` (0 for a constant map), so nearer layers stand higher.
/// Each grid cell is split along its top-left to bottom-right diagonal.
pub fn depth_to_mesh_with(d: &DepthMap, opts: &ReliefOptions) -> Result<ReliefMesh> {
    let stride = opts.stride.max(1);
    let scale = opts.height_scale.unwrap_or_else(|| default_height_scale(d.width, d.height));
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::InvalidConfig(format!("height scale must be positive, got {scale}")));
    }
    let cols = d.width.div_ceil(stride) as usize;
    let rows = d.height.div_ceil(stride) as usize;
    if rows < 2 || cols < 2 {
        return Err(Error::TooSmall(format!("{cols}x{rows} samples; a mesh needs at least 2x2")));
    }
    let binned;
    let d = match &opts.bins {
        Some(edges) => {
            binned = DepthMap::from(&bin_depth(d, edges)?);
            &binned
        }
        None => d,
    };
    let (lo, hi) = d.min_max().ok_or(Error::EmptyMap)?;
    let range = hi - lo;
    let s = stride as usize;
    let w = d.width as usize;
    let mut vertices = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        for j in 0..cols {
            let (x, y) = (j * s, i * s);
            let t = if range > 0.0 { (d.values[y * w + x] - lo) / range } else { 0.0 };
            vertices.push([x as f64, y as f64, snap(scale * t)]);
        }
    }
    let mut triangles = Vec::with_capacity(2 * (rows - 1) * (cols - 1));
    for i in 0..rows - 1 {
        for j in 0..cols - 1 {
            let a = (i * cols + j) as u32;
            let b = a + 1;
            let c = a + cols as u32;
            let dd = c + 1;
            triangles.push([a, b, dd]);
            triangles.push([a, dd, c]);
        }
    }
    Ok(ReliefMesh { vertices, triangles, height_scale: scale })
}

impl ReliefMesh {
    /// OBJ text: `v` records with six decimals, then 1-based `f` records.
    pub fn to_obj(&self) -> String {
        let mut s = String::with_capacity(self.vertices.len() * 32 + self.triangles.len() * 24);
        for v in &self.vertices {
            let _ = writeln!(s, "v {:.6} {:.6} {:.6}", v[0], v[1], v[2]);
        }
        for t in &self.triangles {
            let _ = writeln!(s, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1);
        }
        s
    }

    pub fn write_obj(&self, mut w: impl Write) -> Result<()> {
        w.write_all(self.to_obj().as_bytes())?;
        Ok(())
    }

    pub fn save_obj(&self, path: impl AsRef<std::path::Path>) -> Result<()> {
        std::fs::write(path, self.to_obj())?;
        Ok(())
    }

    /// Unit normal of triangle `k`.
    pub fn normal(&self, k: usize) -> [f64; 3] {
        let [a, b, c] = self.triangles[k].map(|i| self.vertices[i as usize]);
        let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
        let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
        let n = [u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2], u[0] * v[1] - u[1] * v[0]];
        let len = (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]).sqrt();
        n.map(|x| x / len)
    }
}

/// Vertices and zero-based triangles read back from OBJ text.
pub type ObjData = (Vec<[f64; 3]>, Vec<[u32; 3]>);

/// Reads the `v` and `f` records of an OBJ file; other records are skipped.
/// Only triangular faces with plain vertex indices are accepted.
pub fn parse_obj(text: &str) -> Result<ObjData> {
    let bad = |line: usize, msg: &str| Error::Decode(format!("OBJ line {line}: {msg}"));
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let mut parts = line.split_whitespace();
        match parts.next() {
            Some("v") => {
                let c: Vec<f64> =
                    parts.map(str::parse).collect::<Result<_, _>>().map_err(|_| bad(n + 1, "bad number"))?;
                if c.len() < 3 {
                    return Err(bad(n + 1, "vertex needs 3 coordinates"));
                }
                vertices.push([c[0], c[1], c[2]]);
            }
            Some("f") => {
                let idx: Vec<u32> =
                    parts.map(str::parse).collect::<Result<_, _>>().map_err(|_| bad(n + 1, "bad index"))?;
                if idx.len() != 3 || idx.contains(&0) {
                    return Err(bad(n + 1, "expected a triangle with 1-based indices"));
                }
                faces.push([idx[0] - 1, idx[1] - 1, idx[2] - 1]);
            }
            _ => {}
        }
    }
    if let Some(f) = faces.iter().flatten().find(|&&i| i as usize >= vertices.len()) {
        return Err(Error::Decode(format!("face index {} out of range", f + 1)));
    }
    Ok((vertices, faces))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let d = DepthMap::new(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let m = depth_to_mesh(&d, 1.0, 1).unwrap();
        assert_eq!(m.vertices.len(), 4);
        assert_eq!(m.triangles.len(), 2);
        let obj = m.to_obj();
        assert_eq!(obj.lines().filter(|l| l.starts_with("v ")).count(), 4);
        assert_eq!(obj.lines().filter(|l| l.starts_with("f ")).count(), 2);
        assert_eq!(m.vertices[3], [1.0, 1.0, 1.0]);
    }

    #[test]
    fn ramp_normals_agree() {
        // z = i / 2 over a 3x3 ramp, scale 1: every normal is (0, -1, 2)/√5.
        let d = DepthMap::from_fn(3, 3, |_, i| f64::from(i));
        let m = depth_to_mesh(&d, 1.0, 1).unwrap();
        let expect = [0.0, -1.0 / 5f64.sqrt(), 2.0 / 5f64.sqrt()];
        for k in 0..m.triangles.len() {
            let n = m.normal(k);
            for a in 0..3 {
                assert!((n[a] - expect[a]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn constant_map_is_flat_and_faces_up() {
        let d = DepthMap::from_fn(5, 4, |_, _| 7.0);
        let m = depth_to_mesh_with(&d, &ReliefOptions::default()).unwrap();
        assert!(m.vertices.iter().all(|v| v[2] == 0.0));
        assert!((0..m.triangles.len()).all(|k| m.normal(k)[2] > 0.0));
        assert_eq!(m.height_scale, 0.5);
    }

    #[test]
    fn stride_counts() {
        let d = DepthMap::from_fn(10, 7, |x, y| f64::from(x * y));
        let m = depth_to_mesh(&d, 2.0, 3).unwrap();
        assert_eq!(m.vertices.len(), 4 * 3);
        assert_eq!(m.triangles.len(), 2 * 3 * 2);
    }

    #[test]
    fn too_small_and_bad_scale() {
        let d = DepthMap::from_fn(1, 5, |_, _| 0.0);
        assert!(matches!(depth_to_mesh(&d, 1.0, 1), Err(Error::TooSmall(_))));
        let d = DepthMap::from_fn(4, 4, |_, _| 0.0);
        assert!(matches!(depth_to_mesh(&d, 1.0, 4), Err(Error::TooSmall(_))));
        assert!(depth_to_mesh(&d, 1.0, 3).is_ok());
        assert!(depth_to_mesh(&d, 0.0, 1).is_err());
    }

    #[test]
    fn raising_one_pixel_moves_one_vertex() {
        let base = DepthMap::from_fn(6, 5, |x, y| f64::from((x + 2 * y) % 4));
        let mut raised = base.clone();
        raised.values[13] += 0.5;
        let (a, b) = (depth_to_mesh(&base, 1.0, 1).unwrap(), depth_to_mesh(&raised, 1.0, 1).unwrap());
        // The range is unchanged, so only vertex 13 moves.
        let moved: Vec<usize> = (0..a.vertices.len()).filter(|&k| a.vertices[k] != b.vertices[k]).collect();
        assert_eq!(moved, vec![13]);
        assert!(b.vertices[13][2] > a.vertices[13][2]);
    }

    #[test]
    fn binned_relief_is_stepped() {
        let d = DepthMap::from_fn(8, 2, |x, _| f64::from(x));
        let m = depth_to_mesh_with(&d, &ReliefOptions { height_scale: Some(1.0), stride: 1, bins: Some(vec![3.5]) })
            .unwrap();
        let zs: Vec<f64> = m.vertices[..8].iter().map(|v| v[2]).collect();
        assert_eq!(zs, vec![0.0, 0.0, 0.0, 0.0, 1.0, 1.0, 1.0, 1.0]);
    }

    #[test]
    fn obj_round_trip() {
        let d = DepthMap::from_fn(9, 6, |x, y| f64::from(x * 7 + y * 3) / 11.0);
        let m = depth_to_mesh(&d, 2.7, 1).unwrap();
        let (v, f) = parse_obj(&m.to_obj()).unwrap();
        assert_eq!(v, m.vertices);
        assert_eq!(f, m.triangles);
    }

    #[test]
    fn obj_rejects_bad_faces() {
        assert!(parse_obj("v 0 0 0\nf 1 2 3\n").is_err());
        assert!(parse_obj("v 0 0 0\nf 0 1 1\n").is_err());
    }
}
