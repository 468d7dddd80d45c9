//! Visual fidelity and compactness measures for vectorized output.

use crate::error::{check_dims, Error, Result};
use crate::raster::RasterImage;

/// Mean squared difference over all channels, channels scaled to `[0, 1]`.
pub fn rgb_mse(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    check_dims(a.width, a.height, b.width, b.height)?;
    if a.is_empty() {
        return Err(Error::EmptyMap);
    }
    let sum: f64 = a
        .pixels
        .iter()
        .zip(&b.pixels)
        .map(|(p, q)| {
            let (p, q) = (p.to_unit(), q.to_unit());
            (0..3).map(|k| (p[k] - q[k]) * (p[k] - q[k])).sum::<f64>()
        })
        .sum();
    Ok(sum / (3 * a.len()) as f64)
}

/// `|N - Ñ| / N` for ground-truth and reconstructed path counts.
pub fn path_count_error(n_gt: usize, n_pred: usize) -> Result<f64> {
    if n_gt == 0 {
        return Err(Error::ZeroGroundTruth);
    }
    Ok(n_gt.abs_diff(n_pred) as f64 / n_gt as f64)
}

pub const SSIM_WINDOW: usize = 11;
pub const SSIM_SIGMA: f64 = 1.5;
const K1: f64 = 0.01;
const K2: f64 = 0.03;

/// Rec. 601 luma in `[0, 1]`.
pub fn luma(img: &RasterImage) -> Vec<f64> {
    img.pixels
        .iter()
        .map(|p| {
            let [r, g, b] = p.to_unit();
            0.299 * r + 0.587 * g + 0.114 * b
        })
        .collect()
}

pub fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size as f64 - 1.0) / 2.0;
    let k: Vec<f64> = (0..size).map(|i| (-((i as f64 - c).powi(2)) / (2.0 * sigma * sigma)).exp()).collect();
    let s: f64 = k.iter().sum();
    k.into_iter().map(|v| v / s).collect()
}

/// Separable "valid" filtering: output is `(w - k + 1) x (h - k + 1)`.
fn filter_valid(src: &[f64], w: usize, h: usize, k: &[f64]) -> Vec<f64> {
    let n = k.len();
    let ow = w - n + 1;
    let oh = h - n + 1;
    let mut tmp = vec![0.0; ow * h];
    for y in 0..h {
        let row = &src[y * w..(y + 1) * w];
        for x in 0..ow {
            tmp[y * ow + x] = k.iter().zip(&row[x..x + n]).map(|(a, b)| a * b).sum();
        }
    }
    let mut out = vec![0.0; ow * oh];
    for y in 0..oh {
        for x in 0..ow {
            out[y * ow + x] = (0..n).map(|i| k[i] * tmp[(y + i) * ow + x]).sum();
        }
    }
    out
}

/// Mean SSIM over all fully-contained 11x11 Gaussian windows (σ = 1.5) of the
/// luma planes, with `K1 = 0.01`, `K2 = 0.03` and dynamic range 1.
pub fn ssim(a: &RasterImage, b: &RasterImage) -> Result<f64> {
    check_dims(a.width, a.height, b.width, b.height)?;
    let (w, h) = (a.width as usize, a.height as usize);
    if w < SSIM_WINDOW || h < SSIM_WINDOW {
        return Err(Error::TooSmall(format!("{w}x{h} is smaller than the {SSIM_WINDOW}px window")));
    }
    let x = luma(a);
    let y = luma(b);
    let k = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA);
    let xx: Vec<f64> = x.iter().map(|v| v * v).collect();
    let yy: Vec<f64> = y.iter().map(|v| v * v).collect();
    let xy: Vec<f64> = x.iter().zip(&y).map(|(p, q)| p * q).collect();
    let mx = filter_valid(&x, w, h, &k);
    let my = filter_valid(&y, w, h, &k);
    let sxx = filter_valid(&xx, w, h, &k);
    let syy = filter_valid(&yy, w, h, &k);
    let sxy = filter_valid(&xy, w, h, &k);
    let c1 = K1 * K1;
    let c2 = K2 * K2;
    let total: f64 = (0..mx.len())
        .map(|i| {
            let (ux, uy) = (mx[i], my[i]);
            let vx = sxx[i] - ux * ux;
            let vy = syy[i] - uy * uy;
            let cxy = sxy[i] - ux * uy;
            ((2.0 * ux * uy + c1) * (2.0 * cxy + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2))
        })
        .sum();
    Ok(total / mx.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::color::Rgb;

    #[test]
    fn mse_extremes() {
        let black = RasterImage::new(4, 4, Rgb::BLACK);
        let white = RasterImage::new(4, 4, Rgb::WHITE);
        assert_eq!(rgb_mse(&black, &black).unwrap(), 0.0);
        assert_eq!(rgb_mse(&black, &white).unwrap(), 1.0);
        let checker = RasterImage::from_fn(6, 6, |x, y| if (x + y) % 2 == 0 { Rgb::BLACK } else { Rgb::WHITE });
        let inverse = RasterImage::from_fn(6, 6, |x, y| if (x + y) % 2 == 1 { Rgb::BLACK } else { Rgb::WHITE });
        assert_eq!(rgb_mse(&checker, &inverse).unwrap(), 1.0);
    }

    #[test]
    fn path_counts() {
        assert_eq!(path_count_error(10, 10).unwrap(), 0.0);
        assert!((path_count_error(100, 116).unwrap() - 0.16).abs() < 1e-15);
        assert_eq!(path_count_error(4, 0).unwrap(), 1.0);
        assert!(matches!(path_count_error(0, 3), Err(Error::ZeroGroundTruth)));
    }

    #[test]
    fn ssim_self_and_constant() {
        let img = RasterImage::from_fn(20, 16, |x, y| Rgb::new((x * 12) as u8, (y * 15) as u8, 77));
        assert!((ssim(&img, &img).unwrap() - 1.0).abs() < 1e-12);
        let gray = RasterImage::new(12, 12, Rgb::new(128, 128, 128));
        assert!((ssim(&gray, &gray).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ssim_rejects_small_and_mismatched() {
        let small = RasterImage::new(10, 30, Rgb::BLACK);
        assert!(matches!(ssim(&small, &small), Err(Error::TooSmall(_))));
        let a = RasterImage::new(12, 12, Rgb::BLACK);
        let b = RasterImage::new(13, 12, Rgb::BLACK);
        assert!(matches!(ssim(&a, &b), Err(Error::DimensionMismatch(..))));
    }

    #[test]
    fn kernel_is_normalized_and_symmetric() {
        let k = gaussian_kernel(11, 1.5);
        assert!((k.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(k[0], k[10]);
        assert!(k[5] > k[4]);
    }
}
