//! Seeded synthetic layered illustrations for tests, benchmarks and demos.

use crate::color::{unit_distance, Rgb};
use crate::geom::{ellipse, rect, Point, Segment, Subpath};
use crate::raster::rasterize_index;
use crate::svg::{FillRule, LayeredSvg, Shape};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Minimum visible pixels per layer.
pub const MIN_VISIBLE: usize = 64;
/// Minimum pairwise distance between layer colors (RGB in [0, 1]).
pub const MIN_COLOR_GAP: f64 = 0.15;

fn random_color(rng: &mut ChaCha8Rng, taken: &[Rgb]) -> Rgb {
    loop {
        let c = Rgb::new(rng.gen(), rng.gen(), rng.gen());
        if taken.iter().all(|t| unit_distance(t.to_unit(), c.to_unit()) >= MIN_COLOR_GAP) {
            return c;
        }
    }
}

fn star(rng: &mut ChaCha8Rng, c: Point, r: f64) -> Subpath {
    let n = rng.gen_range(5..10);
    let pts: Vec<Point> = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * (f64::from(k) + rng.gen_range(-0.3..0.3)) / f64::from(n);
            let rr = r * rng.gen_range(0.45..1.0);
            Point::new(c.x + rr * a.cos(), c.y + rr * a.sin())
        })
        .collect();
    Subpath::from_polygon(&pts).unwrap()
}

fn blob(rng: &mut ChaCha8Rng, c: Point, r: f64) -> Subpath {
    let n = rng.gen_range(4..7);
    let anchors: Vec<(Point, Point)> = (0..n)
        .map(|k| {
            let a = std::f64::consts::TAU * f64::from(k) / f64::from(n);
            let rr = r * rng.gen_range(0.6..1.0);
            let p = Point::new(c.x + rr * a.cos(), c.y + rr * a.sin());
            let t = Point::new(-a.sin(), a.cos()).scale(rr * 0.5);
            (p, t)
        })
        .collect();
    let segs = (0..n as usize)
        .map(|k| {
            let (p0, t0) = anchors[k];
            let (p1, t1) = anchors[(k + 1) % n as usize];
            Segment::Cubic(p0 + t0.scale(0.5), p1 - t1.scale(0.5), p1)
        })
        .collect();
    Subpath::closed(anchors[0].0, segs).unwrap()
}

fn random_shape(rng: &mut ChaCha8Rng, size: f64) -> Shape {
    let c = Point::new(rng.gen_range(0.1..0.9) * size, rng.gen_range(0.1..0.9) * size);
    let r = rng.gen_range(0.06..0.25) * size;
    let sp = match rng.gen_range(0..4) {
        0 => {
            let (w, h) = (r * rng.gen_range(1.0..2.0), r * rng.gen_range(1.0..2.0));
            let round = if rng.gen_bool(0.5) { r * 0.2 } else { 0.0 };
            rect(c.x - w / 2.0, c.y - h / 2.0, w, h, round, round)
        }
        1 => ellipse(c.x, c.y, r, r * rng.gen_range(0.5..1.2)),
        2 => star(rng, c, r),
        _ => blob(rng, c, r),
    };
    Shape::new(vec![sp], FillRule::NonZero)
}

/// A curated scene: full-canvas background plus `layers - 1` shapes with
/// well-separated colors, each showing at least `MIN_VISIBLE` pixels.
pub fn random_scene(seed: u64, size: u32, layers: usize) -> LayeredSvg {
    random_scene_with(seed, size, layers, MIN_VISIBLE)
}

pub fn random_scene_with(seed: u64, size: u32, layers: usize, min_visible: usize) -> LayeredSvg {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s = f64::from(size);
    let mut colors: Vec<Rgb> = Vec::new();
    let mut svg = LayeredSvg::new(s, s);
    let bg = random_color(&mut rng, &colors);
    colors.push(bg);
    svg.push(bg, vec![Shape::new(vec![rect(0.0, 0.0, s, s, 0.0, 0.0)], FillRule::NonZero)]);
    while svg.layers.len() < layers {
        let c = random_color(&mut rng, &colors);
        let shape = random_shape(&mut rng, s);
        let mut trial = svg.clone();
        trial.push(c, vec![shape]);
        let idx = rasterize_index(&trial, None).unwrap();
        let mut visible = vec![0usize; trial.layers.len() + 1];
        for &i in &idx.indices {
            visible[i as usize] += 1;
        }
        if visible[1..].iter().all(|&v| v >= min_visible) {
            colors.push(c);
            svg = trial;
        }
    }
    svg
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenes_are_deterministic_and_visible() {
        let a = random_scene(3, 96, 6);
        assert_eq!(a, random_scene(3, 96, 6));
        assert_eq!(a.layers.len(), 6);
        let idx = rasterize_index(&a, None).unwrap();
        for k in 1..=6 {
            assert!(idx.indices.iter().filter(|&&i| i == k).count() >= MIN_VISIBLE);
        }
    }
}
