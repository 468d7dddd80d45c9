//! Acceptance checks. One PASS/FAIL line per criterion; exits nonzero if any fail.

use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use layerdepth::curate::{curate, curate_at, merge_consecutive, CurationResult};
use layerdepth::depth::{normalize, DepthMap};
use layerdepth::fidelity::{path_count_error, rgb_mse, ssim};
use layerdepth::geom::rect;
use layerdepth::io::{save_index, save_rgb, DepthFormat};
use layerdepth::order::{order_consistency, OrderMetricConfig};
use layerdepth::raster::{rasterize_color, rasterize_index};
use layerdepth::relief::{depth_to_mesh, parse_obj};
use layerdepth::synth::random_scene;
use layerdepth::vector::{fill_holes, vectorize, ClusterInfo, ClusterMap, PipelineConfig};
use layerdepth::{
    decode_layer_index, encode_layer_index, parse_svg, serialize_svg, FillRule, LayeredSvg, RasterImage, RasterOptions,
    Rgb, Shape,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn encoding_round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values = (0..=65535u32).chain((0..1000).map(|_| rng.gen_range(0..1u32 << 24)));
    let mut checked = 0;
    for i in values {
        let rgb = encode_layer_index(i).map_err(|e| e.to_string())?;
        if decode_layer_index(rgb) != i {
            return Err(format!("index {i} decoded as {}", decode_layer_index(rgb)));
        }
        checked += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    check(secs < 1.0, format!("{checked} indices exact in {secs:.3}s (limit 1s)"))
}

fn affine_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (w, h) = (rng.gen_range(1..40), rng.gen_range(1..40));
        let d = DepthMap::from_fn(w, h, |_, _| rng.gen_range(-50.0..50.0));
        let a = rng.gen_range(1e-3..=10.0);
        let b = rng.gen_range(-1e3..1e3);
        let (n0, _) = normalize(&d).map_err(|e| e.to_string())?;
        let (n1, _) = normalize(&d.map(|v| a * v + b)).map_err(|e| e.to_string())?;
        for (x, y) in n0.values.iter().zip(&n1.values) {
            worst = worst.max((x - y).abs());
        }
    }
    check(worst < 1e-10, format!("100 maps, max deviation {worst:.2e} (limit 1e-10)"))
}

/// All unordered pairs, written independently of the library.
fn exhaustive_order(gt: &[f64], pred: &[f64]) -> f64 {
    let (mut kept, mut good) = (0u64, 0u64);
    for p in 0..gt.len() {
        for q in p + 1..gt.len() {
            let dg = gt[p] - gt[q];
            if dg == 0.0 {
                continue;
            }
            kept += 1;
            let dp = pred[p] - pred[q];
            if dg * dp > 0.0 {
                good += 1;
            }
        }
    }
    good as f64 / kept as f64
}

fn order_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cfg = OrderMetricConfig::with_pairs(50_000, 0);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let levels = rng.gen_range(2..12);
        let gt = DepthMap::from_fn(50, 50, |_, _| f64::from(rng.gen_range(0..levels)));
        let pred = DepthMap::from_fn(50, 50, |x, y| {
            if rng.gen_bool(0.7) {
                gt.get(x, y)
            } else {
                f64::from(rng.gen_range(0..levels))
            }
        });
        let sampled = order_consistency(&gt, &pred, &cfg).map_err(|e| e.to_string())?;
        worst = worst.max((sampled - exhaustive_order(&gt.values, &pred.values)).abs());
        let same = order_consistency(&gt, &gt, &cfg).map_err(|e| e.to_string())?;
        let negated = order_consistency(&gt, &gt.map(|v| -v), &cfg).map_err(|e| e.to_string())?;
        if same != 1.0 || negated != 0.0 {
            return Err(format!("identical gave {same}, negated gave {negated}"));
        }
    }
    check(worst <= 0.01, format!("20 maps, max |sampled - exhaustive| {worst:.4} (limit 0.01); identical 1, negated 0"))
}

fn closed_loop() -> Outcome {
    let start = Instant::now();
    let cfg = PipelineConfig::default();
    let scenes = 20;
    let (mut order, mut mse, mut ss, mut path) = (0.0, 0.0, 0.0, 0.0);
    for s in 0..scenes {
        let layers = 3 + (s as usize * 12) / (scenes as usize - 1);
        let doc = random_scene(1000 + s, 512, layers);
        let doc = parse_svg(&serialize_svg(&doc)).map_err(|e| e.to_string())?;
        let doc = match curate(&doc) {
            CurationResult::Curated { svg, .. } => svg,
            CurationResult::Rejected { reason, .. } => return Err(format!("scene {s} rejected: {reason}")),
        };
        let err = |e: layerdepth::Error| format!("scene {s}: {e}");
        let img = rasterize_color(&doc, &RasterOptions::default()).map_err(err)?;
        let gt = DepthMap::from(&rasterize_index(&doc, None).map_err(err)?);
        let out = vectorize(&img, &gt, &cfg).map_err(err)?;
        let size = Some((img.width, img.height));
        let back = rasterize_color(&out, &RasterOptions { size, ..Default::default() }).map_err(err)?;
        let pred = DepthMap::from(&rasterize_index(&out, size).map_err(err)?);
        order += order_consistency(&gt, &pred, &OrderMetricConfig { seed: s, ..Default::default() }).map_err(err)?;
        mse += rgb_mse(&img, &back).map_err(err)?;
        ss += ssim(&img, &back).map_err(err)?;
        path += path_count_error(doc.path_count(), out.path_count()).map_err(err)?;
    }
    let n = f64::from(scenes as u32);
    let (order, mse, ss, path) = (order / n, mse / n, ss / n, path / n);
    let secs = start.elapsed().as_secs_f64();
    check(
        order >= 0.98 && mse <= 5e-4 && ss >= 0.99 && path <= 0.2 && secs < 60.0,
        format!(
            "{scenes} scenes 512x512, 3-15 layers: order {order:.5} (>=0.98), rgb_mse {mse:.2e} (<=5e-4), \
             ssim {ss:.5} (>=0.99), path {path:.4} (<=0.2), {secs:.1}s (<60s)"
        ),
    )
}

fn brute_fill(cm: &ClusterMap, rank: usize) -> Vec<bool> {
    let own = (rank - 1) as u32;
    let w = cm.width as usize;
    let n = cm.labels.len();
    (0..n)
        .map(|p| {
            let l = cm.labels[p];
            if l < own {
                return false;
            }
            if l == own {
                return true;
            }
            let (px, py) = ((p % w) as i64, (p / w) as i64);
            let best = (0..n)
                .filter(|&q| cm.labels[q] <= own)
                .min_by_key(|&q| {
                    let (qx, qy) = ((q % w) as i64, (q / w) as i64);
                    ((px - qx).pow(2) + (py - qy).pow(2), q)
                })
                .expect("site exists");
            cm.labels[best] == own
        })
        .collect()
}

fn hole_fill_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut compared = 0;
    for m in 0..10 {
        let (w, h) = (rng.gen_range(8..=64u32), rng.gen_range(8..=64u32));
        let k = rng.gen_range(2..8u32);
        let mut labels = vec![0u32; (w * h) as usize];
        for _ in 0..rng.gen_range(3..20) {
            let (x0, y0) = (rng.gen_range(0..w), rng.gen_range(0..h));
            let (x1, y1) = (rng.gen_range(x0..w) + 1, rng.gen_range(y0..h) + 1);
            let l = rng.gen_range(0..k);
            for y in y0..y1 {
                for x in x0..x1 {
                    labels[(y * w + x) as usize] = l;
                }
            }
        }
        // Speckle noise so ties and thin gaps occur.
        for l in labels.iter_mut() {
            if rng.gen_bool(0.05) {
                *l = rng.gen_range(0..k);
            }
        }
        let clusters = (0..k)
            .map(|i| ClusterInfo {
                mean_color: [0.0; 3],
                pixel_count: labels.iter().filter(|&&l| l == i).count(),
                median_depth: Some(f64::from(i)),
            })
            .collect();
        let cm = ClusterMap { width: w, height: h, labels, clusters, ordered: true };
        for rank in 1..=k as usize {
            let got = fill_holes(&cm, rank).map_err(|e| e.to_string())?;
            if got != brute_fill(&cm, rank) {
                return Err(format!("map {m} ({w}x{h}), rank {rank} differs from brute force"));
            }
            compared += 1;
        }
    }
    check(true, format!("10 maps, {compared} layers identical to brute force"))
}

fn sq(x: f64, y: f64, s: f64) -> Vec<Shape> {
    vec![Shape::new(vec![rect(x, y, s, s, 0.0, 0.0)], FillRule::NonZero)]
}

fn curation() -> Outcome {
    let (white, red, blue, green) =
        (Rgb::new(255, 255, 255), Rgb::new(220, 20, 20), Rgb::new(20, 20, 220), Rgb::new(20, 160, 20));
    // Seven layers, two consecutive same-color runs (red x3, blue x2): four remain.
    let mut merge = LayeredSvg::new(40.0, 40.0);
    merge.push(white, sq(0.0, 0.0, 40.0));
    merge.push(red, sq(2.0, 2.0, 10.0));
    merge.push(red, sq(8.0, 8.0, 10.0));
    merge.push(red, sq(14.0, 2.0, 6.0));
    merge.push(blue, sq(10.0, 20.0, 12.0));
    merge.push(blue, sq(18.0, 26.0, 12.0));
    merge.push(green, sq(25.0, 5.0, 8.0));
    let merged = match curate(&merge) {
        CurationResult::Curated { svg, merged_layers } => {
            if svg.layers.len() != 4 || merged_layers != 3 {
                return Err(format!("merge fixture gave {} layers, {merged_layers} merged", svg.layers.len()));
            }
            svg
        }
        CurationResult::Rejected { reason, .. } => return Err(format!("merge fixture rejected: {reason}")),
    };
    let before = rasterize_color(&merge, &RasterOptions::default()).map_err(|e| e.to_string())?;
    let after = rasterize_color(&merged, &RasterOptions::default()).map_err(|e| e.to_string())?;
    if before != after || merge_consecutive(&merge) != merged {
        return Err("render changed after merging".into());
    }

    let mut ambiguous = LayeredSvg::new(40.0, 40.0);
    ambiguous.push(white, sq(0.0, 0.0, 40.0));
    ambiguous.push(red, sq(2.0, 2.0, 16.0));
    ambiguous.push(blue, sq(24.0, 24.0, 10.0));
    ambiguous.push(red, sq(10.0, 10.0, 16.0));
    if !matches!(curate_at(&ambiguous, Some((80, 80))), CurationResult::Rejected { .. }) {
        return Err("overlapping non-consecutive same-color layers were accepted".into());
    }
    check(true, "7 -> 4 layers with identical render; non-consecutive overlap rejected".into())
}

fn relief_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let (h, w) = (rng.gen_range(2..=100u32), rng.gen_range(2..=100u32));
        let d = DepthMap::from_fn(w, h, |_, _| rng.gen_range(0.0..20.0));
        let mesh = depth_to_mesh(&d, 7.5, 1).map_err(|e| e.to_string())?;
        let (v, f) = (mesh.vertices.len(), mesh.triangles.len());
        let (hw, faces) = ((h * w) as usize, 2 * (h as usize - 1) * (w as usize - 1));
        if v != hw || f != faces {
            return Err(format!("{h}x{w}: |V|={v} (want {hw}), |F|={f} (want {faces})"));
        }
        let (pv, pf) = parse_obj(&mesh.to_obj()).map_err(|e| e.to_string())?;
        if pv != mesh.vertices || pf != mesh.triangles {
            return Err(format!("{h}x{w}: OBJ round trip differs"));
        }
        let flat = depth_to_mesh(&DepthMap::from_fn(w, h, |_, _| 3.0), 7.5, 1).map_err(|e| e.to_string())?;
        if flat.vertices.iter().any(|p| p[2] != flat.vertices[0][2]) {
            return Err(format!("{h}x{w}: constant map not planar"));
        }
    }
    check(true, "30 random sizes: |V| = H*W, |F| = 2(H-1)(W-1), OBJ exact, constant map planar".into())
}

/// Mean SSIM with a 2D Gaussian window evaluated directly at every position.
fn direct_ssim(a: &RasterImage, b: &RasterImage) -> f64 {
    let luma = |img: &RasterImage| -> Vec<f64> {
        img.pixels
            .iter()
            .map(|p| (0.299 * f64::from(p.0[0]) + 0.587 * f64::from(p.0[1]) + 0.114 * f64::from(p.0[2])) / 255.0)
            .collect()
    };
    let (x, y) = (luma(a), luma(b));
    let (w, h) = (a.width as usize, a.height as usize);
    let mut win = [[0.0f64; 11]; 11];
    let mut total = 0.0;
    for (i, row) in win.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            let (di, dj) = (i as f64 - 5.0, j as f64 - 5.0);
            *v = (-(di * di + dj * dj) / (2.0 * 1.5 * 1.5)).exp();
            total += *v;
        }
    }
    let (c1, c2) = (0.01f64.powi(2), 0.03f64.powi(2));
    let mut sum = 0.0;
    let mut count = 0;
    for oy in 0..=h - 11 {
        for ox in 0..=w - 11 {
            let (mut mx, mut my, mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for i in 0..11 {
                for j in 0..11 {
                    let g = win[i][j] / total;
                    let k = (oy + i) * w + ox + j;
                    mx += g * x[k];
                    my += g * y[k];
                    sxx += g * x[k] * x[k];
                    syy += g * y[k] * y[k];
                    sxy += g * x[k] * y[k];
                }
            }
            let (vx, vy, cxy) = (sxx - mx * mx, syy - my * my, sxy - mx * my);
            sum += ((2.0 * mx * my + c1) * (2.0 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
            count += 1;
        }
    }
    sum / f64::from(count)
}

fn ssim_checks() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let noise =
        |rng: &mut ChaCha8Rng, w, h| RasterImage::from_fn(w, h, |_, _| Rgb::new(rng.gen(), rng.gen(), rng.gen()));
    let scene = |seed| rasterize_color(&random_scene(seed, 48, 6), &RasterOptions::default()).unwrap();
    let gradient = RasterImage::from_fn(40, 30, |x, y| Rgb::new((x * 6) as u8, (y * 8) as u8, 100));
    let blurred = RasterImage::from_fn(40, 30, |x, y| Rgb::new((x * 6 + 3) as u8, (y * 8) as u8, 90));
    let fixtures = vec![
        (noise(&mut rng, 32, 24), noise(&mut rng, 32, 24)),
        (scene(1), scene(2)),
        (scene(3), scene(3)),
        (gradient, blurred),
        (RasterImage::new(11, 11, Rgb::new(10, 10, 10)), noise(&mut rng, 11, 11)),
    ];
    let mut worst_self = 0.0f64;
    let mut worst_cross = 0.0f64;
    for (a, b) in &fixtures {
        worst_self = worst_self.max((ssim(a, a).map_err(|e| e.to_string())? - 1.0).abs());
        worst_cross = worst_cross.max((ssim(a, b).map_err(|e| e.to_string())? - direct_ssim(a, b)).abs());
    }
    check(
        worst_self <= 1e-9 && worst_cross <= 1e-4,
        format!(
            "self |ssim - 1| {worst_self:.1e} (<=1e-9); vs direct 2D window {worst_cross:.1e} (<=1e-4) on 5 fixtures"
        ),
    )
}

fn run_bin(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_layerdepth"))
        .args(args)
        .env("RUST_LOG", "off")
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!("{args:?} failed: {}", String::from_utf8_lossy(&out.stderr)));
    }
    Ok(out.stdout)
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let p = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    let doc = random_scene(77, 128, 7);
    let img = rasterize_color(&doc, &RasterOptions::default()).map_err(|e| e.to_string())?;
    let idx = rasterize_index(&doc, None).map_err(|e| e.to_string())?;
    let mut noisy = idx.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for v in noisy.indices.iter_mut() {
        if rng.gen_bool(0.1) {
            *v = rng.gen_range(1..=7);
        }
    }
    save_rgb(&img, Path::new(&p("img.png"))).map_err(|e| e.to_string())?;
    save_index(&idx, DepthFormat::FalseColor24, Path::new(&p("gt.png"))).map_err(|e| e.to_string())?;
    save_index(&noisy, DepthFormat::Gray16, Path::new(&p("pred.png"))).map_err(|e| e.to_string())?;
    let mut runs = Vec::new();
    for k in 0..3 {
        let out = p(&format!("v{k}.svg"));
        let stdout = run_bin(&[
            "vectorize",
            "--image",
            &p("img.png"),
            "--depth",
            &p("gt.png"),
            "--out",
            &out,
            "--gt-depth",
            &p("gt.png"),
            "--seed",
            "11",
        ])?;
        let svg = fs::read(&out).map_err(|e| e.to_string())?;
        let eval = run_bin(&["eval-depth", "--gt", &p("gt.png"), "--pred", &p("pred.png"), "--seed", "11"])?;
        runs.push((stdout, svg, eval));
    }
    check(
        runs.windows(2).all(|w| w[0] == w[1]),
        "vectorize (stdout + SVG) and eval-depth (stdout) byte-identical over 3 runs".into(),
    )
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("encoding round trip", encoding_round_trip),
        ("normalization affine invariance", affine_invariance),
        ("order metric vs exhaustive oracle", order_oracle),
        ("closed-loop vectorization", closed_loop),
        ("hole fill vs brute force", hole_fill_oracle),
        ("curation fixtures", curation),
        ("relief counting laws", relief_laws),
        ("ssim self-test and cross-check", ssim_checks),
        ("cli determinism", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        match f() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
